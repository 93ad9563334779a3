"""Random models for correlated graph pairs, with deterministic seeding.

Every sampler is pure given (params, seed).  A seed may be an int or a
numpy SeedSequence; experiment code derives per-trial SeedSequences from
(base_seed, spec, trial) so parallel sweeps reproduce exactly.

Pair classes are drawn with one uniform per vertex pair tested against
cumulative probabilities in the fixed order (p11, p10, p01, p00).  In the
sparse regime (p11+p10+p01 < 0.05) the non-(0,0) pairs are located by
geometric skips instead, which is distributionally identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._bitops import pack_rows
from .graphs import Graph, BiGraph

UNMATCHED = -1

_SPARSE_Q = 0.05
_PROB_TOL = 1e-12


@dataclass(frozen=True)
class ProbVector:
    """The four edge-class probabilities (p11, p10, p01, p00).

    p11: edge in both graphs; p10: only in the first; p01: only in the
    second; p00: in neither.  Must be non-negative and sum to 1.
    """

    p11: float
    p10: float
    p01: float
    p00: float

    def __post_init__(self):
        parts = (self.p11, self.p10, self.p01, self.p00)
        if any(x < 0 for x in parts):
            raise ValueError("class probabilities must be non-negative")
        if abs(sum(parts) - 1.0) > _PROB_TOL:
            raise ValueError(f"class probabilities must sum to 1, got {sum(parts)!r}")

    @property
    def p1s(self) -> float:
        """Marginal edge probability in the first graph."""
        return self.p11 + self.p10

    @property
    def ps1(self) -> float:
        """Marginal edge probability in the second graph."""
        return self.p11 + self.p01

    @property
    def p0s(self) -> float:
        return self.p01 + self.p00

    @property
    def ps0(self) -> float:
        return self.p10 + self.p00

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p11, self.p10, self.p01, self.p00)

    @classmethod
    def from_edge_prob(cls, p: float) -> "ProbVector":
        """Zero-noise vector: both graphs share the same ER(p) edge set."""
        return cls(p, 0.0, 0.0, 1.0 - p)

    @classmethod
    def from_subsampling(cls, r: float, sa: float, sb: float) -> "ProbVector":
        return cls(
            r * sa * sb,
            r * sa * (1.0 - sb),
            r * (1.0 - sa) * sb,
            1.0 - r * (sa + sb - sa * sb),
        )

    @classmethod
    def from_perturbation(cls, r: float, delta: float) -> "ProbVector":
        return cls(
            r * (1.0 - 2.0 * delta) + delta * delta,
            delta - delta * delta,
            delta - delta * delta,
            (1.0 - r) * (1.0 - 2.0 * delta) + delta * delta,
        )


class Alignment:
    """Partial injective vertex map, read as V_b -> V_a.

    map[v] is the matched first-graph vertex for second-graph vertex v,
    or UNMATCHED.  The naive bipartite matcher may emit non-injective
    maps; is_injective() reports whether the invariant actually holds.
    """

    __slots__ = ("map",)

    def __init__(self, mapping: Iterable[int]):
        m = np.array(mapping if not isinstance(mapping, np.ndarray) else mapping, dtype=np.int64)
        if m.ndim != 1:
            raise ValueError("alignment map must be one-dimensional")
        if m.size and m.min() < UNMATCHED:
            raise ValueError("alignment entries must be vertex ids or UNMATCHED")
        object.__setattr__(self, "map", m)
        m.flags.writeable = False

    def __setattr__(self, name, value):
        raise AttributeError("Alignment is immutable")

    @classmethod
    def identity(cls, n: int) -> "Alignment":
        return cls(np.arange(n, dtype=np.int64))

    @classmethod
    def unmatched(cls, n: int) -> "Alignment":
        return cls(np.full(n, UNMATCHED, dtype=np.int64))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Alignment":
        """Build from (b_vertex, a_vertex) pairs; the rest stay unmatched."""
        m = np.full(n, UNMATCHED, dtype=np.int64)
        for b, a in pairs:
            m[b] = a
        return cls(m)

    @classmethod
    def from_arrays(cls, n: int, b_ids: np.ndarray, a_ids: np.ndarray) -> "Alignment":
        m = np.full(n, UNMATCHED, dtype=np.int64)
        m[np.asarray(b_ids, dtype=np.int64)] = np.asarray(a_ids, dtype=np.int64)
        return cls(m)

    @property
    def n(self) -> int:
        return self.map.size

    @property
    def matched_count(self) -> int:
        return int(np.count_nonzero(self.map != UNMATCHED))

    def is_total(self) -> bool:
        return self.matched_count == self.n

    def is_injective(self) -> bool:
        hit = self.map[self.map != UNMATCHED]
        return hit.size == np.unique(hit).size

    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Matched (b_ids, a_ids), ascending by b id."""
        b = np.nonzero(self.map != UNMATCHED)[0]
        return b, self.map[b]

    def accuracy(self, truth: "Alignment") -> float:
        """Fraction of all n vertices mapped to their true counterpart."""
        if truth.n != self.n:
            raise ValueError("alignments cover different vertex counts")
        agree = (self.map == truth.map) & (self.map != UNMATCHED)
        return float(np.count_nonzero(agree)) / self.n

    def __eq__(self, other):
        return isinstance(other, Alignment) and np.array_equal(self.map, other.map)

    def __repr__(self):
        return f"Alignment(n={self.n}, matched={self.matched_count})"


@dataclass(frozen=True)
class CorrelatedPair:
    """A correlated graph pair plus the planted bijection gb -> ga."""

    ga: Graph
    gb: Graph
    truth: Alignment

    def __post_init__(self):
        if self.ga.n != self.gb.n:
            raise ValueError("graphs must have equal vertex counts")
        if self.truth.n != self.ga.n or not self.truth.is_total() or not self.truth.is_injective():
            raise ValueError("truth must be a total bijection")


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.PCG64(seed))


def pair_class_bits(rng: np.random.Generator, shape, p: ProbVector) -> tuple[np.ndarray, np.ndarray]:
    """Draw i.i.d. pair classes; returns (in_first, in_second) bool arrays.

    One uniform per entry against cumulative (p11, p10, p01, p00).
    """
    u = rng.random(shape)
    c1 = p.p11
    c2 = c1 + p.p10
    c3 = c2 + p.p01
    in_a = u < c2
    in_b = (u < c1) | ((u >= c2) & (u < c3))
    return in_a, in_b


def _triu_offsets(n: int) -> np.ndarray:
    # offsets[i] = flat index of pair (i, i+1) in row-major upper triangle
    i = np.arange(n, dtype=np.int64)
    return i * (2 * n - i - 1) // 2


def _flat_to_pairs(n: int, flat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    offsets = _triu_offsets(n)
    rows = np.searchsorted(offsets, flat, side="right") - 1
    cols = rows + 1 + (flat - offsets[rows])
    return rows, cols


def _sparse_pair_hits(rng: np.random.Generator, m: int, q: float) -> np.ndarray:
    """Flat upper-triangle indices of non-(0,0) pairs via geometric skips."""
    if q <= 0.0:
        return np.empty(0, dtype=np.int64)
    out = []
    pos = -1
    batch = max(64, int(m * q * 1.2) + 64)
    while True:
        skips = rng.geometric(q, batch).astype(np.int64)
        cum = pos + np.cumsum(skips)
        cut = int(np.searchsorted(cum, m, side="left"))
        out.append(cum[:cut])
        if cut < cum.size:
            break
        pos = int(cum[-1])
    return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


def _sample_pair_edges(rng: np.random.Generator, n: int, p: ProbVector):
    """Per-pair class draws for all C(n,2) pairs; returns dense bool matrices."""
    dense_a = np.zeros((n, n), dtype=bool)
    dense_b = np.zeros((n, n), dtype=bool)
    q = p.p11 + p.p10 + p.p01
    if q < _SPARSE_Q:
        m = n * (n - 1) // 2
        hits = _sparse_pair_hits(rng, m, q)
        if hits.size:
            u = rng.random(hits.size) * q
            in_a = u < p.p11 + p.p10
            in_b = (u < p.p11) | (u >= p.p11 + p.p10)
            rows, cols = _flat_to_pairs(n, hits)
            dense_a[rows[in_a], cols[in_a]] = True
            dense_b[rows[in_b], cols[in_b]] = True
    else:
        # row-by-row draws; chunked Generator.random equals one flat draw
        for i in range(n - 1):
            in_a, in_b = pair_class_bits(rng, n - 1 - i, p)
            dense_a[i, i + 1 :] = in_a
            dense_b[i, i + 1 :] = in_b
    dense_a |= dense_a.T
    dense_b |= dense_b.T
    return dense_a, dense_b


def sample_correlated_er(n: int, p: ProbVector, seed) -> CorrelatedPair:
    """Correlated ER pair on a shared vertex set; truth is the identity."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = _rng(seed)
    dense_a, dense_b = _sample_pair_edges(rng, n, p)
    return CorrelatedPair(
        Graph._from_packed(n, pack_rows(dense_a)),
        Graph._from_packed(n, pack_rows(dense_b)),
        Alignment.identity(n),
    )


def sample_subsampling(n: int, r: float, sa: float, sb: float, seed) -> CorrelatedPair:
    """Two independent edge subsamplings of one parent ER(n, r) graph.

    Matches sample_correlated_er with p11 = r*sa*sb, p10 = r*sa*(1-sb),
    p01 = r*(1-sa)*sb, p00 = 1 - r*(sa+sb-sa*sb), but is sampled
    literally: parent first, then per-edge keep draws.
    """
    for name, val in (("r", r), ("sa", sa), ("sb", sb)):
        if not 0.0 <= val <= 1.0:
            raise ValueError(f"{name} must be a probability")
    rng = _rng(seed)
    parent_a, _ = _sample_pair_edges(rng, n, ProbVector.from_edge_prob(r))
    us, vs = np.nonzero(np.triu(parent_a, 1))
    keep_a = rng.random(us.size) < sa
    keep_b = rng.random(us.size) < sb
    ga = Graph.from_edges(n, us[keep_a], vs[keep_a])
    gb = Graph.from_edges(n, us[keep_b], vs[keep_b])
    return CorrelatedPair(ga, gb, Alignment.identity(n))


def sample_perturbation(n: int, r: float, delta: float, seed) -> CorrelatedPair:
    """Both graphs flip each pair of a base ER(n, r) graph independently."""
    for name, val in (("r", r), ("delta", delta)):
        if not 0.0 <= val <= 1.0:
            raise ValueError(f"{name} must be a probability")
    rng = _rng(seed)
    base = np.zeros((n, n), dtype=bool)
    flip_a = np.zeros((n, n), dtype=bool)
    flip_b = np.zeros((n, n), dtype=bool)
    for i in range(n - 1):
        base[i, i + 1 :] = rng.random(n - 1 - i) < r
    for i in range(n - 1):
        flip_a[i, i + 1 :] = rng.random(n - 1 - i) < delta
    for i in range(n - 1):
        flip_b[i, i + 1 :] = rng.random(n - 1 - i) < delta
    dense_a = base ^ flip_a
    dense_b = base ^ flip_b
    dense_a |= dense_a.T
    dense_b |= dense_b.T
    return CorrelatedPair(
        Graph._from_packed(n, pack_rows(dense_a)),
        Graph._from_packed(n, pack_rows(dense_b)),
        Alignment.identity(n),
    )


def sample_correlated_bigraph(left_n: int, right_n: int, p: ProbVector, seed) -> tuple[BiGraph, BiGraph]:
    """Correlated bipartite pair: every left-right pair drawn i.i.d."""
    if left_n < 1 or right_n < 1:
        raise ValueError("both sides must have at least one vertex")
    rng = _rng(seed)
    in_a, in_b = pair_class_bits(rng, (left_n, right_n), p)
    return BiGraph.from_dense(in_a), BiGraph.from_dense(in_b)


def scramble(pair: CorrelatedPair, seed) -> CorrelatedPair:
    """Relabel gb's vertices uniformly at random, keeping truth consistent."""
    rng = _rng(seed)
    n = pair.gb.n
    sigma = rng.permutation(n)
    inv = np.argsort(sigma)
    dense = pair.gb.dense()[np.ix_(inv, inv)]
    gb = Graph._from_packed(n, pack_rows(dense))
    truth = Alignment(pair.truth.map[inv])
    return CorrelatedPair(pair.ga, gb, truth)
