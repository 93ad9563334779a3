"""Signature extraction and Hamming-distance matching: phase 2 kernel.

A signature is the packed bit row recording a vertex's adjacency to the
ordered anchor list.  The matching kernel compares signature tables in
word-blocked XOR+popcount passes, so the dominant cost of whole-graph
alignment is O((n-h)^2 * h / 64).  All tie breaks go to the lowest
vertex id, which keeps results independent of block size or scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._bitops import gather_columns, pack_rows, unpack_rows
from .anchors import AnchorList
from .graphs import Graph
from .models import UNMATCHED, Alignment, ProbVector, pair_class_bits, _rng

_BLOCK = 256


@dataclass(frozen=True)
class Signature:
    """Fixed-length packed bit vector of anchor adjacencies."""

    bits: np.ndarray
    length: int

    def __post_init__(self):
        self.bits.flags.writeable = False

    @classmethod
    def from_bools(cls, values) -> "Signature":
        arr = np.asarray(values, dtype=bool).reshape(1, -1)
        return cls(pack_rows(arr)[0], arr.shape[1])

    def to_bools(self) -> np.ndarray:
        return unpack_rows(self.bits.reshape(1, -1), self.length)[0]

    def popcount(self) -> int:
        return int(np.bitwise_count(self.bits).sum())

    def __eq__(self, other):
        return (
            isinstance(other, Signature)
            and self.length == other.length
            and np.array_equal(self.bits, other.bits)
        )


@dataclass(frozen=True)
class SignatureTable:
    """One signature row per non-anchor vertex, ids ascending.

    `n` is the vertex count of the source graph, kept so matchers can
    build alignment vectors of the right size.
    """

    rows: np.ndarray
    index: np.ndarray
    length: int
    n: int

    def __post_init__(self):
        self.rows.flags.writeable = False
        self.index.flags.writeable = False

    def __len__(self) -> int:
        return len(self.index)

    def row(self, i: int) -> Signature:
        return Signature(self.rows[i].copy(), self.length)


def signature_rows(g: Graph, vertices: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    """Packed anchor-adjacency rows for an arbitrary vertex subset.

    Unlike signatures_of, the subset may overlap the anchor list (a
    vertex that anchors position j simply has bit j = 0 there).
    """
    dense = gather_columns(g.bits[vertices], anchors)
    return pack_rows(dense)


def signatures_of(g: Graph, anchors: AnchorList) -> SignatureTable:
    """Signature table of all non-anchor vertices against the anchor list."""
    mask = np.ones(g.n, dtype=bool)
    mask[anchors.ordered] = False
    index = np.nonzero(mask)[0]
    rows = signature_rows(g, index, anchors.ordered)
    return SignatureTable(rows, index, len(anchors), g.n)


def hamming(a: Signature, b: Signature) -> int:
    """Number of differing bit positions between two equal-length signatures."""
    if a.length != b.length:
        raise ValueError("signature lengths differ")
    return int(np.bitwise_count(a.bits ^ b.bits).sum())


def _cross_argmins(rows_a: np.ndarray, rows_b: np.ndarray):
    """Row-wise nearest neighbours in both directions, ties to lowest index.

    Returns (mu_ab, mu_ba): mu_ab[i] is the b-row nearest to a-row i and
    mu_ba[j] the a-row nearest to b-row j.  Computed in b-row blocks; the
    running a-side minimum only updates on strict improvement so earlier
    (lower) b indices win ties regardless of block size.
    """
    na, nb = rows_a.shape[0], rows_b.shape[0]
    mu_ba = np.empty(nb, dtype=np.int64)
    best_a = np.full(na, np.iinfo(np.int64).max, dtype=np.int64)
    mu_ab = np.zeros(na, dtype=np.int64)
    for start in range(0, nb, _BLOCK):
        blk = rows_b[start : start + _BLOCK]
        d = np.bitwise_count(blk[:, None, :] ^ rows_a[None, :, :]).sum(axis=2, dtype=np.int64)
        mu_ba[start : start + blk.shape[0]] = d.argmin(axis=1)
        loc_min = d.min(axis=0)
        loc_arg = d.argmin(axis=0) + start
        upd = loc_min < best_a
        best_a[upd] = loc_min[upd]
        mu_ab[upd] = loc_arg[upd]
    return mu_ab, mu_ba


def naive_bipartite_align(ta: SignatureTable, tb: SignatureTable) -> Alignment:
    """Map each tb vertex to the ta vertex with the nearest signature.

    Ties go to the lowest ta vertex id.  The output can be non-injective;
    the consistent variant below is the injective refinement.
    """
    if ta.length != tb.length:
        raise ValueError("signature lengths differ")
    if len(ta) != len(tb):
        raise ValueError("tables must have equal row counts")
    _, mu_ba = _cross_argmins(ta.rows, tb.rows)
    m = np.full(tb.n, UNMATCHED, dtype=np.int64)
    m[tb.index] = ta.index[mu_ba]
    return Alignment(m)


def consistent_pairs(rows_a: np.ndarray, rows_b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mutually unrivalled nearest-neighbour pairs between two row sets.

    Row pair (i, j) is kept iff no other a-row points at j, no other
    b-row points at i, and at least one of them points at the other.
    Returns index arrays (into rows_a and rows_b) sorted by a-row index.
    """
    na, nb = rows_a.shape[0], rows_b.shape[0]
    if na == 0 or nb == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    mu_ab, mu_ba = _cross_argmins(rows_a, rows_b)
    hits_on_b = np.bincount(mu_ab, minlength=nb)
    hits_on_a = np.bincount(mu_ba, minlength=na)

    ia, ib = [], []
    # candidates where the a-row points at the b-row
    for i in np.nonzero(hits_on_b[mu_ab] == 1)[0]:
        j = mu_ab[i]
        back = mu_ba[j] == i
        rivals_on_a = hits_on_a[i] - (1 if back else 0)
        if rivals_on_a == 0:
            ia.append(i)
            ib.append(j)
    # candidates reachable only through the b-row's own pointer
    for j in np.nonzero(hits_on_a[mu_ba] == 1)[0]:
        i = mu_ba[j]
        if mu_ab[i] == j:
            continue  # already considered above
        if hits_on_b[j] == 0:
            ia.append(i)
            ib.append(j)
    order = np.argsort(np.asarray(ia, dtype=np.int64), kind="stable")
    return (
        np.asarray(ia, dtype=np.int64)[order],
        np.asarray(ib, dtype=np.int64)[order],
    )


def consistent_bipartite_align(ta: SignatureTable, tb: SignatureTable) -> Alignment:
    """Partial alignment keeping only mutually unrivalled nearest pairs."""
    if ta.length != tb.length:
        raise ValueError("signature lengths differ")
    ia, ib = consistent_pairs(ta.rows, tb.rows)
    m = np.full(tb.n, UNMATCHED, dtype=np.int64)
    m[tb.index[ib]] = ta.index[ia]
    return Alignment(m)


def misalignment_frequency(p: ProbVector, h: int, trials: int, seed, chunk: int = 1 << 14) -> float:
    """Monte Carlo frequency of the two-vertex misalignment event.

    Each trial draws a correlated bipartite pair on left vertices {u, v}
    and h right vertices and tests whether either vertex's cross distance
    is at most its own-match distance.  Chunked so large trial counts
    stay within memory.
    """
    rng = _rng(seed)
    bad = 0
    done = 0
    while done < trials:
        t = min(chunk, trials - done)
        in_a, in_b = pair_class_bits(rng, (t, 2, h), p)
        diff_uu = (in_a[:, 0] ^ in_b[:, 0]).sum(axis=1)
        diff_vu = (in_a[:, 1] ^ in_b[:, 0]).sum(axis=1)
        diff_vv = (in_a[:, 1] ^ in_b[:, 1]).sum(axis=1)
        diff_uv = (in_a[:, 0] ^ in_b[:, 1]).sum(axis=1)
        event = (diff_vu <= diff_uu) | (diff_uv <= diff_vv)
        bad += int(np.count_nonzero(event))
        done += t
    return bad / trials
