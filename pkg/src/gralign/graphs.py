"""Immutable simple graphs and bipartite graphs with bit-packed adjacency.

Vertices are dense integer ids 0..n-1.  Adjacency is kept as packed bit
rows so that signature extraction and Hamming distances reduce to word
operations; per-vertex degrees are cached at construction.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from ._bitops import gather_columns, get_bit, n_words, pack_rows, popcount_rows, unpack_rows


class Graph:
    """Undirected simple graph, immutable after construction.

    `bits[v]` holds the packed adjacency row of vertex v; `degrees[v]` is
    its cached popcount.  Optional `labels` carry external vertex names
    from edge-list files and do not participate in equality.
    """

    __slots__ = ("n", "bits", "degrees", "labels")

    def __init__(self, dense: np.ndarray, labels: Sequence[str] | None = None):
        dense = np.asarray(dense, dtype=bool)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if dense.shape[0] == 0:
            raise ValueError("graph must have at least one vertex")
        if np.any(np.diagonal(dense)):
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(dense, dense.T):
            raise ValueError("adjacency matrix must be symmetric")
        self._init_packed(dense.shape[0], pack_rows(dense), labels)

    def _init_packed(self, n, bits, labels):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "degrees", popcount_rows(bits))
        object.__setattr__(self, "labels", tuple(labels) if labels is not None else None)
        self.bits.flags.writeable = False
        self.degrees.flags.writeable = False

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @classmethod
    def _from_packed(cls, n: int, bits: np.ndarray, labels=None) -> "Graph":
        """Trusted constructor for internally built, already-valid rows."""
        g = cls.__new__(cls)
        g._init_packed(n, bits, labels)
        return g

    @classmethod
    def from_dense(cls, dense: np.ndarray, labels=None) -> "Graph":
        return cls(dense, labels)

    @classmethod
    def from_edges(cls, n: int, us: Iterable[int], vs: Iterable[int], labels=None) -> "Graph":
        """Build from parallel endpoint arrays; duplicates collapse."""
        us = np.asarray(list(us) if not isinstance(us, np.ndarray) else us, dtype=np.int64)
        vs = np.asarray(list(vs) if not isinstance(vs, np.ndarray) else vs, dtype=np.int64)
        if us.shape != vs.shape:
            raise ValueError("endpoint arrays must have equal length")
        if n < 1:
            raise ValueError("graph must have at least one vertex")
        if us.size and (us.min() < 0 or vs.min() < 0 or us.max() >= n or vs.max() >= n):
            raise ValueError("vertex id out of range")
        if np.any(us == vs):
            raise ValueError("self-loops are not allowed")
        dense = np.zeros((n, n), dtype=bool)
        dense[us, vs] = True
        dense[vs, us] = True
        return cls._from_packed(n, pack_rows(dense), labels)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        if n < 1:
            raise ValueError("graph must have at least one vertex")
        return cls._from_packed(n, np.zeros((n, n_words(n)), dtype=np.uint64))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        dense = ~np.eye(n, dtype=bool)
        return cls(dense)

    def has_edge(self, u: int, v: int) -> bool:
        return get_bit(self.bits, u, v)

    def neighbors(self, v: int) -> np.ndarray:
        return np.nonzero(unpack_rows(self.bits[v : v + 1], self.n)[0])[0]

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def max_degree(self) -> int:
        return int(self.degrees.max())

    def dense(self) -> np.ndarray:
        return unpack_rows(self.bits, self.n)

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge endpoints as (us, vs) with us < vs, sorted by (u, v)."""
        d = self.dense()
        us, vs = np.nonzero(np.triu(d, 1))
        return us, vs

    @property
    def num_edges(self) -> int:
        return int(self.degrees.sum()) // 2

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and np.array_equal(self.bits, other.bits)
        )

    def __hash__(self):
        return hash((self.n, self.bits.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


class BiGraph:
    """Bipartite graph: left_n packed rows of width h (right side)."""

    __slots__ = ("left_n", "h", "rows")

    def __init__(self, left_n: int, h: int, rows: np.ndarray):
        rows = np.ascontiguousarray(rows, dtype=np.uint64)
        if rows.shape != (left_n, n_words(h)):
            raise ValueError("row array shape does not match (left_n, words(h))")
        tail = n_words(h) * 64 - h
        if tail and np.any(rows[:, -1] >> np.uint64(64 - tail)):
            raise ValueError("bits beyond width h must be zero")
        object.__setattr__(self, "left_n", left_n)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "rows", rows)
        rows.flags.writeable = False

    def __setattr__(self, name, value):
        raise AttributeError("BiGraph is immutable")

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "BiGraph":
        dense = np.asarray(dense, dtype=bool)
        return cls(dense.shape[0], dense.shape[1], pack_rows(dense))

    def has_edge(self, u: int, j: int) -> bool:
        return get_bit(self.rows, u, j)

    def dense(self) -> np.ndarray:
        return unpack_rows(self.rows, self.h)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BiGraph)
            and self.left_n == other.left_n
            and self.h == other.h
            and np.array_equal(self.rows, other.rows)
        )

    def __repr__(self):
        return f"BiGraph(left_n={self.left_n}, h={self.h})"


@dataclass(frozen=True)
class DegreeSequence:
    """All vertices sorted by degree descending, ties by ascending id."""

    vertices: np.ndarray
    degrees: np.ndarray

    def __post_init__(self):
        self.vertices.flags.writeable = False
        self.degrees.flags.writeable = False

    def __len__(self) -> int:
        return len(self.vertices)

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(v), int(d)) for v, d in zip(self.vertices, self.degrees)]


def degree_sequence(g: Graph) -> DegreeSequence:
    """Degree sequence in decreasing order, equal degrees by ascending id."""
    order = np.lexsort((np.arange(g.n), -g.degrees))
    return DegreeSequence(order, g.degrees[order].copy())


def induced_subgraph(g: Graph, keep: Iterable[int]) -> Graph:
    """Subgraph on `keep`, relabeled 0..k-1 in ascending original-id order."""
    keep = np.unique(np.asarray(list(keep) if not isinstance(keep, np.ndarray) else keep, dtype=np.int64))
    if keep.size == 0:
        raise ValueError("keep set must be non-empty")
    if keep[0] < 0 or keep[-1] >= g.n:
        raise ValueError("vertex id out of range")
    sub = gather_columns(g.bits[keep], keep)
    return Graph._from_packed(keep.size, pack_rows(sub))


def induced_bigraph(g: Graph, left: Iterable[int], anchors: Sequence[int]) -> BiGraph:
    """Bipartite subgraph: bit (u, j) set iff {left[u], anchors[j]} is an edge.

    Left vertices keep ascending original-id order; the anchor order is
    preserved as given.
    """
    left = np.unique(np.asarray(list(left) if not isinstance(left, np.ndarray) else left, dtype=np.int64))
    anchors = np.asarray(list(anchors) if not isinstance(anchors, np.ndarray) else anchors, dtype=np.int64)
    if anchors.size != np.unique(anchors).size:
        raise ValueError("anchor list contains duplicates")
    if left.size and (left[0] < 0 or left[-1] >= g.n):
        raise ValueError("vertex id out of range")
    if anchors.size and (anchors.min() < 0 or anchors.max() >= g.n):
        raise ValueError("vertex id out of range")
    if np.intersect1d(left, anchors).size:
        raise ValueError("left set and anchors must be disjoint")
    dense = gather_columns(g.bits[left], anchors)
    return BiGraph(left.size, anchors.size, pack_rows(dense))


def read_edge_list(source: str | Path | IO) -> Graph:
    """Parse an edge-list text file into a Graph.

    One edge per line as two whitespace-separated tokens; lines starting
    with '#' and blank lines are ignored.  Vertices get ids 0..n-1 in
    order of first appearance and the original tokens are kept in
    Graph.labels.  Duplicate edges collapse silently (real PPI files
    contain them); self-loops and malformed lines are errors.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")

    ids: dict[str, int] = {}
    us: list[int] = []
    vs: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ValueError(f"line {lineno}: expected two tokens, got {len(tokens)}")
        a, b = tokens
        if a == b:
            raise ValueError(f"line {lineno}: self-loop on vertex {a!r}")
        for tok in (a, b):
            if tok not in ids:
                ids[tok] = len(ids)
        us.append(ids[a])
        vs.append(ids[b])
    if not ids:
        raise ValueError("edge list is empty: no vertices")
    labels = [None] * len(ids)
    for tok, i in ids.items():
        labels[i] = tok
    return Graph.from_edges(len(ids), us, vs, labels=labels)


def write_edge_list(g: Graph, sink: str | Path | IO) -> None:
    """Write each edge once as "u v" with u < v, sorted by (u, v).

    Every line is newline-terminated.  read_edge_list(write_edge_list(g))
    reproduces g up to vertex naming (isolated vertices are not
    representable in the format).
    """
    us, vs = g.edges()
    body = "".join(f"{u} {v}\n" for u, v in zip(us, vs))
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sink.write(body)


def edge_list_text(g: Graph) -> str:
    buf = io.StringIO()
    write_edge_list(g, buf)
    return buf.getvalue()
