"""Anchor extraction and rank matching: phase 1 of the aligner.

Anchors are the h highest-degree vertices.  Equal degrees are ordered by
ascending vertex id; the underlying sort allows any order for ties, but a
deterministic rule is required for reproducible runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, degree_sequence
from .models import Alignment


@dataclass(frozen=True)
class AnchorList:
    """h distinct vertices sorted by degree descending (ties by id)."""

    ordered: np.ndarray
    degrees: np.ndarray
    side: str = ""

    def __post_init__(self):
        self.ordered.flags.writeable = False
        self.degrees.flags.writeable = False

    def __len__(self) -> int:
        return len(self.ordered)


@dataclass(frozen=True)
class SeparationReport:
    """Consecutive degree gaps among the top h+1 degrees.

    sep3_ok means every gap is at least 3, which makes the anchor list
    stable under removal of any pair of non-anchor vertices.
    """

    gaps: np.ndarray
    min_gap: int
    sep3_ok: bool

    def __post_init__(self):
        self.gaps.flags.writeable = False


def top_h(g: Graph, h: int, side: str = "") -> AnchorList:
    """The h highest-degree vertices, in degree-sequence order."""
    if not 1 <= h <= g.n:
        raise ValueError(f"h must be in [1, {g.n}], got {h}")
    seq = degree_sequence(g)
    return AnchorList(seq.vertices[:h].copy(), seq.degrees[:h].copy(), side)


def anchor_align(ga: Graph, gb: Graph, h: int) -> Alignment:
    """Match the i-th highest-degree vertex of gb to that of ga, i in [h]."""
    if ga.n != gb.n:
        raise ValueError("graphs must have equal vertex counts")
    wa = top_h(ga, h, side="a")
    wb = top_h(gb, h, side="b")
    m = np.full(ga.n, -1, dtype=np.int64)
    m[wb.ordered] = wa.ordered
    return Alignment(m)


def separation_report(g: Graph, h: int) -> SeparationReport:
    """Gaps delta_i - delta_{i+1} for i in [h] of the degree sequence."""
    if not 1 <= h <= g.n - 1:
        raise ValueError(f"h must be in [1, {g.n - 1}], got {h}")
    seq = degree_sequence(g)
    gaps = seq.degrees[:h] - seq.degrees[1 : h + 1]
    min_gap = int(gaps.min())
    return SeparationReport(gaps, min_gap, min_gap >= 3)
