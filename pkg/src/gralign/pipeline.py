"""Whole-graph alignment drivers combining the anchor and signature phases."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .anchors import anchor_align, top_h
from .graphs import Graph
from .models import UNMATCHED, Alignment
from .robust import RobustCfg, robust_anchor_align
from .signatures import (
    SignatureTable,
    consistent_bipartite_align,
    naive_bipartite_align,
    signature_rows,
    signatures_of,
)

VARIANTS = ("naive", "consistent-iterative")


@dataclass(frozen=True)
class MatchCfg:
    """Configuration of the consistent-iterative variant.

    max_rounds caps the consistent re-alignment rounds over still
    unmatched vertices; the residue left after that is matched naively
    unless residue_fallback is "none" (then it stays unmatched).
    """

    max_rounds: int = 5
    residue_fallback: str = "naive"
    robust: RobustCfg = field(default_factory=RobustCfg)

    @classmethod
    def from_dict(cls, d: dict) -> "MatchCfg":
        return cls(
            max_rounds=d.get("max_rounds", 5),
            residue_fallback=d.get("residue_fallback", "naive"),
            robust=RobustCfg.from_dict(d.get("robust", {})),
        )


@dataclass(frozen=True)
class AlignReport:
    """full_align outcome plus the anchor pairing and phase timings."""

    alignment: Alignment
    anchor_map: Alignment
    h: int
    t_anchor_ms: float
    t_match_ms: float


def _naive_match(ga: Graph, gb: Graph, h: int, anchor_map: Alignment) -> Alignment:
    ta = signatures_of(ga, top_h(ga, h))
    tb = signatures_of(gb, top_h(gb, h))
    m = anchor_map.map.copy()
    if len(ta) and len(tb):
        rest = naive_bipartite_align(ta, tb)
        hit = rest.map != UNMATCHED
        m[hit] = rest.map[hit]
    return Alignment(m)


def _subset_table(g: Graph, vertices: np.ndarray, anchors: np.ndarray) -> SignatureTable:
    return SignatureTable(signature_rows(g, vertices, anchors), vertices, anchors.size, g.n)


def _consistent_match(ga: Graph, gb: Graph, anchor_map: Alignment, cfg: MatchCfg) -> Alignment:
    anchors_b, anchors_a = anchor_map.pairs()
    m = anchor_map.map.copy()
    matched_a = np.zeros(ga.n, dtype=bool)
    matched_a[anchors_a] = True
    for _ in range(cfg.max_rounds):
        rest_b = np.nonzero(m == UNMATCHED)[0]
        rest_a = np.nonzero(~matched_a)[0]
        if rest_b.size == 0 or rest_a.size == 0:
            break
        found = consistent_bipartite_align(
            _subset_table(ga, rest_a, anchors_a), _subset_table(gb, rest_b, anchors_b)
        )
        hit = found.map != UNMATCHED
        if not hit.any():
            break
        m[hit] = found.map[hit]
        matched_a[found.map[hit]] = True

    rest_b = np.nonzero(m == UNMATCHED)[0]
    rest_a = np.nonzero(~matched_a)[0]
    if rest_b.size and rest_a.size and cfg.residue_fallback == "naive":
        rest = naive_bipartite_align(
            _subset_table(ga, rest_a, anchors_a), _subset_table(gb, rest_b, anchors_b)
        )
        hit = rest.map != UNMATCHED
        m[hit] = rest.map[hit]
    return Alignment(m)


def full_align_report(
    ga: Graph,
    gb: Graph,
    h: int,
    variant: str = "naive",
    cfg: MatchCfg | None = None,
) -> AlignReport:
    """Run both phases and report the alignment with per-phase timings."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    cfg = cfg or MatchCfg()
    t0 = time.perf_counter()
    if variant == "naive":
        anchor_map = anchor_align(ga, gb, h)
        t1 = time.perf_counter()
        alignment = _naive_match(ga, gb, h, anchor_map)
    else:
        anchor_map = robust_anchor_align(ga, gb, h, cfg.robust)
        if anchor_map.matched_count < 2:
            # nothing survived pruning (e.g. near-regular degrees); fall
            # back to rank pairing so the signature phase has anchors
            anchor_map = anchor_align(ga, gb, h)
        t1 = time.perf_counter()
        alignment = _consistent_match(ga, gb, anchor_map, cfg)
    t2 = time.perf_counter()
    return AlignReport(alignment, anchor_map, h, (t1 - t0) * 1e3, (t2 - t1) * 1e3)


def full_align(
    ga: Graph,
    gb: Graph,
    h: int,
    variant: str = "naive",
    cfg: MatchCfg | None = None,
) -> Alignment:
    """Two-phase alignment of gb onto ga.

    "naive": rank-match the top h degrees, then map every other gb
    vertex to the ga vertex with the nearest signature (possibly
    non-injective).  "consistent-iterative": robust anchor alignment,
    then repeated consistent rounds over still-unmatched vertices, with
    a naive pass on whatever residue remains.
    """
    return full_align_report(ga, gb, h, variant, cfg).alignment
