"""Robust anchor alignment: degree extremes + agreement-graph pruning.

Plain rank matching of top degrees breaks on small graphs: top degrees
tie, and cross-graph degree noise shifts ranks.  This variant pairs
candidates from both extremes of the degree sequence, refines the
pairing by consistent signature alignment over the candidate pool, and
keeps only pairs that survive pruning of the agreement graph, where
correctly aligned pairs are adjacent with probability p11+p00 but
misaligned ones only p1*p*1 + p0*p*0.

A single pass of that loop is not enough at desk scale (the initial
rank pairing can be mostly wrong, which poisons the signature columns),
so the alignment is bootstrapped: a small extreme pool is re-paired
under randomly jittered degree keys for a bounded number of retries,
each retry is scored by the density of its agreement graph padded and
pruned to exactly h pairs, and the best-scoring core is then grown by
doubling the pool.  The retry randomness comes from a fixed internal
seed, so the whole operation stays deterministic in its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._bitops import gather_columns
from .graphs import Graph, degree_sequence
from .models import Alignment
from .signatures import consistent_pairs, signature_rows

_CORE_FLOOR = 3
_PEEL_MIN_SIZE = 8
_PEEL_FRACTION = 0.8


@dataclass(frozen=True)
class RobustCfg:
    """Knobs for robust anchor alignment.

    candidates_per_extreme is the final pool half-width, default
    ceil(1.5*h) clamped to n//4 (a pool of about 3h vertices per graph);
    prune_floor (default h) is where agreement pruning stops when the
    density threshold was never reached.  density_threshold is the
    trusted-density level; pass 0.9*(p11+p00) when the model parameters
    are known, else the top decile of agreement degrees estimates it.
    bootstrap_retries bounds the jittered re-pairing attempts and
    max_iters the pool-growth iterations after a core is trusted.
    """

    candidates_per_extreme: int | None = None
    prune_floor: int | None = None
    density_threshold: float | None = None
    max_iters: int = 10
    bootstrap_retries: int = 128
    retry_seed: int = 0

    @classmethod
    def from_dict(cls, d: dict) -> "RobustCfg":
        return cls(
            candidates_per_extreme=d.get("candidates_per_extreme"),
            prune_floor=d.get("prune_floor"),
            density_threshold=d.get("density_threshold"),
            max_iters=d.get("max_iters", 10),
            bootstrap_retries=d.get("bootstrap_retries", 128),
            retry_seed=d.get("retry_seed", 0),
        )


def _agreement_adjacency(ga: Graph, gb: Graph, pa: np.ndarray, pb: np.ndarray) -> np.ndarray:
    """Agreement graph over aligned pairs (pa[i], pb[i]).

    Pairs i, j are adjacent iff the edge indicator of {pa[i], pa[j]}
    in ga equals that of {pb[i], pb[j]} in gb.
    """
    ea = gather_columns(ga.bits[pa], pa)
    eb = gather_columns(gb.bits[pb], pb)
    agr = ~(ea ^ eb)
    np.fill_diagonal(agr, False)
    return agr


def _density(adj: np.ndarray) -> float:
    m = adj.shape[0]
    if m < 2:
        return 0.0
    return adj.sum() / (m * (m - 1))


def _empirical_threshold(adj: np.ndarray) -> float:
    """0.9 times the agreement density among the top decile by degree."""
    m = adj.shape[0]
    take = max(2, m // 10)
    top = np.argsort(-adj.sum(axis=1), kind="stable")[:take]
    return 0.9 * _density(adj[np.ix_(top, top)])


def _prune_agreement(adj: np.ndarray, floor: int, threshold: float) -> tuple[np.ndarray, float]:
    """Delete minimum-degree vertices until the floor or the density target.

    Returns (kept indices ascending, final density).  Ties on minimum
    degree go to the lowest index.
    """
    m = adj.shape[0]
    alive = np.ones(m, dtype=bool)
    deg = adj.sum(axis=1).astype(np.int64)
    count = m
    edges = int(deg.sum()) // 2
    while count > max(2, floor):
        density = 2.0 * edges / (count * (count - 1))
        if density >= threshold:
            break
        cand = np.nonzero(alive)[0]
        v = cand[np.argmin(deg[cand])]
        alive[v] = False
        drop = adj[v] & alive
        deg[drop] -= 1
        edges -= int(np.count_nonzero(drop))
        deg[v] = 0
        count -= 1
    density = 2.0 * edges / (count * (count - 1)) if count >= 2 else 0.0
    return np.nonzero(alive)[0], density


def _rank_pool(order: np.ndarray, c: int) -> np.ndarray:
    """Top c and bottom c of a degree-sequence order, deduplicated."""
    c = min(c, len(order))
    top = order[:c]
    bottom = order[len(order) - c :][::-1]
    bottom = bottom[~np.isin(bottom, top)]
    return np.concatenate([top, bottom])


def _padded_confidence(
    ga: Graph, gb: Graph,
    pa: np.ndarray, pb: np.ndarray,
    pool_a: np.ndarray, pool_b: np.ndarray,
    h: int,
) -> float:
    """Density after padding a pair set to h with rank pairs and pruning
    back to exactly h.  Fixed-size scores are comparable across retries;
    small dense-by-luck sets cannot fake a good score once padded."""
    free_a = pool_a[~np.isin(pool_a, pa)]
    free_b = pool_b[~np.isin(pool_b, pb)]
    k = min(free_a.size, free_b.size, max(0, h - pa.size))
    fa = np.concatenate([pa, free_a[:k]])
    fb = np.concatenate([pb, free_b[:k]])
    if fa.size < 2:
        return 0.0
    agr = _agreement_adjacency(ga, gb, fa, fb)
    _, dens = _prune_agreement(agr, min(h, fa.size), math.inf)
    return dens


def _peel_outliers(ga: Graph, gb: Graph, pa: np.ndarray, pb: np.ndarray):
    """Drop pairs whose agreement degree sits far below the set's own
    density level.  A correctly aligned pair agrees with nearly every
    other correct pair, so the handful of misaligned stragglers that
    slip past density pruning stand out by degree."""
    while pa.size >= _PEEL_MIN_SIZE:
        agr = _agreement_adjacency(ga, gb, pa, pb)
        deg = agr.sum(axis=1)
        dens = deg.sum() / (pa.size * (pa.size - 1))
        keep = deg >= _PEEL_FRACTION * dens * (pa.size - 1)
        if keep.all():
            break
        pa, pb = pa[keep], pb[keep]
    return pa, pb


def robust_anchor_align(ga: Graph, gb: Graph, h: int, cfg: RobustCfg | None = None) -> Alignment:
    """Anchor pairs that survive degree pairing, consistency, and pruning.

    May return fewer than h pairs; downstream signature length then
    equals the returned count.  Degenerate inputs (e.g. regular graphs)
    yield a small or empty alignment rather than an error.
    """
    cfg = cfg or RobustCfg()
    if ga.n != gb.n:
        raise ValueError("graphs must have equal vertex counts")
    n = ga.n
    if cfg.candidates_per_extreme is not None:
        c_max = cfg.candidates_per_extreme
    else:
        c_max = max(1, min(math.ceil(1.5 * h), n // 4))
    if c_max < 1 or 4 * c_max > n:
        raise ValueError(f"candidates_per_extreme must satisfy 1 <= 4c <= n, got {c_max}")
    floor = cfg.prune_floor if cfg.prune_floor is not None else h
    threshold = cfg.density_threshold

    rng = np.random.Generator(np.random.PCG64(cfg.retry_seed))
    deg_a = ga.degrees.astype(np.float64)
    deg_b = gb.degrees.astype(np.float64)
    order_a = degree_sequence(ga).vertices
    order_b = degree_sequence(gb).vertices
    # cross-graph degree jitter scale, from the rank-aligned sorted degrees
    jitter = max(0.5, 1.25 * float(np.mean(np.abs(np.sort(deg_a) - np.sort(deg_b)))))

    acc_a = np.empty(0, dtype=np.int64)
    acc_b = np.empty(0, dtype=np.int64)
    best_conf = -math.inf
    c_cur = max(4, min(h // 2 if h >= 16 else h, c_max))
    retries_left = cfg.bootstrap_retries
    growth_left = cfg.max_iters
    stalled = False

    while True:
        trusted = threshold is not None and best_conf >= threshold
        bootstrap = not trusted and retries_left > 0
        if bootstrap:
            retries_left -= 1
        elif growth_left > 0:
            growth_left -= 1
        else:
            break

        pool_a = _rank_pool(order_a, c_cur)
        pool_b = _rank_pool(order_b, c_cur)
        k = min(pool_a.size, pool_b.size)
        pool_a, pool_b = pool_a[:k], pool_b[:k]
        free_a = pool_a[~np.isin(pool_a, acc_a)]
        free_b = pool_b[~np.isin(pool_b, acc_b)]
        kk = min(free_a.size, free_b.size)
        if kk == 0 and acc_a.size == 0:
            break
        key_a = deg_a[free_a]
        key_b = deg_b[free_b]
        if bootstrap and retries_left < cfg.bootstrap_retries - 1:
            # every bootstrap attempt after the first explores alternative
            # rank orders by jittering the degree keys
            key_a = key_a + rng.normal(0.0, jitter, key_a.size)
            key_b = key_b + rng.normal(0.0, jitter, key_b.size)
        oa = np.lexsort((free_a, -key_a))
        ob = np.lexsort((free_b, -key_b))
        seed_a = np.concatenate([acc_a, free_a[oa][:kk]])
        seed_b = np.concatenate([acc_b, free_b[ob][:kk]])
        cand_a = np.concatenate([acc_a, free_a])
        cand_b = np.concatenate([acc_b, free_b])

        rows_a = signature_rows(ga, cand_a, seed_a)
        rows_b = signature_rows(gb, cand_b, seed_b)
        ia, ib = consistent_pairs(rows_a, rows_b)
        if ia.size < 2:
            if not bootstrap:
                break
            continue
        pa, pb = cand_a[ia], cand_b[ib]
        agr = _agreement_adjacency(ga, gb, pa, pb)
        if threshold is None:
            threshold = _empirical_threshold(agr)
        keep, dens = _prune_agreement(agr, floor, threshold)
        if dens < threshold:
            # floor-stopped while still dirty: dig for the clean core and
            # let the confidence score decide whether it is real
            keep, dens = _prune_agreement(agr, _CORE_FLOOR, threshold)
        core_a, core_b = pa[keep], pb[keep]
        conf = _padded_confidence(ga, gb, core_a, core_b, pool_a, pool_b, h)
        if conf > best_conf + 1e-12:
            acc_a, acc_b, best_conf = core_a, core_b, conf
            stalled = False
        elif not bootstrap:
            if stalled or c_cur >= c_max:
                break
            stalled = True
        if not bootstrap or best_conf >= threshold:
            c_cur = min(c_max, c_cur * 2)

    acc_a, acc_b = _peel_outliers(ga, gb, acc_a, acc_b)
    return Alignment.from_arrays(n, acc_b, acc_a)
