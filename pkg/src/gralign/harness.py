"""Monte Carlo experiment harness: trial runner, CSV sweeps, timing.

Every trial derives its random streams from (base_seed, spec_id, trial),
so sweeps are reproducible and schedule-independent: parallel and serial
executions emit identical rows, assembled in canonical (spec, trial)
order.  Wall-clock columns are the one non-deterministic part of a row;
pass include_timing=False to zero them when byte-identical output files
are required.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from statistics import mean, median
from typing import IO, Sequence

import numpy as np

from .bounds import default_anchor_count
from .graphs import Graph, read_edge_list
from .models import Alignment, CorrelatedPair, ProbVector, _rng, sample_correlated_er, sample_perturbation, sample_subsampling, scramble
from .pipeline import MatchCfg, full_align_report

MODELS = ("correlated-er", "subsampling", "perturbation", "file+subsample")

CSV_COLUMNS = (
    "spec_id", "trial", "seed", "n", "p11", "p10", "p01", "p00",
    "h", "variant", "anchor_acc", "acc", "t_total_ms", "t_anchor_ms", "t_match_ms",
)

_SEED_MASK = (1 << 64) - 1


def noise_prob(n: int, exponent: float, p11: float = 0.25) -> ProbVector:
    """ER sweep parameterization: p10 = p01 = n^(-exponent), p11 fixed.

    The noise level is reported as -log2(p10)/log2(n), i.e. the exponent
    itself.
    """
    q = float(n) ** (-exponent)
    return ProbVector(p11, q, q, 1.0 - p11 - 2.0 * q)


@dataclass(frozen=True)
class ExperimentSpec:
    """Declarative description of one sweep cell.

    Exactly one model parameterization must be present: p (or
    noise_exponent) for correlated-er, (r, sa, sb) for subsampling,
    (r, delta) for perturbation, (input_path, s) for file+subsample.
    h is an explicit anchor count or "auto" for the rho-based default.
    """

    spec_id: str
    model: str
    n: int | None = None
    input_path: str | None = None
    p: ProbVector | None = None
    noise_exponent: float | None = None
    r: float | None = None
    sa: float | None = None
    sb: float | None = None
    delta: float | None = None
    s: float | None = None
    h: int | str = "auto"
    variant: str = "naive"
    trials: int = 1
    base_seed: int = 0
    matching: MatchCfg = field(default_factory=MatchCfg)

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.model == "correlated-er":
            if (self.p is None) == (self.noise_exponent is None):
                raise ValueError("correlated-er needs exactly one of p or noise_exponent")
            if self.n is None:
                raise ValueError("correlated-er needs n")
        elif self.model == "subsampling":
            if None in (self.r, self.sa, self.sb) or self.n is None:
                raise ValueError("subsampling needs n, r, sa, sb")
        elif self.model == "perturbation":
            if None in (self.r, self.delta) or self.n is None:
                raise ValueError("perturbation needs n, r, delta")
        else:
            if self.input_path is None or self.s is None:
                raise ValueError("file+subsample needs input_path and s")
        if not (self.h == "auto" or isinstance(self.h, int)):
            raise ValueError("h must be an integer or 'auto'")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        p = d.get("p")
        return cls(
            spec_id=d["spec_id"],
            model=d["model"],
            n=d.get("n"),
            input_path=d.get("input_path"),
            p=ProbVector(*p) if p is not None else None,
            noise_exponent=d.get("noise_exponent"),
            r=d.get("r"),
            sa=d.get("sa"),
            sb=d.get("sb"),
            delta=d.get("delta"),
            s=d.get("s"),
            h=d.get("h", "auto"),
            variant=d.get("variant", "naive"),
            trials=d.get("trials", 1),
            base_seed=d.get("base_seed", 0),
            matching=MatchCfg.from_dict(d.get("matching", {})),
        )


@dataclass(frozen=True)
class TrialRecord:
    """One trial's outcome row."""

    spec_id: str
    trial: int
    seed: int
    n: int
    p: ProbVector
    h: int
    variant: str
    anchor_acc: float
    acc: float
    t_total_ms: float
    t_anchor_ms: float
    t_match_ms: float


_graph_cache: dict[str, Graph] = {}


def _load_graph(path: str) -> Graph:
    if path not in _graph_cache:
        _graph_cache[path] = read_edge_list(path)
    return _graph_cache[path]


def subsample_real(g: Graph, s: float, seed) -> CorrelatedPair:
    """Two independent edge subsamplings of a real network; truth identity."""
    if not 0.0 <= s <= 1.0:
        raise ValueError("s must be a probability")
    rng = _rng(seed)
    us, vs = g.edges()
    keep_a = rng.random(us.size) < s
    keep_b = rng.random(us.size) < s
    ga = Graph.from_edges(g.n, us[keep_a], vs[keep_a])
    gb = Graph.from_edges(g.n, us[keep_b], vs[keep_b])
    return CorrelatedPair(ga, gb, Alignment.identity(g.n))


def _resolved_prob(spec: ExperimentSpec, g: Graph | None = None) -> ProbVector:
    if spec.model == "correlated-er":
        return spec.p if spec.p is not None else noise_prob(spec.n, spec.noise_exponent)
    if spec.model == "subsampling":
        return ProbVector.from_subsampling(spec.r, spec.sa, spec.sb)
    if spec.model == "perturbation":
        return ProbVector.from_perturbation(spec.r, spec.delta)
    # file+subsample: treat the network as ER at its empirical density
    dens = 2.0 * g.num_edges / (g.n * (g.n - 1))
    return ProbVector.from_subsampling(dens, spec.s, spec.s)


def _make_pair(spec: ExperimentSpec, seed) -> tuple[CorrelatedPair, ProbVector]:
    if spec.model == "correlated-er":
        p = _resolved_prob(spec)
        return sample_correlated_er(spec.n, p, seed), p
    if spec.model == "subsampling":
        return sample_subsampling(spec.n, spec.r, spec.sa, spec.sb, seed), _resolved_prob(spec)
    if spec.model == "perturbation":
        return sample_perturbation(spec.n, spec.r, spec.delta, seed), _resolved_prob(spec)
    g = _load_graph(spec.input_path)
    return subsample_real(g, spec.s, seed), _resolved_prob(spec, g)


def _spec_key(spec_id: str) -> int:
    return zlib.crc32(spec_id.encode("utf-8"))


def trial_seed_sequence(spec: ExperimentSpec, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence((spec.base_seed & _SEED_MASK, _spec_key(spec.spec_id), trial))


def run_trial(spec: ExperimentSpec, trial: int) -> TrialRecord:
    """Sample, scramble, align, and score one trial.

    Deterministic given (spec, trial); the anchor accuracy is measured
    over the anchor pairs the run actually used, the total accuracy over
    all n vertices.
    """
    root = trial_seed_sequence(spec, trial)
    seed_sample, seed_scramble = root.spawn(2)
    t0 = time.perf_counter()
    pair, p = _make_pair(spec, seed_sample)
    pair = scramble(pair, seed_scramble)
    n = pair.ga.n
    h = spec.h if isinstance(spec.h, int) else default_anchor_count(n, p)

    cfg = spec.matching
    if cfg.robust.density_threshold is None:
        cfg = replace(cfg, robust=replace(cfg.robust, density_threshold=0.9 * (p.p11 + p.p00)))
    report = full_align_report(pair.ga, pair.gb, h, spec.variant, cfg)
    t_total = (time.perf_counter() - t0) * 1e3

    truth = pair.truth
    anchor_hits = (report.anchor_map.map != -1) & (report.anchor_map.map == truth.map)
    matched = report.anchor_map.matched_count
    return TrialRecord(
        spec_id=spec.spec_id,
        trial=trial,
        seed=int(root.generate_state(1, np.uint64)[0]),
        n=n,
        p=p,
        h=h,
        variant=spec.variant,
        anchor_acc=float(np.count_nonzero(anchor_hits)) / matched if matched else 0.0,
        acc=report.alignment.accuracy(truth),
        t_total_ms=t_total,
        t_anchor_ms=report.t_anchor_ms,
        t_match_ms=report.t_match_ms,
    )


def _format_row(rec: TrialRecord, include_timing: bool) -> list[str]:
    times = (rec.t_total_ms, rec.t_anchor_ms, rec.t_match_ms) if include_timing else (0.0, 0.0, 0.0)
    return [
        rec.spec_id,
        str(rec.trial),
        str(rec.seed),
        str(rec.n),
        f"{rec.p.p11:.12g}",
        f"{rec.p.p10:.12g}",
        f"{rec.p.p01:.12g}",
        f"{rec.p.p00:.12g}",
        str(rec.h),
        rec.variant,
        f"{rec.anchor_acc:.6f}",
        f"{rec.acc:.6f}",
        *(f"{t:.3f}" for t in times),
    ]


def _summary_rows(records: list[TrialRecord], include_timing: bool) -> list[list[str]]:
    rows = []
    for name, agg in (("mean", mean), ("median", median)):
        r0 = records[0]
        times = (
            (agg([r.t_total_ms for r in records]), agg([r.t_anchor_ms for r in records]), agg([r.t_match_ms for r in records]))
            if include_timing
            else (0.0, 0.0, 0.0)
        )
        rows.append([
            r0.spec_id,
            name,
            "",
            str(r0.n),
            f"{r0.p.p11:.12g}",
            f"{r0.p.p10:.12g}",
            f"{r0.p.p01:.12g}",
            f"{r0.p.p00:.12g}",
            str(r0.h),
            r0.variant,
            f"{agg([r.anchor_acc for r in records]):.6f}",
            f"{agg([r.acc for r in records]):.6f}",
            *(f"{t:.3f}" for t in times),
        ])
    return rows


def _run_cell(args) -> TrialRecord:
    spec, trial = args
    return run_trial(spec, trial)


def run_sweep(
    specs: Sequence[ExperimentSpec],
    out: str | Path | IO | None = None,
    workers: int = 1,
    include_timing: bool = True,
) -> str:
    """Run all (spec, trial) cells and emit CSV text.

    One data row per trial plus mean and median summary rows per spec;
    row order is canonical (spec order, then trial index) regardless of
    how the trials were scheduled.
    """
    if not specs:
        raise ValueError("spec list is empty")
    ids = [spec.spec_id for spec in specs]
    if len(set(ids)) != len(ids):
        raise ValueError("spec_id values must be unique within a sweep")
    cells = [(spec, trial) for spec in specs for trial in range(spec.trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, cells, chunksize=1))
    else:
        results = [_run_cell(c) for c in cells]

    ordered: dict[str, list[TrialRecord]] = {spec.spec_id: [] for spec in specs}
    for rec in results:
        ordered[rec.spec_id].append(rec)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for spec in specs:
        records = sorted(ordered[spec.spec_id], key=lambda r: r.trial)
        for rec in records:
            writer.writerow(_format_row(rec, include_timing))
        writer.writerows(_summary_rows(records, include_timing))
    text = buf.getvalue()
    if out is not None:
        if isinstance(out, (str, Path)):
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            out.write(text)
    return text


def load_specs(source: str | Path | IO) -> list[ExperimentSpec]:
    """Read a JSON experiment file: either one spec object or
    {"specs": [...]}."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = json.load(source)
    items = data["specs"] if isinstance(data, dict) and "specs" in data else [data]
    return [ExperimentSpec.from_dict(d) for d in items]


@dataclass(frozen=True)
class TimingReport:
    """t/(n^2 log2 n) per size, and the spread across sizes."""

    scale_by_n: dict[int, float]
    ratio: float

    def lines(self) -> list[str]:
        out = [f"n={n}: t/(n^2 log2 n) = {s:.6g} ms" for n, s in sorted(self.scale_by_n.items())]
        out.append(f"max/min scale ratio = {self.ratio:.3f}")
        return out


def timing_report(records: Sequence[TrialRecord]) -> TimingReport:
    """Scaling check over trial records spanning at least 3 sizes."""
    by_n: dict[int, list[float]] = {}
    for rec in records:
        by_n.setdefault(rec.n, []).append(rec.t_total_ms)
    if len(by_n) < 3:
        raise ValueError("need records for at least 3 distinct n")
    scale = {n: mean(ts) / (n * n * math.log2(n)) for n, ts in by_n.items()}
    vals = list(scale.values())
    return TimingReport(scale, max(vals) / min(vals))
