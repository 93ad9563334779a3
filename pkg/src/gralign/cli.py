"""Command-line interface: generate, align, sweep, bounds, region, timing."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .bounds import (
    RegionPoint,
    default_anchor_count,
    fig1_region,
    h_threshold,
    misalignment_bound,
    rho,
    theorem_region_check,
)
from .graphs import read_edge_list, write_edge_list
from .harness import load_specs, run_sweep, timing_report, TrialRecord
from .models import (
    Alignment,
    ProbVector,
    sample_correlated_er,
    sample_perturbation,
    sample_subsampling,
    scramble,
)
from .pipeline import full_align


def _parse_prob(text: str) -> ProbVector:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected four comma-separated probabilities")
    try:
        return ProbVector(*parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gralign",
        description="Seedless two-phase alignment of correlated random graphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a correlated pair and write edge lists")
    g.add_argument("--model", choices=("correlated-er", "subsampling", "perturbation"), default="correlated-er")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=_parse_prob, help="p11,p10,p01,p00 (correlated-er)")
    g.add_argument("--r", type=float, help="parent edge probability")
    g.add_argument("--sa", type=float, help="subsampling rate for the first copy")
    g.add_argument("--sb", type=float, help="subsampling rate for the second copy")
    g.add_argument("--delta", type=float, help="perturbation flip probability")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--scramble", action=argparse.BooleanOptionalAction, default=True,
                   help="relabel the second graph (default: yes)")
    g.add_argument("--out-a", required=True)
    g.add_argument("--out-b", required=True)
    g.add_argument("--truth", required=True, help="output truth file, lines 'v_b v_a'")

    a = sub.add_parser("align", help="align two edge-list graphs")
    a.add_argument("--ga", required=True)
    a.add_argument("--gb", required=True)
    a.add_argument("--h", required=True, help="anchor count, or 'auto' with --p")
    a.add_argument("--p", type=_parse_prob, help="model probabilities for h='auto'")
    a.add_argument("--variant", choices=("naive", "consistent-iterative"), default="naive")
    a.add_argument("--truth", help="truth file to score against")
    a.add_argument("--quiet", action="store_true", help="suppress the per-vertex map")

    s = sub.add_parser("sweep", help="run a JSON experiment spec, write CSV")
    s.add_argument("--spec", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--no-timing", action="store_true",
                   help="zero the wall-clock columns for byte-identical output")

    b = sub.add_parser("bounds", help="print the analytical bound report")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--p", type=_parse_prob, required=True)
    b.add_argument("--h", type=int)
    b.add_argument("--eta", type=float)
    b.add_argument("--slack", type=float, default=4.0)

    r = sub.add_parser("region", help="classify achievability-map points")
    r.add_argument("--x", type=float, help="log p01 / log n")
    r.add_argument("--y", type=float, help="log p11 / log n")
    r.add_argument("--grid", nargs=5, metavar=("XMIN", "XMAX", "YMIN", "YMAX", "STEPS"),
                   help="classify a STEPSxSTEPS grid")

    t = sub.add_parser("timing", help="scaling report from a sweep CSV")
    t.add_argument("--csv", required=True)
    return parser


def _cmd_generate(args) -> int:
    if args.model == "correlated-er":
        if args.p is None:
            raise ValueError("correlated-er needs --p")
        pair = sample_correlated_er(args.n, args.p, args.seed)
    elif args.model == "subsampling":
        if None in (args.r, args.sa, args.sb):
            raise ValueError("subsampling needs --r, --sa, --sb")
        pair = sample_subsampling(args.n, args.r, args.sa, args.sb, args.seed)
    else:
        if None in (args.r, args.delta):
            raise ValueError("perturbation needs --r and --delta")
        pair = sample_perturbation(args.n, args.r, args.delta, args.seed)
    if args.scramble:
        pair = scramble(pair, np.random.SeedSequence((args.seed, 1)))
    write_edge_list(pair.ga, args.out_a)
    write_edge_list(pair.gb, args.out_b)
    b_ids, a_ids = pair.truth.pairs()
    with open(args.truth, "w", encoding="utf-8") as fh:
        for b, a in zip(b_ids, a_ids):
            fh.write(f"{b} {a}\n")
    print(f"wrote {args.out_a}, {args.out_b}, {args.truth}")
    return 0


def _read_truth(path: str, ga, gb) -> Alignment:
    """Truth lines are 'v_b v_a' in the vertex names used by the edge
    lists; names that never appear in a graph are skipped (such vertices
    cannot be matched at all)."""
    a_ids = {lbl: i for i, lbl in enumerate(ga.labels)}
    b_ids = {lbl: i for i, lbl in enumerate(gb.labels)}
    m = np.full(gb.n, -1, dtype=np.int64)
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            b, a = line.split()
            if b in b_ids and a in a_ids:
                m[b_ids[b]] = a_ids[a]
    return Alignment(m)


def _cmd_align(args) -> int:
    ga = read_edge_list(args.ga)
    gb = read_edge_list(args.gb)
    if args.h == "auto":
        if args.p is None:
            raise ValueError("--h auto needs --p")
        h = default_anchor_count(ga.n, args.p)
    else:
        h = int(args.h)
    est = full_align(ga, gb, h, args.variant)
    if not args.quiet:
        b_ids, a_ids = est.pairs()
        for b, a in zip(b_ids, a_ids):
            print(f"{gb.labels[b]} {ga.labels[a]}")
    if args.truth:
        truth = _read_truth(args.truth, ga, gb)
        hits = np.count_nonzero((est.map == truth.map) & (est.map != -1))
        print(f"accuracy {hits / gb.n:.3f}")
    return 0


def _cmd_sweep(args) -> int:
    specs = load_specs(args.spec)
    run_sweep(specs, out=args.out, workers=args.workers, include_timing=not args.no_timing)
    print(f"wrote {args.out}")
    return 0


def _cmd_bounds(args) -> int:
    p = args.p
    r = rho(p)
    print(f"rho        = {r:.6g}")
    print(f"rho^2      = {r * r:.6g}")
    if r > 0:
        print(f"h_threshold(slack={args.slack:g}) = {h_threshold(args.n, p, args.slack)}")
        print(f"default_anchor_count = {default_anchor_count(args.n, p)}")
    else:
        print("h_threshold: undefined (rho <= 0)")
    if args.h is not None:
        print(f"misalignment_bound(h={args.h}) = {misalignment_bound(p, args.h):.6g}")
    if args.eta is not None:
        import math

        print(f"e^-eta = {math.exp(-args.eta):.6g}")
    for cond in theorem_region_check(args.n, p, h=args.h):
        status = "pass" if cond.ok else "FAIL"
        print(f"condition [{cond.name}]: ratio = {cond.ratio:.6g} ({status})")
    return 0


def _cmd_region(args) -> int:
    if args.grid is not None:
        xmin, xmax, ymin, ymax = (float(v) for v in args.grid[:4])
        steps = int(args.grid[4])
        xs = np.linspace(xmin, xmax, steps)
        ys = np.linspace(ymin, ymax, steps)
        for y in ys[::-1]:
            row = [fig1_region(RegionPoint(float(x), float(y)))[0] for x in xs]
            print(" ".join(c if c != "o" else "." for c in row))
        return 0
    if args.x is None or args.y is None:
        raise ValueError("need --x and --y, or --grid")
    print(fig1_region(RegionPoint(args.x, args.y)))
    return 0


def _cmd_timing(args) -> int:
    records = []
    with open(args.csv, "r", encoding="utf-8") as fh:
        import csv as _csv

        for row in _csv.DictReader(fh):
            if not row["trial"].isdigit():
                continue  # summary rows
            records.append(
                TrialRecord(
                    spec_id=row["spec_id"], trial=int(row["trial"]), seed=0,
                    n=int(row["n"]),
                    p=ProbVector(float(row["p11"]), float(row["p10"]), float(row["p01"]), float(row["p00"])),
                    h=int(row["h"]), variant=row["variant"],
                    anchor_acc=float(row["anchor_acc"]), acc=float(row["acc"]),
                    t_total_ms=float(row["t_total_ms"]), t_anchor_ms=float(row["t_anchor_ms"]),
                    t_match_ms=float(row["t_match_ms"]),
                )
            )
    for line in timing_report(records).lines():
        print(line)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "align": _cmd_align,
    "sweep": _cmd_sweep,
    "bounds": _cmd_bounds,
    "region": _cmd_region,
    "timing": _cmd_timing,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
