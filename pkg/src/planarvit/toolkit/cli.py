"""Command-line entry point: ``planarvit compute|gen|bench|validate``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from ..errors import InputError, InvariantViolation, PlanarVitError
from .bench import fitted_slope, run_bench, write_csv
from .generators import KINDS, generate_instance
from .instance_io import read_instance, serialize_instance

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVARIANT = 2
EXIT_ORACLE = 3


def _open_out(path: str | None):
    return open(path, "w", encoding="utf-8") if path else sys.stdout


def _size(text: str) -> int:
    return int(float(text))


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_compute(args) -> int:
    from ..oracle import vitality_oracle
    from ..vitality_engine import compute_vitality

    g = read_instance(args.input)
    rep = compute_vitality(g)
    edges = g.edges()
    code = EXIT_OK
    mismatch = None
    if args.check_oracle:
        ora = vitality_oracle(g)
        bad = np.flatnonzero(ora.vit != rep.vit)
        if ora.mf != rep.mf or len(bad):
            mismatch = {"oracle_mf": int(ora.mf), "edges": bad.tolist()}
            code = EXIT_ORACLE
    out = _open_out(args.output)
    try:
        if args.json:
            doc = rep.as_dict(edges)
            if args.check_oracle:
                doc["oracle"] = {"ok": mismatch is None, **(mismatch or {})}
            json.dump(doc, out, indent=1)
            out.write("\n")
        else:
            out.write(f"MF {rep.mf}\n")
            for (u, v), x in zip(edges, rep.vit.tolist()):
                out.write(f"{u} {v} {x}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    if mismatch is not None:
        print(f"oracle mismatch: MF {mismatch['oracle_mf']}, edges {mismatch['edges'][:20]}",
              file=sys.stderr)
    return code


def cmd_gen(args) -> int:
    params = {}
    if args.kind in ("grid", "grid-minus"):
        if args.rows is None or args.cols is None:
            raise InputError(f"{args.kind} needs --rows and --cols")
        params.update(rows=args.rows, cols=args.cols)
    if args.kind == "grid-minus":
        params["deletions"] = args.deletions
    if args.kind == "triangulated-disk":
        if args.n is None:
            raise InputError("triangulated-disk needs --n")
        params["n"] = args.n
    if args.s is not None:
        params["s"] = args.s
    if args.t is not None:
        params["t"] = args.t
    g = generate_instance(args.kind, args.seed, **params)
    desc = f"kind={args.kind} seed={args.seed} " + " ".join(f"{k}={v}" for k, v in params.items())
    out = _open_out(args.output)
    try:
        out.write(serialize_instance(g, [desc]))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = [_size(x) for x in args.sizes.split(",") if x]
    recs = run_bench(args.kind, sizes, args.reps, args.seed)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            write_csv(recs, fh)
    else:
        write_csv(recs, sys.stdout)
    slope = fitted_slope(recs)
    worst = max(r.size_ratio for r in recs)
    if slope is not None:
        print(f"log-log slope {slope:.3f}", file=sys.stderr)
    print(f"max slice-size ratio {worst:.3f}", file=sys.stderr)
    return EXIT_OK


def cmd_validate(args) -> int:
    from ..noncrossing_paths import validate_family
    from ..vitality_engine import run_pipeline

    g = read_instance(args.input)
    res = run_pipeline(g, keep=True)
    rep = res.report
    print(f"n {g.n} m {g.m} MF {rep.mf} k {rep.stats['k']}")
    if res.family is not None:
        fr = validate_family(res.family, res.doubled)
        for name in ("shortest", "single_touch", "noncrossing", "acyclic", "intervals"):
            print(f"{name} {'pass' if getattr(fr, name) else 'FAIL'}")
        if not fr.ok:
            return EXIT_INVARIANT
    else:
        print("max flow 1: decided by separating bridges")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planarvit",
                                description="s-t max-flow vitality of planar graph edges")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="vitality of every edge of an instance file")
    c.add_argument("-i", "--input", required=True)
    c.add_argument("-o", "--output")
    c.add_argument("--json", action="store_true")
    c.add_argument("--check-oracle", action="store_true",
                   help="compare against brute-force max-flow deletion runs")
    c.set_defaults(func=cmd_compute)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("--kind", choices=KINDS, required=True)
    gen.add_argument("--rows", type=int)
    gen.add_argument("--cols", type=int)
    gen.add_argument("--n", type=int)
    gen.add_argument("--deletions", type=int, default=0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--s", type=int)
    gen.add_argument("--t", type=int)
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="time the pipeline on generated instances")
    b.add_argument("--kind", choices=KINDS, default="grid")
    b.add_argument("--sizes", default="1e4,1e5,1e6")
    b.add_argument("--reps", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--csv")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("validate", help="run the pipeline and report family checks")
    v.add_argument("-i", "--input", required=True)
    v.set_defaults(func=cmd_validate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantViolation, PlanarVitError) as exc:
        print(f"internal invariant failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
