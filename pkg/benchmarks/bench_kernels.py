"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py --kind grid --sizes 1e3,1e4,1e5 --reps 3

Both backends run the full pipeline on the same instances in this process;
the fallback is swapped in by rebinding the names in ``planarvit.kernels``.
Reports median total time per size and the per-phase split.
"""

from __future__ import annotations

import argparse
import statistics
import sys
from contextlib import contextmanager

import numpy as np

from planarvit import kernels
from planarvit.toolkit.bench import instance_for
from planarvit.vitality_engine import run_pipeline

NAMES = ("trace_permutation", "bfs_region", "leftmost_walk", "split_region",
         "propagate_face_labels", "bfs_csr")
PHASES = ("t_dual", "t_cut", "t_pairs", "t_family", "t_slices", "t_tests")


@contextmanager
def backend(name: str):
    mod = kernels.get_backend(name)
    saved = {k: getattr(kernels, k) for k in NAMES}
    for k in NAMES:
        setattr(kernels, k, getattr(mod, k))
    try:
        yield mod
    finally:
        for k, v in saved.items():
            setattr(kernels, k, v)


def time_backend(name: str, g, reps: int) -> tuple[float, dict[str, float], np.ndarray]:
    totals = []
    phases = {p: [] for p in PHASES}
    vit = None
    with backend(name):
        for _ in range(reps):
            rep = run_pipeline(g).report
            totals.append(rep.timings["t_total"])
            for p in PHASES:
                phases[p].append(rep.timings[p])
            vit = rep.vit
    return statistics.median(totals), {p: statistics.median(v) for p, v in phases.items()}, vit


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kind", default="grid", choices=("grid", "grid-minus", "triangulated-disk"))
    ap.add_argument("--sizes", default="1e3,1e4,1e5")
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    try:
        kernels.get_backend("compiled")
    except ImportError:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1

    sizes = [int(float(x)) for x in args.sizes.split(",") if x]
    warm = instance_for(args.kind, 100, args.seed)
    for name in ("compiled", "python"):
        time_backend(name, warm, 1)

    print(f"{'n':>9} {'compiled s':>11} {'python s':>10} {'speedup':>8}  slowest python phase")
    for n in sizes:
        g = instance_for(args.kind, n, args.seed)
        tc, _, vc = time_backend("compiled", g, args.reps)
        tp, ph, vp = time_backend("python", g, args.reps)
        if not np.array_equal(vc, vp):
            print(f"backends disagree on n={g.n}", file=sys.stderr)
            return 2
        worst = max(ph, key=ph.get)
        print(f"{g.n:>9} {tc:>11.3f} {tp:>10.3f} {tp / tc:>8.1f}  {worst} {ph[worst]:.3f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
