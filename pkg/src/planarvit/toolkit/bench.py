"""Benchmark harness: per-phase timings and the fitted log-log slope."""

from __future__ import annotations

import csv
import math
from dataclasses import astuple, dataclass, fields

import numpy as np

from ..vitality_engine import run_pipeline
from .generators import generate_instance

COLUMNS = ("n", "m", "MF", "k", "sum_slice_edges", "t_dual", "t_cut", "t_pairs",
           "t_family", "t_slices", "t_tests", "t_total")


@dataclass
class BenchRecord:
    n: int
    m: int
    MF: int
    k: int
    sum_slice_edges: int
    t_dual: float
    t_cut: float
    t_pairs: float
    t_family: float
    t_slices: float
    t_tests: float
    t_total: float
    d_edges: int = 0

    def row(self) -> tuple:
        return astuple(self)[:len(COLUMNS)]

    @property
    def size_ratio(self) -> float:
        return self.sum_slice_edges / max(1, self.d_edges + self.k)


assert tuple(f.name for f in fields(BenchRecord))[:len(COLUMNS)] == COLUMNS


def instance_for(kind: str, n: int, seed: int):
    if kind == "grid":
        side = max(2, int(round(math.sqrt(n))))
        return generate_instance("grid", rows=side, cols=side)
    if kind == "grid-minus":
        side = max(3, int(round(math.sqrt(n))))
        return generate_instance("grid-minus", seed, rows=side, cols=side,
                                 deletions=side * side // 20)
    if kind == "triangulated-disk":
        return generate_instance("triangulated-disk", seed, n=n)
    raise ValueError(f"unknown kind {kind!r}")


def bench_one(g) -> BenchRecord:
    rep = run_pipeline(g).report
    t = rep.timings
    st = rep.stats
    return BenchRecord(g.n, g.m, int(rep.mf), int(st["k"]), int(st["sum_slice_edges"]),
                       t["t_dual"], t["t_cut"], t["t_pairs"], t["t_family"], t["t_slices"],
                       t["t_tests"], t["t_total"], int(st["d_edges"]))


def run_bench(kind: str, sizes: list[int], reps: int = 1, seed: int = 0,
              warmup: bool = True) -> list[BenchRecord]:
    if warmup:
        bench_one(instance_for(kind, 100, seed))
    out = []
    for n in sizes:
        g = instance_for(kind, n, seed)
        for _ in range(reps):
            out.append(bench_one(g))
    return out


def fitted_slope(records: list[BenchRecord]) -> float | None:
    """Least-squares slope of log(median total time) against log(n)."""
    by_n: dict[int, list[float]] = {}
    for r in records:
        by_n.setdefault(r.n, []).append(r.t_total)
    if len(by_n) < 2:
        return None
    ns = sorted(by_n)
    x = np.log([float(n) for n in ns])
    y = np.log([float(np.median(by_n[n])) for n in ns])
    return float(np.polyfit(x, y, 1)[0])


def write_csv(records: list[BenchRecord], fh) -> None:
    w = csv.writer(fh)
    w.writerow(COLUMNS)
    for r in records:
        w.writerow(r.row())
