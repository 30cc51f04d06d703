"""Per-slice distances, the tight-edge test and the end-to-end pipeline."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .cut_construction import DoubledDual, build_doubled_dual, select_terminal_faces, shortest_dual_path
from .errors import ContractedEdgeQueried, SliceInvariantViolation
from .noncrossing_paths import PathFamily, compute_path_family
from .pair_distances import (
    PairData,
    RegionEngine,
    all_pair_distances,
    compute_max_flow_and_tight_pairs,
    separating_bridges,
    st_bridge_vitality,
)
from .planar_core import EmbeddedGraph, bridges_from_faces, build_dual, trace_faces
from .report import PROV_SELF_LOOP, PROV_SLICE, PROV_U, VitalityReport
from .slices import (
    Slice,
    build_nca_index,
    build_slice,
    consecutive_intersections,
    region_labels,
    slice_buckets,
)

__all__ = [
    "SliceDistances",
    "VitalityReport",
    "PipelineResult",
    "slice_distances",
    "edge_on_tight_path",
    "tight_unit_edges",
    "run_pipeline",
    "compute_vitality",
]

INF = np.iinfo(np.int64).max // 4


@dataclass(frozen=True, eq=False)
class SliceDistances:
    dx: np.ndarray
    dy: np.ndarray


def _bfs(indptr, nbr, src) -> np.ndarray:
    d = kernels.bfs_csr(indptr, nbr, src)
    return np.where(d < 0, INF, d)


def _mixed(d0: np.ndarray, da: np.ndarray, db: np.ndarray, a: int, b: int, w: int) -> np.ndarray:
    # a shortest path uses the weighted edge at most once, in one of two directions
    via_ab = d0[a] + w + db
    via_ba = d0[b] + w + da
    return np.minimum(d0, np.minimum(via_ab, via_ba))


def slice_distances(sl: Slice, mf: int | None = None) -> SliceDistances:
    """Exact distances from x and y, with the contracted edge weighted."""
    indptr, nbr = sl.unit_csr()
    dx = _bfs(indptr, nbr, sl.x)
    dy = _bfs(indptr, nbr, sl.y)
    if sl.contracted is not None:
        a, b, w = sl.contracted
        da = _bfs(indptr, nbr, a)
        db = _bfs(indptr, nbr, b)
        dx = _mixed(dx, da, db, a, b, w)
        dy = _mixed(dy, da, db, a, b, w)
    if mf is not None and dx[sl.y] != mf:
        raise SliceInvariantViolation(
            f"slice {sl.index}: d(x, y) = {dx[sl.y]} but the max flow is {mf}")
    return SliceDistances(dx, dy)


def edge_on_tight_path(sl: Slice, j: int, dist: SliceDistances, mf: int) -> bool:
    """Whether local unit edge ``j`` lies on a shortest x-y path of the slice."""
    if sl.edge_global[j] < 0:
        raise ContractedEdgeQueried(f"local edge {j} of slice {sl.index} is the contracted edge")
    a, b = int(sl.eu[j]), int(sl.ev[j])
    return bool(dist.dx[a] + dist.dy[b] + 1 == mf or dist.dx[b] + dist.dy[a] + 1 == mf)


def tight_unit_edges(sl: Slice, dist: SliceDistances, mf: int) -> np.ndarray:
    """Vectorised tight test over all unit edges (mask aligned to local edges)."""
    nu = sl.n_unit_edges
    a, b = sl.eu[:nu], sl.ev[:nu]
    return (dist.dx[a] + dist.dy[b] + 1 == mf) | (dist.dx[b] + dist.dy[a] + 1 == mf)


# --------------------------------------------------------------------------
# pipeline
# --------------------------------------------------------------------------

@dataclass
class PipelineResult:
    report: VitalityReport
    doubled: DoubledDual | None = None
    pairs: PairData | None = None
    family: PathFamily | None = None
    slices: list[Slice] = field(default_factory=list)


def run_pipeline(g: EmbeddedGraph, keep: bool = False, validate: bool = True) -> PipelineResult:
    """Compute the vitality of every edge; ``keep`` retains the intermediates."""
    tm: dict[str, float] = {}
    t_start = time.perf_counter()
    t = t_start
    faces = trace_faces(g)
    bridge = bridges_from_faces(g, faces)
    sep = separating_bridges(g, bridge)
    if sep.any():
        rep = st_bridge_vitality(g, bridge)
        tm["t_dual"] = time.perf_counter() - t
        for key in ("t_cut", "t_pairs", "t_family", "t_slices", "t_tests"):
            tm[key] = 0.0
        tm["t_total"] = time.perf_counter() - t_start
        rep.timings = tm
        rep.stats = {"n": g.n, "m": g.m, "MF": 1, "k": 0, "sum_slice_edges": 0,
                     "d_edges": 0, "contracted": 0}
        return PipelineResult(rep)
    dual = build_dual(g, faces)
    tm["t_dual"] = (t2 := time.perf_counter()) - t
    t = t2

    fs, ft = select_terminal_faces(g, faces)
    cut = shortest_dual_path(dual, fs, ft)
    D = build_doubled_dual(dual, cut)
    tm["t_cut"] = (t2 := time.perf_counter()) - t
    t = t2

    engine = RegionEngine(D)
    pairs = compute_max_flow_and_tight_pairs(all_pair_distances(D, engine))
    mf = pairs.mf
    tm["t_pairs"] = (t2 := time.perf_counter()) - t
    t = t2

    fam = compute_path_family(D, pairs, engine, validate=validate)
    tm["t_family"] = (t2 := time.perf_counter()) - t
    t = t2

    nca = build_nca_index(fam, D)
    inter = consecutive_intersections(fam, nca)
    labels = region_labels(D, fam)
    buckets = slice_buckets(D, labels, fam)
    slices = [build_slice(i, D, labels, fam, inter, buckets) for i in range(1, fam.k + 1)]
    tm["t_slices"] = (t2 := time.perf_counter()) - t
    t = t2

    m = g.m
    nE = D.n_edges
    tight_any = np.zeros(nE, dtype=bool)
    decided_by = np.full(nE, -1, dtype=np.int64)
    u_ok = np.zeros(nE, dtype=bool)
    total_slice_edges = 0
    contracted = 0
    for sl in slices:
        dist = slice_distances(sl, mf)
        mask = tight_unit_edges(sl, dist, mf)
        ge = sl.edge_global[:sl.n_unit_edges]
        hit = ge[mask]
        fresh = hit[decided_by[hit] < 0]
        decided_by[fresh] = sl.index
        tight_any[hit] = True
        u_here = ge[fam.is_u[ge] & (fam.u_lo[ge] == sl.index)]
        u_ok[u_here] = tight_any[u_here]
        total_slice_edges += sl.n_edges
        contracted += sl.contracted is not None
    ue = fam.u_edges
    if not np.all(u_ok[ue]):
        bad = int(ue[~u_ok[ue]][0])
        raise SliceInvariantViolation(f"U edge {bad} fails the tight test in its first slice")
    tm["t_tests"] = (t2 := time.perf_counter()) - t

    vit = np.zeros(m, dtype=np.int8)
    prov = np.full(m, PROV_SLICE, dtype=np.int8)
    slice_of = np.full(m, -1, dtype=np.int64)
    is_u = fam.is_u[:m]
    vit[tight_any[:m]] = 1
    slice_of[:] = decided_by[:m]
    vit[is_u] = 1
    prov[is_u] = PROV_U
    loops = dual.is_loop
    vit[loops] = 0
    prov[loops] = PROV_SELF_LOOP
    tm["t_total"] = time.perf_counter() - t_start
    stats = {"n": g.n, "m": m, "MF": mf, "k": fam.k, "sum_slice_edges": total_slice_edges,
             "d_edges": nE, "d_vertices": D.n_vertices, "pi_length": cut.length,
             "u_edges": int(len(ue)), "contracted": contracted}
    rep = VitalityReport(mf, vit, prov, slice_of, tm, stats)
    if keep:
        return PipelineResult(rep, D, pairs, fam, slices)
    return PipelineResult(rep)


def compute_vitality(g: EmbeddedGraph) -> VitalityReport:
    return run_pipeline(g).report
