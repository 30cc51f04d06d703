"""Split-pair distances in the doubled dual, the max-flow value and tight pairs.

Distances are obtained by divide and conquer over the pairs: the middle pair
is solved by a BFS inside the current region, the region is split along the
resulting shortest path, and each half handles the pairs on its side.  The
same machinery, restricted to tight pairs, yields the path family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .cut_construction import DoubledDual
from .errors import NotDegenerate, PairUnreachable, SplitInconsistency
from .planar_core import EmbeddedGraph, bridges_from_faces, trace_faces
from .report import PROV_BRIDGE, VitalityReport


# --------------------------------------------------------------------------
# region engine
# --------------------------------------------------------------------------

class RegionEngine:
    """Scratch state for BFS, greedy walks and splits inside edge regions."""

    def __init__(self, d: DoubledDual):
        self.d = d
        rs = d.rs
        self.rs = rs
        self.stamp = np.zeros(rs.n_edges, dtype=np.int64)
        self.token = 0
        self.dist = np.full(rs.n_vertices, -1, dtype=np.int64)
        self.vmark = np.full(rs.n_vertices, -1, dtype=np.int64)
        self.vside = np.zeros(rs.n_vertices, dtype=np.int8)
        self.eside = np.full(rs.n_edges, -1, dtype=np.int64)
        self.all_edges = np.flatnonzero(d.active_edge).astype(np.int64)

    def mark(self, region: np.ndarray) -> int:
        self.token += 1
        self.stamp[region] = self.token
        return self.token

    def bfs(self, token: int, src: int) -> np.ndarray:
        rs = self.rs
        return kernels.bfs_region(rs.indptr, rs.rot, rs.head, rs.edge,
                                  self.stamp, token, src, self.dist)

    def reset(self, visited: np.ndarray) -> None:
        self.dist[visited] = -1

    def walk(self, token: int, x: int):
        rs = self.rs
        return kernels.leftmost_walk(rs.indptr, rs.rot, rs.pos, rs.head, rs.twin,
                                     rs.edge, self.stamp, token, self.dist, x)

    def split(self, token: int, region: np.ndarray, path: np.ndarray):
        """Return (s-side region, t-side region), both including the path."""
        rs = self.rs
        sides, status = kernels.split_region(
            rs.indptr, rs.rot, rs.pos, rs.tail, rs.head, rs.twin, rs.edge,
            self.stamp, token, region, path, self.vmark, self.vside, self.eside)
        if status != kernels.SPLIT_OK:
            raise SplitInconsistency(f"region split failed with status {status}")
        return region[sides != 2], region[sides != 1]

    def solve(self, pairs: list[int], keep_paths: bool):
        """Distance (and optionally the s-most shortest path) for each pair index.

        ``pairs`` are positions along the cut path in increasing order.
        """
        d = self.d
        dist_out: dict[int, int] = {}
        paths: dict[int, np.ndarray] = {}
        stack = [(-1, len(pairs), self.all_edges)]
        while stack:
            lo, hi, region = stack.pop()
            if hi - lo <= 1:
                continue
            mid = (lo + hi) // 2
            j = pairs[mid]
            x = int(d.x_vertices[j])
            y = int(d.y_vertices[j])
            tok = self.mark(region)
            seen = self.bfs(tok, y)
            if self.dist[x] < 0:
                self.reset(seen)
                raise PairUnreachable(f"pair {j} unreachable inside its region")
            dist_out[j] = int(self.dist[x])
            path = self.walk(tok, x)
            self.reset(seen)
            if path is None:
                raise PairUnreachable(f"greedy walk for pair {j} got stuck")
            if keep_paths:
                paths[j] = path
            need_s = mid - lo > 1
            need_t = hi - mid > 1
            if not (need_s or need_t):
                continue
            rs_side, rt_side = self.split(tok, region, path)
            if need_t:
                stack.append((mid, hi, rt_side))
            if need_s:
                stack.append((lo, mid, rs_side))
        return dist_out, paths


# --------------------------------------------------------------------------
# distances, max flow, tight pairs
# --------------------------------------------------------------------------

def all_pair_distances(d: DoubledDual, engine: RegionEngine | None = None) -> list[int]:
    """Distance between the two copies of every cut-path vertex."""
    engine = engine or RegionEngine(d)
    pairs = list(range(d.pair_count))
    dist, _ = engine.solve(pairs, keep_paths=False)
    return [dist[j] for j in pairs]


def naive_pair_distances(d: DoubledDual) -> list[int]:
    """One unrestricted BFS per pair; reference for the divide and conquer."""
    engine = RegionEngine(d)
    tok = engine.mark(engine.all_edges)
    out = []
    for j in range(d.pair_count):
        seen = engine.bfs(tok, int(d.y_vertices[j]))
        dx = int(engine.dist[int(d.x_vertices[j])])
        engine.reset(seen)
        if dx < 0:
            raise PairUnreachable(f"pair {j} unreachable")
        out.append(dx)
    return out


@dataclass(frozen=True)
class PairData:
    distances: tuple[int, ...]
    mf: int
    tight: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.tight)


def compute_max_flow_and_tight_pairs(distances) -> PairData:
    dist = tuple(int(x) for x in distances)
    if not dist:
        raise ValueError("no pairs")
    mf = min(dist)
    if mf < 1:
        raise PairUnreachable("pair distance must be positive")
    tight = tuple(j for j, x in enumerate(dist) if x == mf)
    return PairData(dist, mf, tight)


# --------------------------------------------------------------------------
# max flow 1: bridges on the s-t path of the bridge tree
# --------------------------------------------------------------------------

def two_edge_components(g: EmbeddedGraph, bridge: np.ndarray) -> np.ndarray:
    """Component label per vertex after deleting the bridges."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    keep = ~bridge
    a = coo_matrix((np.ones(int(keep.sum()), dtype=np.int8),
                    (g.edge_u[keep], g.edge_v[keep])), shape=(g.n, g.n))
    _, comp = connected_components(a, directed=False)
    return comp.astype(np.int64)


def separating_bridges(g: EmbeddedGraph, bridge: np.ndarray | None = None) -> np.ndarray:
    """Mask of the bridges whose removal separates s from t."""
    if bridge is None:
        bridge = bridges_from_faces(g, trace_faces(g))
    comp = two_edge_components(g, bridge)
    out = np.zeros(g.m, dtype=bool)
    cs, ct = comp[g.s], comp[g.t]
    if cs == ct:
        return out
    be = np.flatnonzero(bridge)
    cu = comp[g.edge_u[be]]
    cv = comp[g.edge_v[be]]
    adj: dict[int, list[tuple[int, int]]] = {}
    for e, a, b in zip(be.tolist(), cu.tolist(), cv.tolist()):
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    parent = {int(cs): (-1, -1)}
    queue = [int(cs)]
    for a in queue:
        for b, e in adj.get(a, ()):
            if b not in parent:
                parent[b] = (a, e)
                queue.append(b)
    c = int(ct)
    while c != cs:
        c, e = parent[c]
        out[e] = True
    return out


def st_bridge_vitality(g: EmbeddedGraph, bridge: np.ndarray | None = None) -> VitalityReport:
    """Report for max flow 1: exactly the s-t separating bridges have vitality 1."""
    sep = separating_bridges(g, bridge)
    if not sep.any():
        raise NotDegenerate("s and t are 2-edge-connected; max flow is at least 2")
    return VitalityReport(1, sep.astype(np.int8), np.full(g.m, PROV_BRIDGE, dtype=np.int8))
