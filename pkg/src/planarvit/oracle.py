"""Brute-force ground truth.

* :func:`max_flow_oracle` - unit-capacity BFS augmenting paths, pure Python,
  or scipy's Edmonds-Karp on the bidirected network.
* :func:`vitality_oracle` - one max-flow run per deleted edge.
* :func:`separating_cycle_oracle` - exhaustive search for the shortest dual
  cycle through a given dual edge that separates s from t.

Nothing here uses the doubled dual or the compiled kernels.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import OnlySharedFace, OracleCapExceeded
from .noncrossing_paths import count_crossings
from .planar_core import DualGraph, EmbeddedGraph, PathFrame, build_dual, trace_faces
from .report import PROV_ORACLE, VitalityReport

VITALITY_CAP = 20000
CYCLE_CAP = 64


# --------------------------------------------------------------------------
# max flow
# --------------------------------------------------------------------------

class FlowNetwork:
    """Residual network of an undirected unit-capacity graph.

    ``flow[d]`` is 1 when dart ``d`` carries a unit; at most one dart of each
    twin pair carries flow.  Pushing along a dart whose twin carries flow
    cancels that flow instead.
    """

    def __init__(self, g: EmbeddedGraph, skip: int | None = None):
        self.g = g
        rs = g.rs
        self.s, self.t = g.s, g.t
        self.twin = rs.twin.tolist()
        self.head = rs.head.tolist()
        edge = rs.edge.tolist()
        self.adj = [[d for d in range(rs.indptr[v], rs.indptr[v + 1]) if edge[d] != skip]
                    for v in range(g.n)]
        self.flow = [0] * rs.n_darts
        self.value = 0

    def residual(self, d: int) -> int:
        return 1 - self.flow[d] + self.flow[self.twin[d]]

    def augment(self) -> bool:
        s, t = self.s, self.t
        via = [-1] * self.g.n
        via[s] = -2
        queue = deque([s])
        flow, twin, head = self.flow, self.twin, self.head
        while queue and via[t] == -1:
            v = queue.popleft()
            for d in self.adj[v]:
                w = head[d]
                if via[w] == -1 and flow[d] == 0:
                    via[w] = d
                    queue.append(w)
        if via[t] == -1:
            return False
        w = t
        while w != s:
            d = via[w]
            if flow[twin[d]]:
                flow[twin[d]] = 0
            else:
                flow[d] = 1
            w = head[twin[d]]
        self.value += 1
        return True

    def run(self) -> int:
        while self.augment():
            pass
        return self.value

    def check_conservation(self) -> bool:
        net = [0] * self.g.n
        for v in range(self.g.n):
            for d in self.adj[v]:
                if self.flow[d]:
                    net[v] -= 1
                    net[self.head[d]] += 1
        return all(net[v] == 0 for v in range(self.g.n) if v not in (self.s, self.t)) \
            and net[self.t] == self.value and net[self.s] == -self.value

    def flow_edges(self) -> np.ndarray:
        e = self.g.rs.edge
        out = np.zeros(self.g.m, dtype=bool)
        for d, f in enumerate(self.flow):
            if f:
                out[e[d]] = True
        return out


def _scipy_max_flow(g: EmbeddedGraph, skip: int | None) -> int:
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import maximum_flow

    rs = g.rs
    keep = rs.edge != skip if skip is not None else np.ones(rs.n_darts, dtype=bool)
    cap = csr_matrix((np.ones(int(keep.sum()), dtype=np.int32),
                      (rs.tail[keep], rs.head[keep])), shape=(g.n, g.n))
    return int(maximum_flow(cap, g.s, g.t, method="edmonds_karp").flow_value)


class _ScipyDeletions:
    """One CSR capacity matrix per graph; deleting an edge zeroes its two arcs."""

    def __init__(self, g: EmbeddedGraph):
        from scipy.sparse import csr_matrix

        rs = g.rs
        self.g = g
        # encode dart index in data so the CSR position of every dart is recoverable
        cap = csr_matrix((np.arange(1, rs.n_darts + 1, dtype=np.int64),
                          (rs.tail, rs.head)), shape=(g.n, g.n))
        cap.sort_indices()
        slot = np.empty(rs.n_darts, dtype=np.int64)
        slot[cap.data - 1] = np.arange(rs.n_darts)
        cap.data = np.ones(rs.n_darts, dtype=np.int32)
        self.cap = cap
        order = np.argsort(rs.edge, kind="stable")
        self.arcs = slot[order].reshape(g.m, 2)

    def flow(self, skip: int | None) -> int:
        from scipy.sparse.csgraph import maximum_flow

        if skip is None:
            return int(maximum_flow(self.cap, self.g.s, self.g.t, method="edmonds_karp").flow_value)
        arcs = self.arcs[skip]
        self.cap.data[arcs] = 0
        try:
            return int(maximum_flow(self.cap, self.g.s, self.g.t, method="edmonds_karp").flow_value)
        finally:
            self.cap.data[arcs] = 1


def max_flow_oracle(g: EmbeddedGraph, skip: int | None = None, engine: str = "python") -> int:
    """Exact s-t max flow of ``g`` minus edge ``skip``."""
    if engine == "python":
        return FlowNetwork(g, skip).run()
    if engine == "scipy":
        return _scipy_max_flow(g, skip)
    raise ValueError(f"unknown engine {engine!r}")


def deletion_flows(g: EmbeddedGraph, engine: str = "scipy", cap: int = VITALITY_CAP):
    """``(MF(G), [MF(G - e) for every edge e])``."""
    if g.m > cap:
        raise OracleCapExceeded(f"{g.m} edges exceed the oracle cap {cap}")
    if engine == "scipy":
        net = _ScipyDeletions(g)
        return net.flow(None), [net.flow(e) for e in range(g.m)]
    mf = max_flow_oracle(g, None, engine)
    return mf, [max_flow_oracle(g, e, engine) for e in range(g.m)]


def vitality_oracle(g: EmbeddedGraph, engine: str = "scipy", cap: int = VITALITY_CAP) -> VitalityReport:
    """vit(e) = MF(G) - MF(G - e), one max-flow run per edge."""
    mf, rest = deletion_flows(g, engine, cap)
    vit = np.asarray([mf - x for x in rest], dtype=np.int8)
    return VitalityReport(mf, vit, np.full(g.m, PROV_ORACLE, dtype=np.int8))


# --------------------------------------------------------------------------
# separating cycles through a dual edge
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DualContext:
    """Dual graph, terminal faces, cut path frame and a reference s-t path."""

    graph: EmbeddedGraph
    dual: DualGraph
    frame: PathFrame | None
    st_edges: frozenset[int]


def _primal_st_path(g: EmbeddedGraph) -> frozenset[int]:
    rs = g.rs
    via = {g.s: -1}
    queue = deque([g.s])
    while queue:
        v = queue.popleft()
        for d in range(rs.indptr[v], rs.indptr[v + 1]):
            w = int(rs.head[d])
            if w not in via:
                via[w] = d
                queue.append(w)
    out = set()
    w = g.t
    while w != g.s:
        d = via[w]
        out.add(int(rs.edge[d]))
        w = int(rs.tail[d])
    return frozenset(out)


def dual_context(g: EmbeddedGraph, frame: PathFrame | None = None) -> DualContext:
    """Build the context; without ``frame`` the cut path is computed here
    (``None`` when s and t see only one common face)."""
    faces = trace_faces(g)
    dual = build_dual(g, faces)
    if frame is None:
        from .cut_construction import select_terminal_faces, shortest_dual_path

        try:
            fs, ft = select_terminal_faces(g, faces)
        except OnlySharedFace:
            # s and t share their only face: the cut path is empty, nothing crosses it
            fs = ft = None
        if fs is not None:
            frame = shortest_dual_path(dual, fs, ft).frame(dual.rs)
    return DualContext(g, dual, frame, _primal_st_path(g))


@dataclass(frozen=True)
class CycleWitness:
    length: int | None
    crossings: int | None
    witnesses: int


def separating_cycle_oracle(ctx: DualContext, e_star: int, max_length: int | None = None,
                            cap: int = CYCLE_CAP) -> CycleWitness:
    """Shortest simple dual cycle through ``e_star`` separating s from t.

    Separation is decided by parity: a dual cycle separates s from t iff the
    reference s-t path uses an odd number of its edges.  Among all shortest
    such cycles, the smallest number of crossings with the cut path is kept.
    """
    drs = ctx.dual.rs
    if drs.n_vertices > cap:
        raise OracleCapExceeded(f"dual has {drs.n_vertices} vertices (cap {cap})")
    on_p = ctx.st_edges
    darts = np.flatnonzero(drs.edge == e_star)
    d0 = int(darts[0])
    a, b = int(drs.tail[d0]), int(drs.head[d0])
    par0 = 1 if e_star in on_p else 0
    limit = drs.n_vertices if max_length is None else max_length
    if a == b:
        if par0 == 1:
            return CycleWitness(1, _crossings(ctx, [d0]), 1)
        return CycleWitness(None, None, 0)
    # lower bound: BFS distance to a avoiding e_star
    nv = drs.n_vertices
    lb = [nv + 1] * nv
    lb[a] = 0
    queue = deque([a])
    while queue:
        v = queue.popleft()
        for p in range(drs.indptr[v], drs.indptr[v + 1]):
            d = int(drs.rot[p])
            w = int(drs.head[d])
            if drs.edge[d] != e_star and lb[w] > lb[v] + 1:
                lb[w] = lb[v] + 1
                queue.append(w)
    adj = [[(int(drs.head[d]), int(d), int(drs.edge[d]))
            for d in drs.darts_at(v) if drs.edge[d] != e_star and drs.head[d] != v]
           for v in range(nv)]
    for L in range(2, limit + 1):
        found = []
        _enumerate(adj, b, a, L - 1, lb, on_p, par0, [d0], {a, b}, found)
        if found:
            best = min(_crossings(ctx, cyc) for cyc in found)
            return CycleWitness(L, best, len(found))
    return CycleWitness(None, None, 0)


def _enumerate(adj, v, target, budget, lb, on_p, par, stack, used, found, max_found=5000):
    if len(found) >= max_found:
        return
    for w, d, e in adj[v]:
        if lb[w] > budget - 1:
            continue
        p = par ^ (1 if e in on_p else 0)
        if w == target:
            if budget == 1 and p == 1:
                found.append(stack + [d])
            continue
        if w in used:
            continue
        used.add(w)
        stack.append(d)
        _enumerate(adj, w, target, budget - 1, lb, on_p, p, stack, used, found, max_found)
        stack.pop()
        used.discard(w)


def _crossings(ctx: DualContext, cycle: list[int]) -> int:
    if ctx.frame is None:
        return 0
    pe = ctx.frame.edges
    cyc_edges = [int(ctx.dual.rs.edge[d]) for d in cycle]
    if all(e in pe for e in cyc_edges):
        return 0
    return count_crossings(ctx.frame, cycle, closed=True)
