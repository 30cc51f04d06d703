"""Terminal faces, the cut path through the dual and the doubled dual.

The doubled dual slits the dual open along the cut path.  Every cut-path
vertex ``f_j`` becomes a lower copy (keeping id ``f_j``) that receives the
darts on the s-side of the path, and an upper copy (id ``F + j``) that
receives the darts on the t-side.  The original cut-path darts stay on the
lower copies; the upper copies are joined by fresh darts ``2m + 2j`` (forward)
and ``2m + 2j + 1`` (backward) carrying edge id ``m + j``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import OnlySharedFace, WedgeInconsistent
from .planar_core import (
    RIGHT,
    DualGraph,
    EmbeddedGraph,
    FaceStructure,
    PathFrame,
    RotationSystem,
    rotation_system,
    trace_rotation_faces,
)


# --------------------------------------------------------------------------
# terminal faces and cut path
# --------------------------------------------------------------------------

def select_terminal_faces(g: EmbeddedGraph, f: FaceStructure) -> tuple[int, int]:
    """Pick a face at s and a face at t, preferring faces the other lacks."""
    A = set(f.face_of[g.indptr[g.s]:g.indptr[g.s + 1]].tolist())
    B = set(f.face_of[g.indptr[g.t]:g.indptr[g.t + 1]].tolist())
    if len(A) == 1 and A == B:
        raise OnlySharedFace(f"s and t both see only face {next(iter(A))}")
    fs = min(A - B) if A - B else min(A)
    rest = (B - A) or (B - {fs})
    ft = min(rest)
    return fs, ft


@dataclass(frozen=True, eq=False)
class CutPath:
    """Shortest dual path from ``fs`` to ``ft`` with its two endpoint wedges.

    ``wedge_s`` is a dual dart at ``fs``; the wedge is the rotation slot just
    before it (clockwise), where the path conceptually continues to s.  Same
    for ``wedge_t`` at ``ft``.
    """

    faces: np.ndarray
    darts: np.ndarray
    fs: int
    ft: int
    wedge_s: int
    wedge_t: int

    @property
    def length(self) -> int:
        return len(self.darts)

    def start_slot(self, rs: RotationSystem) -> int:
        return 2 * int(rs.pos[self.wedge_s]) - 1

    def end_slot(self, rs: RotationSystem) -> int:
        return 2 * int(rs.pos[self.wedge_t]) - 1

    def frame(self, rs: RotationSystem) -> PathFrame:
        return PathFrame(rs, self.darts, self.start_slot(rs), self.end_slot(rs))


def _wedge_dart(g: EmbeddedGraph, f: FaceStructure, v: int, face: int) -> int:
    rs = g.rs
    block = rs.darts_at(v)
    hits = block[f.face_of[block] == face]
    if len(hits) == 0:
        raise WedgeInconsistent(f"face {face} is not incident to vertex {v}")
    d_b = int(hits.min())
    return int(rs.twin[rs.prev_cw(d_b)])


def shortest_dual_path(dual: DualGraph, fs: int, ft: int) -> CutPath:
    """BFS path in the dual (loops ignored), smallest edge id on ties."""
    if fs == ft:
        raise ValueError("terminal faces must differ")
    rs = dual.rs
    stamp = (~dual.is_loop).astype(np.int64)
    dist = np.full(rs.n_vertices, -1, dtype=np.int64)
    kernels.bfs_region(rs.indptr, rs.rot, rs.head, rs.edge, stamp, 1, ft, dist)
    if dist[fs] < 0:
        raise WedgeInconsistent("terminal faces are not connected in the dual")
    # walk forward from fs towards ft; distances are measured from ft
    faces = [fs]
    darts = []
    v = fs
    while v != ft:
        block = rs.darts_at(v)
        cand = block[(stamp[rs.edge[block]] == 1) & (dist[rs.head[block]] == dist[v] - 1)]
        d = int(cand[np.argmin(rs.edge[cand])])
        darts.append(d)
        v = int(rs.head[d])
        faces.append(v)
    g = dual.graph
    ws = _wedge_dart(g, dual.faces, g.s, fs)
    wt = _wedge_dart(g, dual.faces, g.t, ft)
    return CutPath(np.asarray(faces, dtype=np.int64), np.asarray(darts, dtype=np.int64),
                   fs, ft, ws, wt)


# --------------------------------------------------------------------------
# doubled dual
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DoubledDual:
    """The dual slit open along the cut path.

    D edge ids ``0..m-1`` are the dual edge ids (so ``e^D = e``, the lower
    copy for cut-path edges); ids ``m..m+L-1`` are the upper copies.  Dual
    loops keep their ids but are inactive (not in any rotation).
    """

    dual: DualGraph
    cut: CutPath
    rs: RotationSystem
    faces: FaceStructure
    outer_face: int
    x_vertices: np.ndarray
    y_vertices: np.ndarray
    pi_edges: np.ndarray
    active_edge: np.ndarray
    outer_walk: np.ndarray

    @property
    def n_vertices(self) -> int:
        return self.rs.n_vertices

    @property
    def n_edges(self) -> int:
        return self.rs.n_edges

    @property
    def n_primal_edges(self) -> int:
        return self.dual.n_edges

    @property
    def pair_count(self) -> int:
        return len(self.x_vertices)

    @property
    def extremes(self) -> tuple[int, int, int, int]:
        """(l_x, r_x, l_y, r_y): s-end and t-end of both path copies."""
        return (int(self.x_vertices[0]), int(self.x_vertices[-1]),
                int(self.y_vertices[0]), int(self.y_vertices[-1]))

    def primal_edge(self, eD: int) -> int:
        m = self.dual.n_edges
        return int(eD) if eD < m else int(self.pi_edges[eD - m])

    def primal_edge_array(self) -> np.ndarray:
        m = self.dual.n_edges
        return np.concatenate([np.arange(m, dtype=np.int64), self.pi_edges])

    def e_D(self, e: int) -> int:
        return int(e)

    def y_copy(self, e: int) -> int | None:
        hit = np.flatnonzero(self.pi_edges == e)
        return int(self.dual.n_edges + hit[0]) if len(hit) else None

    def active_edge_count(self) -> int:
        return int(self.active_edge.sum())


def build_doubled_dual(dual: DualGraph, cut: CutPath) -> DoubledDual:
    drs = dual.rs
    m = drs.n_edges
    F = drs.n_vertices
    L = cut.length
    nd = 2 * m + 2 * L
    frame = cut.frame(drs)
    loop_dart = dual.is_loop[drs.edge]

    tail = np.full(nd, -1, dtype=np.int64)
    tail[:2 * m] = np.where(loop_dart, -1, drs.tail)
    twin = np.empty(nd, dtype=np.int64)
    twin[:2 * m] = drs.twin
    fw = 2 * m + 2 * np.arange(L, dtype=np.int64)
    twin[fw] = fw + 1
    twin[fw + 1] = fw
    edge = np.empty(nd, dtype=np.int64)
    edge[:2 * m] = drs.edge
    edge[fw] = m + np.arange(L)
    edge[fw + 1] = m + np.arange(L)

    # entries (vertex, order, dart) for the rebuilt cut-path copies
    cv, co, cd = [], [], []
    on_pi = np.zeros(F, dtype=bool)
    on_pi[cut.faces] = True
    for j in range(L + 1):
        fj = int(cut.faces[j])
        b2, f2 = frame.refs[fj]
        out_d = int(cut.darts[j]) if j < L else -1
        in_d = int(drs.twin[cut.darts[j - 1]]) if j > 0 else -1
        rights, lefts = [], []
        for d in frame.cw_after(fj, f2):
            if d == out_d or d == in_d:
                continue
            sd = frame.side(d)
            if loop_dart[d]:
                if frame.side(int(drs.twin[d])) != sd:
                    raise WedgeInconsistent(f"dual loop {int(drs.edge[d])} straddles the cut path")
                continue
            (rights if sd == RIGHT else lefts).append(d)
        left_set = set(lefts)
        lefts = [d for d in frame.cw_after(fj, b2) if d in left_set]
        low = ([out_d] if j < L else []) + rights + ([in_d] if j > 0 else [])
        up = ([2 * m + 2 * (j - 1) + 1] if j > 0 else []) + lefts + ([2 * m + 2 * j] if j < L else [])
        uid = F + j
        for q, d in enumerate(low):
            cv.append(fj); co.append(q); cd.append(d)
        for q, d in enumerate(up):
            cv.append(uid); co.append(q); cd.append(d)
            tail[d] = uid

    keep = ~loop_dart[drs.rot] & ~on_pi[drs.tail[drs.rot]]
    kd = drs.rot[keep]
    verts = np.concatenate([drs.tail[kd], np.asarray(cv, dtype=np.int64)])
    order = np.concatenate([drs.pos[kd], np.asarray(co, dtype=np.int64)])
    darts = np.concatenate([kd, np.asarray(cd, dtype=np.int64)])
    srt = np.lexsort((order, verts))
    rot = darts[srt]
    nv = F + L + 1
    indptr = np.zeros(nv + 1, dtype=np.int64)
    np.cumsum(np.bincount(verts, minlength=nv), out=indptr[1:])
    rs = rotation_system(indptr, rot, tail, twin, edge, m + L)

    active = np.zeros(m + L, dtype=bool)
    active[:m] = ~dual.is_loop
    active[m:] = True
    faces = trace_rotation_faces(rs)
    e_act = int(active.sum())
    if nv - e_act + faces.count != 2:
        raise WedgeInconsistent(
            f"doubled dual fails Euler check: {nv} - {e_act} + {faces.count} != 2")
    xs = cut.faces.copy()
    ys = F + np.arange(L + 1, dtype=np.int64)
    first = int(rs.rot[indptr[xs[0]]])
    outer = int(faces.face_of[first])
    for v in np.concatenate([xs, ys]):
        if indptr[v] == indptr[v + 1] or faces.face_of[rs.rot[indptr[v]]] != outer:
            raise WedgeInconsistent(f"copy vertex {int(v)} is not on the outer face")
    walk = faces.walk(outer)
    k0 = int(np.flatnonzero(walk == first)[0])
    walk = np.concatenate([walk[k0:], walk[:k0]])
    return DoubledDual(dual, cut, rs, faces, outer, xs, ys,
                       drs.edge[cut.darts].astype(np.int64), active, walk)
