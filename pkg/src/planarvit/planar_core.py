"""Rotation systems, face tracing and the dual multigraph.

Conventions used throughout the package:

* A rotation system stores, for every vertex, its out-darts in clockwise
  order.  ``rot[indptr[v]:indptr[v + 1]]`` is that block and ``pos[d]`` is the
  offset of dart ``d`` inside it.
* The face of a dart is the face lying to its left; the face successor of
  ``d`` is ``next_cw(twin(d))``.
* Edge ids are shared between a primal graph, its dual and the doubled dual,
  so results can be joined on a single key.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    AsymmetricAdjacency,
    BadTerminals,
    DisconnectedGraph,
    DuplicateEdge,
    EmbeddingInconsistent,
    InputError,
)

RIGHT = 1
LEFT = 2


@dataclass(frozen=True, eq=False)
class RotationSystem:
    """Darts of an embedded (multi)graph grouped by tail in clockwise order.

    Darts that are not listed in ``rot`` are inactive: they keep their
    ``twin``/``edge`` entries but have ``tail == -1`` and are skipped by every
    traversal.
    """

    indptr: np.ndarray
    rot: np.ndarray
    pos: np.ndarray
    tail: np.ndarray
    head: np.ndarray
    twin: np.ndarray
    edge: np.ndarray
    n_edges: int

    @property
    def n_vertices(self) -> int:
        return len(self.indptr) - 1

    @property
    def n_darts(self) -> int:
        return len(self.twin)

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def darts_at(self, v: int) -> np.ndarray:
        return self.rot[self.indptr[v]:self.indptr[v + 1]]

    def next_cw(self, d: int) -> int:
        v = self.tail[d]
        base = self.indptr[v]
        return int(self.rot[base + (self.pos[d] + 1) % (self.indptr[v + 1] - base)])

    def prev_cw(self, d: int) -> int:
        v = self.tail[d]
        base = self.indptr[v]
        return int(self.rot[base + (self.pos[d] - 1) % (self.indptr[v + 1] - base)])

    def next_cw_array(self) -> np.ndarray:
        """Vectorised ``next_cw`` over all darts (-1 for inactive ones)."""
        nxt = np.full(self.n_darts, -1, dtype=np.int64)
        deg = np.diff(self.indptr)
        start = np.repeat(self.indptr[:-1], deg)
        idx = np.arange(len(self.rot), dtype=np.int64)
        local = idx - start
        nxt[self.rot] = self.rot[start + (local + 1) % np.repeat(deg, deg)]
        return nxt

    def face_successor(self) -> np.ndarray:
        nxt = self.next_cw_array()
        succ = np.full(self.n_darts, -1, dtype=np.int64)
        act = self.rot
        succ[act] = nxt[self.twin[act]]
        return succ


def rotation_system(indptr: np.ndarray, rot: np.ndarray, tail: np.ndarray,
                    twin: np.ndarray, edge: np.ndarray, n_edges: int) -> RotationSystem:
    """Assemble a :class:`RotationSystem`, deriving ``pos`` and ``head``."""
    indptr = np.asarray(indptr, dtype=np.int64)
    rot = np.asarray(rot, dtype=np.int64)
    tail = np.asarray(tail, dtype=np.int64)
    twin = np.asarray(twin, dtype=np.int64)
    pos = np.full(len(twin), -1, dtype=np.int64)
    deg = np.diff(indptr)
    pos[rot] = np.arange(len(rot), dtype=np.int64) - np.repeat(indptr[:-1], deg)
    head = np.full(len(twin), -1, dtype=np.int64)
    head[rot] = tail[twin[rot]]
    return RotationSystem(indptr, rot, pos, tail, head, twin,
                          np.asarray(edge, dtype=np.int64), int(n_edges))


def rotation_from_neighbor_lists(n: int, rotations: Sequence[Sequence[int]]):
    """Return CSR ``(indptr, nbrs)`` for per-vertex clockwise neighbour lists."""
    if len(rotations) != n:
        raise InputError(f"expected {n} rotation lists, got {len(rotations)}")
    deg = np.fromiter((len(r) for r in rotations), dtype=np.int64, count=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    nbrs = np.fromiter((w for r in rotations for w in r), dtype=np.int64,
                       count=int(indptr[-1]))
    return indptr, nbrs


def _twins_from_csr(n: int, indptr: np.ndarray, nbrs: np.ndarray):
    deg = np.diff(indptr)
    tail = np.repeat(np.arange(n, dtype=np.int64), deg)
    if len(nbrs) and (nbrs.min() < 0 or nbrs.max() >= n):
        raise InputError("neighbour id out of range")
    if np.any(tail == nbrs):
        v = int(tail[np.argmax(tail == nbrs)])
        raise InputError(f"self-loop at vertex {v}")
    key = tail * n + nbrs
    order = np.argsort(key, kind="stable")
    sk = key[order]
    dup = np.flatnonzero(sk[1:] == sk[:-1])
    if len(dup):
        d = order[dup[0]]
        raise DuplicateEdge(f"edge {int(tail[d])}-{int(nbrs[d])} listed twice at vertex {int(tail[d])}")
    rkey = nbrs * n + tail
    loc = np.searchsorted(sk, rkey)
    loc = np.minimum(loc, len(sk) - 1)
    ok = sk[loc] == rkey
    if not np.all(ok):
        d = int(np.argmin(ok))
        raise AsymmetricAdjacency(
            f"vertex {int(tail[d])} lists {int(nbrs[d])} but not vice versa")
    return tail, order[loc]


@dataclass(frozen=True, eq=False)
class EmbeddedGraph:
    """Simple connected planar graph with a fixed rotation system and terminals.

    Darts are numbered in CSR order of the input rotations, so dart ``d`` is
    the ``pos[d]``-th clockwise neighbour entry of its tail.  Edge ids follow
    the first appearance of each edge in that order.
    """

    n: int
    s: int
    t: int
    rs: RotationSystem
    edge_u: np.ndarray
    edge_v: np.ndarray

    @property
    def m(self) -> int:
        return int(self.rs.n_edges)

    @property
    def indptr(self) -> np.ndarray:
        return self.rs.indptr

    @property
    def nbrs(self) -> np.ndarray:
        return self.rs.head

    def rotation(self, v: int) -> list[int]:
        return self.rs.head[self.rs.indptr[v]:self.rs.indptr[v + 1]].tolist()

    def rotations(self) -> list[list[int]]:
        return [self.rotation(v) for v in range(self.n)]

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.edge_u.tolist(), self.edge_v.tolist()))

    def edge_id(self, u: int, v: int) -> int:
        for d in range(self.indptr[u], self.indptr[u + 1]):
            if self.rs.head[d] == v:
                return int(self.rs.edge[d])
        raise KeyError((u, v))

    def with_terminals(self, s: int, t: int) -> "EmbeddedGraph":
        _check_terminals(self.n, s, t)
        return EmbeddedGraph(self.n, s, t, self.rs, self.edge_u, self.edge_v)

    @classmethod
    def from_csr(cls, n: int, indptr, nbrs, s: int, t: int,
                 check_connected: bool = True) -> "EmbeddedGraph":
        indptr = np.asarray(indptr, dtype=np.int64)
        nbrs = np.asarray(nbrs, dtype=np.int64)
        _check_terminals(n, s, t)
        if len(indptr) != n + 1:
            raise InputError("indptr length does not match vertex count")
        tail, twin = _twins_from_csr(n, indptr, nbrs)
        nd = len(nbrs)
        darts = np.arange(nd, dtype=np.int64)
        canon = darts < twin
        eid_of_canon = np.cumsum(canon) - 1
        edge = np.where(canon, eid_of_canon, eid_of_canon[twin])
        m = int(canon.sum())
        rs = RotationSystem(indptr, darts, darts - np.repeat(indptr[:-1], np.diff(indptr)),
                            tail, nbrs.copy(), twin, edge.astype(np.int64), m)
        g = cls(n, int(s), int(t), rs, tail[canon], nbrs[canon])
        if check_connected and not is_connected(g):
            raise DisconnectedGraph("graph is not connected")
        return g


def _check_terminals(n: int, s: int, t: int) -> None:
    if not (0 <= s < n and 0 <= t < n):
        raise BadTerminals(f"terminals ({s}, {t}) out of range for n={n}")
    if s == t:
        raise BadTerminals("s and t must differ")


def build_embedded_graph(n: int, s: int, t: int,
                         rotations: Sequence[Sequence[int]]) -> EmbeddedGraph:
    """Build a graph from per-vertex clockwise neighbour lists."""
    indptr, nbrs = rotation_from_neighbor_lists(n, rotations)
    return EmbeddedGraph.from_csr(n, indptr, nbrs, s, t)


def is_connected(g: EmbeddedGraph) -> bool:
    if g.n == 0:
        return True
    rs = g.rs
    dist = np.full(g.n, -1, dtype=np.int64)
    stamp = np.zeros(rs.n_edges, dtype=np.int64)
    seen = kernels.bfs_region(rs.indptr, rs.rot, rs.head, rs.edge, stamp, 0, 0, dist)
    return len(seen) == g.n


@dataclass(frozen=True, eq=False)
class FaceStructure:
    """Face of every dart plus the boundary walk of every face."""

    face_of: np.ndarray
    indptr: np.ndarray
    order: np.ndarray

    @property
    def count(self) -> int:
        return len(self.indptr) - 1

    def walk(self, f: int) -> np.ndarray:
        return self.order[self.indptr[f]:self.indptr[f + 1]]

    def walk_lengths(self) -> np.ndarray:
        return np.diff(self.indptr)


def trace_rotation_faces(rs: RotationSystem) -> FaceStructure:
    """Trace faces of any rotation system (inactive darts get face -1)."""
    succ = rs.face_successor()
    active = rs.rot
    if len(active) == rs.n_darts:
        label, order, starts = kernels.trace_permutation(succ)
        return FaceStructure(label, starts, order)
    # compress to the active darts, trace, expand back
    local = np.full(rs.n_darts, -1, dtype=np.int64)
    srt = np.sort(active)
    local[srt] = np.arange(len(srt), dtype=np.int64)
    lab, order, starts = kernels.trace_permutation(local[succ[srt]])
    face_of = np.full(rs.n_darts, -1, dtype=np.int64)
    face_of[srt] = lab
    return FaceStructure(face_of, starts, srt[order])


def trace_faces(g: EmbeddedGraph) -> FaceStructure:
    """Trace the faces of ``g`` and verify Euler's formula."""
    fs = trace_rotation_faces(g.rs)
    if g.n - g.m + fs.count != 2:
        raise EmbeddingInconsistent(
            f"Euler check failed: {g.n} - {g.m} + {fs.count} != 2")
    return fs


def faces_at_vertex(g: EmbeddedGraph, f: FaceStructure, v: int) -> list[int]:
    """Faces incident to ``v``, one entry per corner, in clockwise order."""
    return f.face_of[g.indptr[v]:g.indptr[v + 1]].tolist()


@dataclass(frozen=True, eq=False)
class DualGraph:
    """Dual multigraph; dual dart ``d`` crosses primal dart ``d`` from its
    left face to its right face, and dual edge ids equal primal edge ids."""

    graph: EmbeddedGraph
    faces: FaceStructure
    rs: RotationSystem
    is_loop: np.ndarray = field(repr=False)

    @property
    def n_vertices(self) -> int:
        return self.rs.n_vertices

    @property
    def n_edges(self) -> int:
        return self.rs.n_edges

    def edge_faces(self, e: int) -> tuple[int, int]:
        d = int(np.flatnonzero(self.rs.edge == e)[0])
        return int(self.rs.tail[d]), int(self.rs.head[d])

    def primal_edge(self, e_star: int) -> int:
        return int(e_star)

    def dual_edge(self, e: int) -> int:
        return int(e)


def dual_rotation(rs: RotationSystem, faces: FaceStructure) -> RotationSystem:
    """Rotation system of the dual: clockwise order is the reversed face walk."""
    fptr = faces.indptr
    lens = np.diff(fptr)
    start = np.repeat(fptr[:-1], lens)
    end = np.repeat(fptr[1:], lens)
    idx = np.arange(len(faces.order), dtype=np.int64)
    rot = faces.order[start + end - 1 - idx]
    tail = faces.face_of.copy()
    return rotation_system(fptr, rot, tail, rs.twin, rs.edge, rs.n_edges)


def build_dual(g: EmbeddedGraph, f: FaceStructure) -> DualGraph:
    drs = dual_rotation(g.rs, f)
    d0 = np.flatnonzero(g.rs.twin > np.arange(g.rs.n_darts))
    is_loop = np.zeros(g.m, dtype=bool)
    is_loop[g.rs.edge[d0]] = f.face_of[d0] == f.face_of[g.rs.twin[d0]]
    return DualGraph(g, f, drs, is_loop)


def bridges_from_faces(g: EmbeddedGraph, f: FaceStructure) -> np.ndarray:
    """Boolean mask of bridges: edges with the same face on both sides."""
    d0 = np.flatnonzero(g.rs.twin > np.arange(g.rs.n_darts))
    out = np.zeros(g.m, dtype=bool)
    out[g.rs.edge[d0]] = f.face_of[d0] == f.face_of[g.rs.twin[d0]]
    return out


class PathFrame:
    """Left/right classification of darts at the vertices of a simple path.

    At an inner path vertex the two references are the reversed incoming dart
    (back) and the outgoing dart (forward).  At the endpoints the missing
    reference is a *slot* in the rotation, given as a doubled position:
    ``2 * p`` is the dart at offset ``p`` and ``2 * p - 1`` the slot just
    before it.  Darts clockwise after forward and before back are RIGHT.
    """

    def __init__(self, rs: RotationSystem, darts, start_slot: int, end_slot: int):
        self.rs = rs
        self.darts = np.asarray(darts, dtype=np.int64)
        m = len(self.darts)
        if m == 0:
            raise ValueError("empty path")
        verts = [int(rs.tail[self.darts[0]])] + [int(h) for h in rs.head[self.darts]]
        self.vertices = verts
        self.index = {v: i for i, v in enumerate(verts)}
        if len(self.index) != len(verts):
            raise ValueError("path is not simple")
        self.edges = set(int(e) for e in rs.edge[self.darts])
        self.refs: dict[int, tuple[int, int]] = {}
        for i, v in enumerate(verts):
            two = 2 * rs.degree(v)
            b2 = start_slot % two if i == 0 else 2 * int(rs.pos[rs.twin[self.darts[i - 1]]])
            f2 = end_slot % two if i == m else 2 * int(rs.pos[self.darts[i]])
            self.refs[v] = (b2, f2)

    def side(self, d: int) -> int:
        """RIGHT or LEFT for a non-path dart ``d`` leaving a path vertex."""
        rs = self.rs
        v = int(rs.tail[d])
        b2, f2 = self.refs[v]
        two = 2 * rs.degree(v)
        r = (2 * int(rs.pos[d]) - f2) % two
        span = (b2 - f2) % two
        if r == 0 or r == span:
            raise ValueError("dart coincides with a path reference")
        return RIGHT if r < span else LEFT

    def cw_after(self, v: int, ref2: int) -> list[int]:
        """Darts at ``v`` in clockwise order starting just after ``ref2``."""
        rs = self.rs
        block = rs.darts_at(v)
        two = 2 * len(block)
        keys = [((2 * q - ref2) % two or two) for q in range(len(block))]
        return [int(block[q]) for q in sorted(range(len(block)), key=keys.__getitem__)]
