"""Instance generators: grids, triangulated disks and grids with deleted edges.

All generators are deterministic given their parameters and seed, and produce
rotations that come from an actual straight-line drawing, so the embedding is
planar by construction.
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..errors import CannotSatisfy, InputError
from ..planar_core import EmbeddedGraph, rotation_from_neighbor_lists


def _farthest(indptr: np.ndarray, nbrs: np.ndarray, s: int) -> int:
    dist = kernels.bfs_csr(indptr, nbrs, s)
    return int(np.argmax(dist))


def grid_graph(rows: int, cols: int, s: int | None = None, t: int | None = None) -> EmbeddedGraph:
    """rows x cols grid; vertex ``r * cols + c``; terminals at opposite corners."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise InputError("grid needs at least two vertices")
    n = rows * cols
    r, c = np.divmod(np.arange(n, dtype=np.int64), cols)
    # clockwise in screen coordinates: up, right, down, left
    cand = np.stack([
        np.where(r > 0, (r - 1) * cols + c, -1),
        np.where(c < cols - 1, r * cols + c + 1, -1),
        np.where(r < rows - 1, (r + 1) * cols + c, -1),
        np.where(c > 0, r * cols + c - 1, -1),
    ], axis=1)
    ok = cand >= 0
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(ok.sum(axis=1), out=indptr[1:])
    nbrs = cand[ok]
    s = 0 if s is None else s
    t = n - 1 if t is None else t
    return EmbeddedGraph.from_csr(n, indptr, nbrs, s, t, check_connected=False)


def _rotations_from_points(pts: np.ndarray, adj: list[set[int]]) -> list[list[int]]:
    rots = []
    for v, nb in enumerate(adj):
        nb = np.fromiter(nb, dtype=np.int64, count=len(nb))
        ang = np.arctan2(pts[nb, 1] - pts[v, 1], pts[nb, 0] - pts[v, 0])
        # decreasing angle is clockwise in the usual orientation
        order = np.lexsort((nb, -ang))
        rots.append(nb[order].tolist())
    return rots


def triangulated_disk(n: int, seed: int = 0, s: int | None = None,
                      t: int | None = None) -> EmbeddedGraph:
    """Delaunay triangulation of ``n`` random points in the unit disk."""
    from scipy.spatial import Delaunay

    if n < 3:
        raise CannotSatisfy("triangulated disk needs at least 3 vertices")
    rng = np.random.default_rng(seed)
    rad = np.sqrt(rng.random(n))
    th = rng.random(n) * 2 * np.pi
    pts = np.stack([rad * np.cos(th), rad * np.sin(th)], axis=1)
    tri = Delaunay(pts)
    adj: list[set[int]] = [set() for _ in range(n)]
    for a, b, c in tri.simplices.tolist():
        adj[a].update((b, c))
        adj[b].update((a, c))
        adj[c].update((a, b))
    rots = _rotations_from_points(pts, adj)
    indptr, nbrs = rotation_from_neighbor_lists(n, rots)
    if s is None:
        s = int(np.argmin(pts[:, 0]))
    if t is None:
        t = _farthest(indptr, nbrs, s)
    return EmbeddedGraph.from_csr(n, indptr, nbrs, s, t)


def grid_minus(rows: int, cols: int, deletions: int, seed: int = 0,
               s: int | None = None, t: int | None = None,
               max_attempts: int | None = None) -> EmbeddedGraph:
    """Grid with ``deletions`` random edges removed, keeping it connected."""
    base = grid_graph(rows, cols)
    n, m = base.n, base.m
    if deletions < 0 or deletions > m - (n - 1):
        raise CannotSatisfy(f"cannot delete {deletions} of {m} edges and stay connected")
    rng = np.random.default_rng(seed)
    alive = np.ones(m, dtype=bool)
    eu, ev = base.edge_u, base.edge_v
    adj = [[] for _ in range(n)]
    for e, (a, b) in enumerate(zip(eu.tolist(), ev.tolist())):
        adj[a].append((b, e))
        adj[b].append((a, e))

    def connected_without(e: int) -> bool:
        a, b = int(eu[e]), int(ev[e])
        seen = {a}
        stack = [a]
        while stack:
            v = stack.pop()
            for w, f in adj[v]:
                if f != e and alive[f] and w not in seen:
                    if w == b:
                        return True
                    seen.add(w)
                    stack.append(w)
        return False

    attempts = max_attempts if max_attempts is not None else 20 * m + 100
    removed = 0
    order = rng.permutation(m)
    tries = 0
    while removed < deletions:
        if tries >= attempts:
            raise CannotSatisfy(f"only {removed} of {deletions} deletions kept the grid connected")
        e = int(order[tries % m])
        tries += 1
        if not alive[e]:
            continue
        if connected_without(e):
            alive[e] = False
            removed += 1
    keep = alive[base.rs.edge]
    nbrs = base.rs.head[keep]
    deg = np.bincount(base.rs.tail[keep], minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    s = 0 if s is None else s
    t = n - 1 if t is None else t
    return EmbeddedGraph.from_csr(n, indptr, nbrs, s, t)


KINDS = ("grid", "triangulated-disk", "grid-minus")


def generate_instance(kind: str, seed: int = 0, **params) -> EmbeddedGraph:
    """Dispatch by kind name; parameters as in the individual generators."""
    if kind == "grid":
        return grid_graph(int(params["rows"]), int(params["cols"]),
                          params.get("s"), params.get("t"))
    if kind == "triangulated-disk":
        return triangulated_disk(int(params["n"]), seed, params.get("s"), params.get("t"))
    if kind == "grid-minus":
        return grid_minus(int(params["rows"]), int(params["cols"]), int(params["deletions"]),
                          seed, params.get("s"), params.get("t"))
    raise InputError(f"unknown generator kind {kind!r}")
