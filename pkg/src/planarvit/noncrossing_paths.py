"""Shortest paths between tight pairs, their union forest and validation.

Each tight pair gets the s-most shortest path inside the region left over by
the divide and conquer.  A path from ``x_i`` to ``y_i`` has the lower pairs
(towards s) on its right and the higher pairs on its left, so the greedy walk
prefers the most counterclockwise admissible dart.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cut_construction import DoubledDual
from .errors import FamilyInvariantViolation, NoTightPath
from .pair_distances import PairData, RegionEngine
from .planar_core import PathFrame, RotationSystem

PAIRWISE_LIMIT = 64


@dataclass(frozen=True, eq=False)
class PathFamily:
    """Paths ``p_1..p_k`` (1-based in the interval data, 0-based in lists).

    For every D edge in the union ``U``: ``u_lo``/``u_hi`` are the smallest
    and largest path index using it, ``u_count`` how many do, and ``u_dart``
    the direction they traverse it in.  Non-U entries are -1 / 0.
    """

    mf: int
    pairs: tuple[int, ...]
    x: np.ndarray
    y: np.ndarray
    paths: tuple[np.ndarray, ...]
    is_u: np.ndarray
    u_lo: np.ndarray
    u_hi: np.ndarray
    u_count: np.ndarray
    u_dart: np.ndarray
    direction_conflict: bool = False

    @property
    def k(self) -> int:
        return len(self.paths)

    @property
    def u_edges(self) -> np.ndarray:
        return np.flatnonzero(self.is_u)

    def path_vertices(self, rs: RotationSystem, i: int) -> list[int]:
        p = self.paths[i]
        return [int(rs.tail[p[0]])] + rs.head[p].tolist()

    def interval(self, eD: int) -> tuple[int, int] | None:
        if not self.is_u[eD]:
            return None
        return int(self.u_lo[eD]), int(self.u_hi[eD])


def leftmost_shortest_path(d: DoubledDual, x: int, y: int, region=None,
                           engine: RegionEngine | None = None,
                           length: int | None = None) -> np.ndarray:
    """s-most shortest x-y path inside ``region`` (all active edges by default)."""
    if x == y:
        raise NoTightPath("x and y coincide")
    engine = engine or RegionEngine(d)
    region = engine.all_edges if region is None else np.asarray(region, dtype=np.int64)
    tok = engine.mark(region)
    seen = engine.bfs(tok, y)
    dx = int(engine.dist[x])
    path = engine.walk(tok, x) if dx >= 0 else None
    engine.reset(seen)
    if path is None:
        raise NoTightPath(f"no path from {x} to {y} inside the region")
    if length is not None and len(path) != length:
        raise NoTightPath(f"shortest path has length {len(path)}, expected {length}")
    return path


def _assemble(d: DoubledDual, pairs: PairData, paths: list[np.ndarray]) -> PathFamily:
    nE = d.rs.n_edges
    lo = np.full(nE, -1, dtype=np.int64)
    hi = np.full(nE, -1, dtype=np.int64)
    cnt = np.zeros(nE, dtype=np.int64)
    udart = np.full(nE, -1, dtype=np.int64)
    conflict = False
    edge = d.rs.edge
    for i, p in enumerate(paths, start=1):
        es = edge[p]
        fresh = lo[es] < 0
        lo[es[fresh]] = i
        udart[es[fresh]] = p[fresh]
        hi[es] = i
        cnt[es] += 1
        if np.any(udart[es] != p):
            conflict = True
    js = np.asarray(pairs.tight, dtype=np.int64)
    return PathFamily(pairs.mf, tuple(pairs.tight), d.x_vertices[js], d.y_vertices[js],
                      tuple(paths), cnt > 0, lo, hi, cnt, udart, conflict)


def compute_path_family(d: DoubledDual, pairs: PairData,
                        engine: RegionEngine | None = None,
                        validate: bool = True) -> PathFamily:
    engine = engine or RegionEngine(d)
    tight = list(pairs.tight)
    if not tight:
        raise NoTightPath("no tight pairs")
    dist, paths = engine.solve(tight, keep_paths=True)
    plist = []
    for j in tight:
        if dist[j] != pairs.mf:
            raise NoTightPath(f"pair {j} has region distance {dist[j]}, expected {pairs.mf}")
        plist.append(paths[j])
    fam = _assemble(d, pairs, plist)
    if validate:
        rep = validate_family(fam, d)
        if not rep.ok:
            raise FamilyInvariantViolation("path family failed validation: " + "; ".join(rep.messages), rep)
    return fam


# --------------------------------------------------------------------------
# crossings
# --------------------------------------------------------------------------

def d_path_frame(d: DoubledDual, path: np.ndarray) -> PathFrame:
    """Frame of a D path between two outer copies; both ends use the outer gap."""
    return PathFrame(d.rs, path, -1, -1)


def count_crossings(frame: PathFrame, darts, closed: bool = False) -> int:
    """Number of times the dart walk ``darts`` crosses the frame's path.

    A maximal run of the walk along the path (vertices on the path joined by
    path edges) is a crossing when the walk arrives from one side and leaves
    to the other.  For an open walk, runs touching its ends are not counted.
    """
    rs = frame.rs
    darts = [int(x) for x in darts]
    r = len(darts)
    if r == 0:
        return 0
    on = frame.index
    pe = frame.edges
    is_pe = [int(rs.edge[x]) in pe for x in darts]
    if closed:
        start = next((t for t in range(r) if not is_pe[t - 1]), None)
        if start is None:
            raise ValueError("closed walk runs entirely along the path")
        darts = darts[start:] + darts[:start]
        is_pe = is_pe[start:] + is_pe[:start]
        verts = [int(rs.tail[x]) for x in darts]
    else:
        verts = [int(rs.tail[x]) for x in darts] + [int(rs.head[darts[-1]])]
    crossings = 0
    t = 0
    while t < len(verts):
        if verts[t] not in on:
            t += 1
            continue
        a = t
        while t < r and is_pe[t]:
            t += 1
        b = t
        t += 1
        if not closed and (a == 0 or b == r):
            continue
        if frame.side(int(rs.twin[darts[a - 1]])) != frame.side(darts[b]):
            crossings += 1
    return crossings


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------

@dataclass
class FamilyReport:
    shortest: bool = True
    single_touch: bool = True
    noncrossing: bool = True
    acyclic: bool = True
    intervals: bool = True
    pairs_checked: int = 0
    messages: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.shortest and self.single_touch and self.noncrossing and self.acyclic and self.intervals

    def fail(self, prop: str, msg: str) -> None:
        setattr(self, prop, False)
        if len(self.messages) < 20:
            self.messages.append(msg)


def _single_touch(rs: RotationSystem, p: np.ndarray, q: np.ndarray) -> bool:
    pv = [int(rs.tail[p[0]])] + rs.head[p].tolist()
    qv = set([int(rs.tail[q[0]])] + rs.head[q].tolist())
    qe = set(rs.edge[q].tolist())
    shared = [i for i, v in enumerate(pv) if v in qv]
    if not shared:
        return True
    a, b = shared[0], shared[-1]
    if b - a + 1 != len(shared):
        return False
    return all(int(rs.edge[p[i]]) in qe for i in range(a, b))


def _check_pair(rep: FamilyReport, d: DoubledDual, fam: PathFamily, i: int, j: int,
                frames: dict[int, PathFrame]) -> None:
    rs = d.rs
    p, q = fam.paths[i], fam.paths[j]
    rep.pairs_checked += 1
    if not _single_touch(rs, p, q):
        rep.fail("single_touch", f"paths {i + 1} and {j + 1} touch more than once")
    if i not in frames:
        frames[i] = d_path_frame(d, p)
    c = count_crossings(frames[i], q)
    if c:
        rep.fail("noncrossing", f"paths {i + 1} and {j + 1} cross {c} time(s)")


def validate_family(fam: PathFamily, d: DoubledDual) -> FamilyReport:
    """Check length, single touch, non-crossing, acyclicity and intervals."""
    rep = FamilyReport()
    rs = d.rs
    for i, p in enumerate(fam.paths):
        ok = len(p) == fam.mf
        if ok:
            ok = (int(rs.tail[p[0]]) == int(fam.x[i]) and int(rs.head[p[-1]]) == int(fam.y[i])
                  and bool(np.all(rs.head[p[:-1]] == rs.tail[p[1:]])))
        if not ok:
            rep.fail("shortest", f"path {i + 1} is not an x-y walk of length {fam.mf}")
    if not rep.shortest:
        return rep
    k = fam.k
    frames: dict[int, PathFrame] = {}
    if k <= PAIRWISE_LIMIT:
        pairs = [(i, j) for i in range(k) for j in range(k) if i != j]
    else:
        pairs = [(i, i + 1) for i in range(k - 1)] + [(i + 1, i) for i in range(k - 1)]
    for i, j in pairs:
        _check_pair(rep, d, fam, i, j, frames)
    # U acyclic
    ue = fam.u_edges
    parent: dict[int, int] = {}

    def find(a: int) -> int:
        while parent.get(a, a) != a:
            parent[a] = parent.get(parent[a], parent[a])
            a = parent[a]
        return a

    ud = fam.u_dart[ue]
    for e, a, b in zip(ue.tolist(), rs.tail[ud].tolist(), rs.head[ud].tolist()):
        ra, rb = find(a), find(b)
        if ra == rb:
            rep.fail("acyclic", f"U contains a cycle through edge {e}")
            break
        parent[ra] = rb
    if fam.direction_conflict:
        rep.fail("intervals", "two paths traverse a shared edge in opposite directions")
    bad = ue[fam.u_hi[ue] - fam.u_lo[ue] + 1 != fam.u_count[ue]]
    if len(bad):
        rep.fail("intervals", f"{len(bad)} U edge(s) with non-contiguous path index sets")
    return rep


def membership_intervals_ok(fam: PathFamily, d: DoubledDual) -> bool:
    """Direct membership check of every U edge interval."""
    sets = [set(d.rs.edge[p].tolist()) for p in fam.paths]
    for e in fam.u_edges.tolist():
        idx = [i + 1 for i, s in enumerate(sets) if e in s]
        if idx != list(range(int(fam.u_lo[e]), int(fam.u_hi[e]) + 1)):
            return False
    return True
