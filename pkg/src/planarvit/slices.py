"""Path intersections, face region labels and compact slices.

Regions of D are numbered ``0..k``: region ``r`` lies between ``p_r`` and
``p_{r+1}`` (region 0 is s-ward of ``p_1``, region ``k`` t-ward of ``p_k``).
Slice ``i`` holds regions ``i-1`` and ``i`` plus the path edges bounding them;
the stretch shared by ``p_{i-1}`` and ``p_{i+1}`` is replaced by one weighted
edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .cut_construction import DoubledDual
from .errors import LabelInconsistency, OracleCapExceeded, SliceInvariantViolation, VertexNotInForest
from .noncrossing_paths import PathFamily

ORACLE_CAP = 2000


# --------------------------------------------------------------------------
# nearest common ancestors in U
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NcaIndex:
    """Rooted forest U; every tree is rooted at the x of its lowest path."""

    parent: np.ndarray
    depth: np.ndarray
    tree: np.ndarray
    order: np.ndarray
    children_ptr: np.ndarray
    children: np.ndarray
    roots: np.ndarray

    def contains(self, v: int) -> bool:
        return 0 <= v < len(self.depth) and self.depth[v] >= 0

    def query(self, queries) -> list[int]:
        return offline_nca(self, queries)


def build_nca_index(fam: PathFamily, d: DoubledDual) -> NcaIndex:
    rs = d.rs
    nv = rs.n_vertices
    ue = fam.u_edges
    ud = fam.u_dart[ue]
    a = rs.tail[ud]
    b = rs.head[ud]
    src = np.concatenate([a, b])
    dst = np.concatenate([b, a])
    srt = np.argsort(src, kind="stable")
    indptr = np.zeros(nv + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=nv), out=indptr[1:])
    nbr = dst[srt]
    parent = np.full(nv, -1, dtype=np.int64)
    depth = np.full(nv, -1, dtype=np.int64)
    tree = np.full(nv, -1, dtype=np.int64)
    order = []
    roots = []
    for x in fam.x.tolist():
        if depth[x] >= 0:
            continue
        t = len(roots)
        roots.append(x)
        depth[x] = 0
        tree[x] = t
        queue = [x]
        for v in queue:
            order.append(v)
            for w in nbr[indptr[v]:indptr[v + 1]].tolist():
                if depth[w] < 0:
                    depth[w] = depth[v] + 1
                    parent[w] = v
                    tree[w] = t
                    queue.append(w)
                elif w != parent[v] and parent[w] != v:
                    raise VertexNotInForest("U contains a cycle")
    order = np.asarray(order, dtype=np.int64)
    kids = order[parent[order] >= 0]
    csrt = np.argsort(parent[kids], kind="stable")
    cptr = np.zeros(nv + 1, dtype=np.int64)
    np.cumsum(np.bincount(parent[kids], minlength=nv), out=cptr[1:])
    return NcaIndex(parent, depth, tree, order, cptr, kids[csrt],
                    np.asarray(roots, dtype=np.int64))


def offline_nca(nca: NcaIndex, queries) -> list[int]:
    """Tarjan's offline algorithm; -1 for pairs in different trees."""
    queries = [(int(u), int(v)) for u, v in queries]
    ans = [-1] * len(queries)
    pending: dict[int, list[tuple[int, int]]] = {}
    for qi, (u, v) in enumerate(queries):
        for z in (u, v):
            if not nca.contains(z):
                raise VertexNotInForest(f"vertex {z} is not in U")
        if nca.tree[u] != nca.tree[v]:
            continue
        if u == v:
            ans[qi] = u
            continue
        pending.setdefault(u, []).append((v, qi))
        pending.setdefault(v, []).append((u, qi))
    uf: dict[int, int] = {}
    anc: dict[int, int] = {}
    done: set[int] = set()

    def find(z: int) -> int:
        root = z
        while uf[root] != root:
            root = uf[root]
        while uf[z] != root:
            uf[z], z = root, uf[z]
        return root

    cptr, kids = nca.children_ptr, nca.children
    for r in nca.roots.tolist():
        stack = [(r, 0)]
        uf[r] = r
        anc[r] = r
        while stack:
            v, c = stack[-1]
            lo = cptr[v]
            if lo + c < cptr[v + 1]:
                w = int(kids[lo + c])
                stack[-1] = (v, c + 1)
                uf[w] = w
                anc[w] = w
                stack.append((w, 0))
                continue
            stack.pop()
            done.add(v)
            for w, qi in pending.get(v, ()):
                if w in done and ans[qi] < 0:
                    ans[qi] = anc[find(w)]
            if stack:
                p = stack[-1][0]
                uf[find(v)] = find(p)
                anc[find(p)] = p
    return ans


def naive_nca(nca: NcaIndex, u: int, v: int) -> int:
    if nca.tree[u] != nca.tree[v]:
        return -1
    while nca.depth[u] > nca.depth[v]:
        u = int(nca.parent[u])
    while nca.depth[v] > nca.depth[u]:
        v = int(nca.parent[v])
    while u != v:
        u, v = int(nca.parent[u]), int(nca.parent[v])
    return u


@dataclass(frozen=True)
class Intersection:
    """Common subpath of two tree paths: endpoints and edge count."""

    a: int
    b: int
    length: int


def _intersect_batch(nca: NcaIndex, pairs: list[tuple[tuple[int, int], tuple[int, int]]]):
    first = []
    for (a, b), (c, e) in pairs:
        first += [(a, b), (c, e), (a, c), (a, e), (b, c), (b, e)]
    res = offline_nca(nca, first) if first else []
    depth = nca.depth
    cands = []
    for t in range(len(pairs)):
        lab, lcd, *cross = res[6 * t:6 * t + 6]
        if lab < 0 or lcd < 0 or nca.tree[pairs[t][0][0]] != nca.tree[pairs[t][1][0]]:
            cands.append(None)
            continue
        cross = sorted(cross, key=lambda z: -depth[z])
        u, v = cross[0], cross[1]
        if min(depth[u], depth[v]) < max(depth[lab], depth[lcd]):
            cands.append(None)
            continue
        cands.append((u, v))
    second = [c for c in cands if c is not None]
    res2 = offline_nca(nca, second) if second else []
    out = []
    it = iter(res2)
    for c in cands:
        if c is None:
            out.append(None)
            continue
        w = next(it)
        u, v = c
        out.append(Intersection(int(u), int(v), int(depth[u] + depth[v] - 2 * depth[w])))
    return out


@dataclass(frozen=True)
class Intersections:
    """``next_[i]`` = p_i with p_{i+1}; ``skip[i]`` = p_{i-1} with p_{i+1} (1-based)."""

    next_: dict[int, Intersection | None]
    skip: dict[int, Intersection | None]


def consecutive_intersections(fam: PathFamily, nca: NcaIndex) -> Intersections:
    k = fam.k
    ends = [(int(fam.x[i]), int(fam.y[i])) for i in range(k)]
    nxt_pairs = [(ends[i - 1], ends[i]) for i in range(1, k)]
    skip_pairs = [(ends[i - 2], ends[i]) for i in range(2, k)]
    res = _intersect_batch(nca, nxt_pairs + skip_pairs)
    nxt = {i: res[i - 1] for i in range(1, k)}
    skip = {i: res[len(nxt_pairs) + i - 2] for i in range(2, k)}
    return Intersections(nxt, skip)


def path_intersection_edges(fam: PathFamily, d: DoubledDual, i: int, j: int) -> set[int]:
    """Direct edge-set intersection of two paths (0-based indices)."""
    e = d.rs.edge
    return set(e[fam.paths[i]].tolist()) & set(e[fam.paths[j]].tolist())


# --------------------------------------------------------------------------
# region labels
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RegionLabels:
    face: np.ndarray
    edge: np.ndarray

    def region_of(self, eD: int) -> int:
        return int(self.edge[eD])


def outer_stretch_labels(d: DoubledDual, fam: PathFamily) -> np.ndarray:
    """Region label of every position of the outer walk."""
    walk = d.outer_walk
    rs = d.rs
    where = {int(w): q for q, w in enumerate(walk.tolist())}
    xpos = [where[int(rs.rot[rs.indptr[x]])] for x in fam.x.tolist()]
    ypos = [where[int(rs.rot[rs.indptr[y]])] for y in fam.y.tolist()]
    if xpos != sorted(xpos) or ypos != sorted(ypos, reverse=True) or ypos[-1] < xpos[-1]:
        raise LabelInconsistency("pair copies appear out of order on the outer face")
    q = np.arange(len(walk))
    k = fam.k
    # before the y part: number of x marks at or before q
    lab_x = np.searchsorted(np.asarray(xpos), q, side="right")
    # on the y part: k minus the number of y marks at or before q
    lab_y = k - np.searchsorted(np.asarray(ypos[::-1]), q, side="right")
    return np.where(q >= ypos[-1], lab_y, lab_x).astype(np.int64)


def region_labels(d: DoubledDual, fam: PathFamily) -> RegionLabels:
    rs = d.rs
    faces = d.faces
    outer = d.outer_face
    label = np.full(faces.count, -1, dtype=np.int64)
    seeds_f = []
    seeds_l = []
    ue = fam.u_edges
    ud = fam.u_dart[ue]
    seeds_f += [faces.face_of[ud], faces.face_of[rs.twin[ud]]]
    seeds_l += [fam.u_hi[ue], fam.u_lo[ue] - 1]
    walk = d.outer_walk
    stretch = outer_stretch_labels(d, fam)
    non_u = ~fam.is_u[rs.edge[walk]]
    seeds_f.append(faces.face_of[rs.twin[walk[non_u]]])
    seeds_l.append(stretch[non_u])
    sf = np.concatenate(seeds_f)
    sl = np.concatenate(seeds_l)
    keep = sf != outer
    sf, sl = sf[keep], sl[keep]
    label[sf] = sl
    if np.any(label[sf] != sl):
        f = int(sf[np.flatnonzero(label[sf] != sl)[0]])
        raise LabelInconsistency(f"face {f} receives conflicting seed labels")
    is_u = fam.is_u.astype(np.int8)
    bad = kernels.propagate_face_labels(faces.indptr, faces.order, faces.face_of, rs.twin,
                                        rs.edge, is_u, outer, label)
    if bad >= 0:
        raise LabelInconsistency(f"face {bad} reached with two different labels")
    inner = np.ones(faces.count, dtype=bool)
    inner[outer] = False
    if np.any(label[inner] < 0):
        raise LabelInconsistency("some inner face of D received no label")
    # edge labels for non-U edges
    elab = np.full(rs.n_edges, -1, dtype=np.int64)
    act = rs.rot
    f_left = faces.face_of[act]
    f_right = faces.face_of[rs.twin[act]]
    e = rs.edge[act]
    mask = ~fam.is_u[e] & (f_left != outer)
    elab[e[mask]] = label[f_left[mask]]
    mask2 = ~fam.is_u[e] & (f_left != outer) & (f_right != outer)
    if np.any(label[f_left[mask2]] != label[f_right[mask2]]):
        raise LabelInconsistency("a non-U edge separates two differently labelled faces")
    # edges with the outer face on both sides take the stretch label
    pos_lab = np.full(rs.n_darts, -1, dtype=np.int64)
    pos_lab[walk] = stretch
    both = ~fam.is_u[e] & (f_left == outer) & (f_right == outer)
    if np.any(both):
        dd = act[both]
        la, lb = pos_lab[dd], pos_lab[rs.twin[dd]]
        if np.any(la != lb):
            raise LabelInconsistency("an outer bridge of D spans two stretches")
        elab[rs.edge[dd]] = la
    return RegionLabels(label, elab)


# --------------------------------------------------------------------------
# slices
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Slice:
    """Compact slice: local unit edges plus at most one weighted edge.

    ``edge_global[j]`` is the D edge id of local edge ``j`` (-1 for the
    contracted edge, which is always the last local edge when present).
    """

    index: int
    vertices: np.ndarray
    eu: np.ndarray
    ev: np.ndarray
    weight: np.ndarray
    edge_global: np.ndarray
    x: int
    y: int
    contracted: tuple[int, int, int] | None

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.eu)

    @property
    def n_unit_edges(self) -> int:
        return self.n_edges - (1 if self.contracted else 0)

    def local(self, v: int) -> int:
        hit = np.searchsorted(self.vertices, v)
        if hit >= len(self.vertices) or self.vertices[hit] != v:
            raise KeyError(v)
        return int(hit)

    def unit_csr(self):
        """CSR adjacency of the unit edges only."""
        nu = self.n_unit_edges
        u, v = self.eu[:nu], self.ev[:nu]
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        srt = np.argsort(src, kind="stable")
        indptr = np.zeros(self.n_vertices + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n_vertices), out=indptr[1:])
        return indptr, dst[srt]


@dataclass(frozen=True, eq=False)
class SliceBuckets:
    """Global D edge ids of the unit edges of every slice (1-based index)."""

    edges: dict[int, np.ndarray]


def slice_buckets(d: DoubledDual, labels: RegionLabels, fam: PathFamily) -> SliceBuckets:
    k = fam.k
    rs = d.rs
    elab = labels.edge
    non_u = np.flatnonzero((elab >= 0) & ~fam.is_u)
    r = elab[non_u]
    ids = [non_u[r >= 1], non_u[r + 1 <= k]]
    sl = [r[r >= 1], r[r + 1 <= k] + 1]
    ue = fam.u_edges
    lo, hi = fam.u_lo[ue], fam.u_hi[ue]
    for cand in (lo - 1, lo, hi, hi + 1):
        ok = (cand >= 1) & (cand <= k)
        ids.append(ue[ok])
        sl.append(cand[ok])
    all_ids = np.concatenate(ids)
    all_sl = np.concatenate(sl)
    # a U edge can be produced twice (e.g. lo == hi); keep one copy
    key = all_sl * rs.n_edges + all_ids
    key = np.unique(key)
    all_sl, all_ids = np.divmod(key, rs.n_edges)
    bounds = np.searchsorted(all_sl, np.arange(1, k + 2))
    return SliceBuckets({i: all_ids[bounds[i - 1]:bounds[i]] for i in range(1, k + 1)})


def build_slice(i: int, d: DoubledDual, labels: RegionLabels, fam: PathFamily,
                inter: Intersections, buckets: SliceBuckets | None = None,
                check: bool = True) -> Slice:
    rs = d.rs
    if buckets is None:
        buckets = slice_buckets(d, labels, fam)
    ge = buckets.edges[i]
    dart0 = _edge_dart(d)[ge]
    gu = rs.tail[dart0]
    gv = rs.head[dart0]
    q = inter.skip.get(i) if 2 <= i <= fam.k - 1 else None
    contracted = None
    extra = []
    if q is not None and q.length >= 1:
        extra = [q.a, q.b]
    verts = np.unique(np.concatenate([gu, gv, np.asarray(extra, dtype=np.int64),
                                      fam.x[i - 1:i], fam.y[i - 1:i]]))
    lu = np.searchsorted(verts, gu)
    lv = np.searchsorted(verts, gv)
    weight = np.ones(len(ge), dtype=np.int64)
    egl = ge.astype(np.int64)
    if extra:
        a, b = np.searchsorted(verts, extra)
        contracted = (int(a), int(b), int(q.length))
        lu = np.append(lu, a)
        lv = np.append(lv, b)
        weight = np.append(weight, q.length)
        egl = np.append(egl, -1)
    sl = Slice(i, verts, lu.astype(np.int64), lv.astype(np.int64), weight, egl,
               int(np.searchsorted(verts, fam.x[i - 1])),
               int(np.searchsorted(verts, fam.y[i - 1])), contracted)
    if check and contracted is not None:
        _check_corridor(sl, d, fam, i, q)
    return sl


def _check_corridor(sl: Slice, d: DoubledDual, fam: PathFamily, i: int,
                    q: Intersection) -> None:
    # endpoints of the corridor must lie on p_i
    pv = set(fam.path_vertices(d.rs, i - 1))
    if q.a not in pv or q.b not in pv:
        raise SliceInvariantViolation(f"corridor of slice {i} is not contained in p_{i}")


_EDGE_DART_CACHE: dict[int, np.ndarray] = {}


def _edge_dart(d: DoubledDual) -> np.ndarray:
    key = id(d)
    hit = _EDGE_DART_CACHE.get(key)
    if hit is not None and hit.shape[0] == d.rs.n_edges:
        return hit
    out = np.full(d.rs.n_edges, -1, dtype=np.int64)
    act = d.rs.rot
    out[d.rs.edge[act]] = act
    _EDGE_DART_CACHE.clear()
    _EDGE_DART_CACHE[key] = out
    return out


def corridor_edges(fam: PathFamily, d: DoubledDual, i: int) -> set[int]:
    """Edges of p_{i-1} and p_{i+1} in common (the stretch a slice contracts)."""
    if not (2 <= i <= fam.k - 1):
        return set()
    return path_intersection_edges(fam, d, i - 2, i)


def expanded_slice_edges(sl: Slice, fam: PathFamily, d: DoubledDual) -> set[int]:
    out = set(sl.edge_global[sl.edge_global >= 0].tolist())
    if sl.contracted is not None:
        out |= corridor_edges(fam, d, sl.index)
    return out


# --------------------------------------------------------------------------
# explicit regions, for cross-checking
# --------------------------------------------------------------------------

def _closed_side(d: DoubledDual, fam: PathFamily, j: int, s_side: bool) -> set[int]:
    """Edges of the closed region of D on one side of p_j (0-based)."""
    rs = d.rs
    faces = d.faces
    outer = d.outer_face
    walk = d.outer_walk.tolist()
    where = {w: q for q, w in enumerate(walk)}
    qx = where[int(rs.rot[rs.indptr[fam.x[j]]])]
    qy = where[int(rs.rot[rs.indptr[fam.y[j]]])]
    n = len(walk)
    if s_side:
        stretch = [walk[(qy + t) % n] for t in range((qx - qy) % n)]
    else:
        stretch = [walk[t] for t in range(qx, qy)]
    path = fam.paths[j].tolist()
    walls = set(int(rs.edge[x]) for x in path) | set(int(rs.edge[x]) for x in stretch)
    if s_side:
        start = [int(faces.face_of[rs.twin[x]]) for x in path]
    else:
        start = [int(faces.face_of[x]) for x in path]
    # stretch darts running along p_j enclose nothing
    pe = set(int(rs.edge[x]) for x in path)
    start += [int(faces.face_of[rs.twin[w]]) for w in stretch if int(rs.edge[w]) not in pe]
    seen = set(f for f in start if f != outer)
    queue = list(seen)
    while queue:
        f = queue.pop()
        for x in faces.walk(f).tolist():
            if int(rs.edge[x]) in walls:
                continue
            g = int(faces.face_of[rs.twin[x]])
            if g != outer and g not in seen:
                seen.add(g)
                queue.append(g)
    out = set(walls)
    for f in seen:
        out.update(rs.edge[faces.walk(f)].tolist())
    return out


def left_right_oracle(i: int, d: DoubledDual, fam: PathFamily, cap: int = ORACLE_CAP) -> set[int]:
    """Explicit edge set of slice ``i`` (1-based) by flood filling D's faces."""
    if d.n_vertices > cap:
        raise OracleCapExceeded(f"doubled dual has {d.n_vertices} vertices (cap {cap})")
    k = fam.k
    everything = set(np.flatnonzero(d.active_edge).tolist())
    region = everything
    if i >= 2:
        region = region & _closed_side(d, fam, i - 2, s_side=False)
    if i <= k - 1:
        region = region & _closed_side(d, fam, i, s_side=True)
    return region
