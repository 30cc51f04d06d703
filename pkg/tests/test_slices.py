from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import corpus
from planarvit.errors import VertexNotInForest
from planarvit.fixtures import fix_c4, fix_grid3
from planarvit.slices import (
    NcaIndex,
    _intersect_batch,
    build_nca_index,
    build_slice,
    consecutive_intersections,
    corridor_edges,
    expanded_slice_edges,
    left_right_oracle,
    naive_nca,
    outer_stretch_labels,
    offline_nca,
    path_intersection_edges,
    region_labels,
    slice_buckets,
)
from planarvit.toolkit.generators import triangulated_disk
from planarvit.vitality_engine import run_pipeline


def forest(parent: list[int]) -> NcaIndex:
    """Index over a forest given as a parent list (parents precede children)."""
    n = len(parent)
    par = np.asarray(parent, dtype=np.int64)
    depth = np.zeros(n, dtype=np.int64)
    tree = np.zeros(n, dtype=np.int64)
    roots = []
    for v in range(n):
        if par[v] < 0:
            tree[v] = len(roots)
            roots.append(v)
        else:
            depth[v] = depth[par[v]] + 1
            tree[v] = tree[par[v]]
    order = np.argsort(depth, kind="stable")
    kids = order[par[order] >= 0]
    srt = np.argsort(par[kids], kind="stable")
    cptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(par[kids], minlength=n), out=cptr[1:])
    return NcaIndex(par, depth, tree, order, cptr, kids[srt], np.asarray(roots, dtype=np.int64))


def tree_path_edges(nca: NcaIndex, a: int, b: int) -> set[tuple[int, int]]:
    w = naive_nca(nca, a, b)
    out = set()
    for z in (a, b):
        while z != w:
            out.add((int(nca.parent[z]), z))
            z = int(nca.parent[z])
    return out


def tree_path_vertices(nca: NcaIndex, a: int, b: int) -> set[int]:
    w = naive_nca(nca, a, b)
    out = {w}
    for z in (a, b):
        while z != w:
            out.add(z)
            z = int(nca.parent[z])
    return out


random_forest = st.lists(st.integers(-1, 10**6), min_size=1, max_size=60).map(
    lambda raw: [-1] + [(-1 if r < 0 or (r % 7 == 0) else r % i) for i, r in enumerate(raw[1:], 1)])


def pipeline(g):
    res = run_pipeline(g, keep=True)
    return res.doubled, res.family, res.slices


# --------------------------------------------------------------------------
# nearest common ancestors
# --------------------------------------------------------------------------

def test_nca_identity():
    nca = forest([-1, 0, 1])
    assert offline_nca(nca, [(2, 2), (0, 0)]) == [2, 0]


def test_nca_path_tree():
    nca = forest([-1, 0, 1])  # a - b - c rooted at a
    assert offline_nca(nca, [(1, 2), (2, 1), (0, 2)]) == [1, 1, 0]


def test_nca_star():
    nca = forest([-1, 0, 0, 0])
    assert offline_nca(nca, [(1, 2), (2, 3), (1, 0)]) == [0, 0, 0]


def test_nca_different_trees():
    nca = forest([-1, 0, -1, 2])
    assert offline_nca(nca, [(1, 3), (0, 1)]) == [-1, 0]


def test_nca_rejects_foreign_vertex():
    nca = forest([-1, 0])
    with pytest.raises(VertexNotInForest):
        offline_nca(nca, [(0, 5)])


@settings(max_examples=80, deadline=None)
@given(random_forest, st.randoms(use_true_random=False))
def test_offline_matches_naive(parent, rnd):
    nca = forest(parent)
    n = len(parent)
    qs = [(rnd.randrange(n), rnd.randrange(n)) for _ in range(3 * n)]
    assert offline_nca(nca, qs) == [naive_nca(nca, u, v) for u, v in qs]


@settings(max_examples=80, deadline=None)
@given(random_forest, st.randoms(use_true_random=False))
def test_tree_path_intersection(parent, rnd):
    nca = forest(parent)
    n = len(parent)
    pairs = []
    for _ in range(2 * n):
        a, b, c, d = (rnd.randrange(n) for _ in range(4))
        if nca.tree[a] == nca.tree[b] and nca.tree[c] == nca.tree[d]:
            pairs.append(((a, b), (c, d)))
    got = _intersect_batch(nca, pairs)
    for ((a, b), (c, d)), hit in zip(pairs, got):
        common_v = tree_path_vertices(nca, a, b) & tree_path_vertices(nca, c, d)
        common_e = tree_path_edges(nca, a, b) & tree_path_edges(nca, c, d)
        if not common_v:
            assert hit is None
            continue
        assert hit is not None and hit.length == len(common_e)
        assert {hit.a, hit.b} <= common_v
        assert tree_path_vertices(nca, hit.a, hit.b) == common_v


def test_disjoint_paths_empty():
    nca = forest([-1, 0, 1, 0, 3])
    assert _intersect_batch(nca, [((1, 2), (3, 4))]) == [None]


def test_shifted_paths_share_segment():
    # path 0-1-2-3-4; p = 0..3, q = 1..4 share 1..3
    nca = forest([-1, 0, 1, 2, 3])
    (hit,) = _intersect_batch(nca, [((0, 3), (1, 4))])
    assert {hit.a, hit.b} == {1, 3} and hit.length == 2


def family_intersections_ok(D, fam):
    inter = consecutive_intersections(fam, build_nca_index(fam, D))
    rs = D.rs
    for table, gap in ((inter.next_, 1), (inter.skip, 2)):
        for i, hit in table.items():
            a, b = i - gap if gap == 2 else i - 1, i if gap == 2 else i
            common_e = path_intersection_edges(fam, D, a, b)
            common_v = set(fam.path_vertices(rs, a)) & set(fam.path_vertices(rs, b))
            if not common_v:
                assert hit is None
            else:
                assert hit is not None and hit.length == len(common_e)
                assert hit.a in common_v and hit.b in common_v


def test_grid3_intersections():
    D, fam, _ = pipeline(fix_grid3())
    family_intersections_ok(D, fam)


def test_corpus_intersections():
    for g in corpus(80, 17, 4, 200):
        D, fam, _ = pipeline(g)
        if fam is not None:
            family_intersections_ok(D, fam)


# --------------------------------------------------------------------------
# region labels
# --------------------------------------------------------------------------

def inner_labels(D, labels):
    keep = np.ones(len(labels.face), dtype=bool)
    keep[D.outer_face] = False
    return set(labels.face[keep].tolist())


def test_single_path_labels():
    D, fam, _ = pipeline(triangulated_disk(12, 5))
    assert fam.k == 1
    assert inner_labels(D, region_labels(D, fam)) <= {0, 1}


def test_c4_three_regions():
    D, fam, _ = pipeline(fix_c4())
    assert fam.k == 2
    # D has only two inner faces; all three region indices occur along the outer face
    assert set(outer_stretch_labels(D, fam).tolist()) == {0, 1, 2}
    labels = region_labels(D, fam)
    assert inner_labels(D, labels) <= {0, 1, 2}
    rs = D.rs
    for f in range(D.faces.count):
        if f == D.outer_face:
            continue
        r = int(labels.face[f])
        for e in rs.edge[D.faces.walk(f)].tolist():
            for i in (r, r + 1):
                if 1 <= i <= fam.k:
                    assert e in left_right_oracle(i, D, fam)


def test_u_edges_separate_interval_ends():
    seen_wide = False
    for g in corpus(60, 23, 10, 300):
        D, fam, _ = pipeline(g)
        if fam is None:
            continue
        labels = region_labels(D, fam)
        rs, faces = D.rs, D.faces
        for e in fam.u_edges.tolist():
            d = int(fam.u_dart[e])
            lo, hi = int(fam.u_lo[e]), int(fam.u_hi[e])
            left, right = int(faces.face_of[d]), int(faces.face_of[rs.twin[d]])
            if left != D.outer_face:
                assert labels.face[left] == hi
            if right != D.outer_face:
                assert labels.face[right] == lo - 1
            seen_wide |= hi - lo >= 2
    assert seen_wide


# --------------------------------------------------------------------------
# slices
# --------------------------------------------------------------------------

def test_first_and_last_slice_uncontracted():
    for g in corpus(40, 29, 10, 300):
        D, fam, slices = pipeline(g)
        if fam is None:
            continue
        assert slices[0].contracted is None
        assert slices[-1].contracted is None


def test_grid3_slices_equal_oracle():
    D, fam, slices = pipeline(fix_grid3())
    for sl in slices:
        assert sl.contracted is None
        assert expanded_slice_edges(sl, fam, D) == left_right_oracle(sl.index, D, fam)


def test_c4_slices_cover_everything():
    D, fam, slices = pipeline(fix_c4())
    got = set().union(*(left_right_oracle(i, D, fam) for i in (1, 2)))
    assert got == set(np.flatnonzero(D.active_edge).tolist())


def test_contracted_corridors():
    found = 0
    for g in corpus(160, 41, 20, 400):
        D, fam, slices = pipeline(g)
        if fam is None:
            continue
        inter = consecutive_intersections(fam, build_nca_index(fam, D))
        for sl in slices:
            i = sl.index
            corr = corridor_edges(fam, D, i)
            assert (sl.contracted is not None) == (len(corr) >= 1)
            if sl.contracted is None:
                continue
            found += 1
            a, b, w = sl.contracted
            assert w == len(corr) == inter.skip[i].length
            assert corr <= set(D.rs.edge[fam.paths[i - 1]].tolist())
            assert {int(sl.vertices[a]), int(sl.vertices[b])} == {inter.skip[i].a, inter.skip[i].b}
            assert expanded_slice_edges(sl, fam, D) == left_right_oracle(i, D, fam)
    assert found > 0


def test_slice_membership_and_size():
    for g in corpus(100, 43, 4, 300):
        D, fam, slices = pipeline(g)
        if fam is None:
            continue
        k = fam.k
        member = {}
        for sl in slices:
            for e in expanded_slice_edges(sl, fam, D):
                member.setdefault(e, []).append(sl.index)
        labels = region_labels(D, fam)
        for e in np.flatnonzero(D.active_edge).tolist():
            idx = member.get(e, [])
            assert idx, f"edge {e} in no slice"
            if fam.is_u[e]:
                continue
            r = int(labels.edge[e])
            assert idx == [i for i in (r, r + 1) if 1 <= i <= k]
        total = sum(sl.n_edges for sl in slices)
        assert total <= 10 * (D.n_edges + k)


def test_build_slice_standalone_matches_pipeline():
    D, fam, slices = pipeline(fix_grid3())
    labels = region_labels(D, fam)
    inter = consecutive_intersections(fam, build_nca_index(fam, D))
    buckets = slice_buckets(D, labels, fam)
    for sl in slices:
        again = build_slice(sl.index, D, labels, fam, inter)
        assert np.array_equal(again.edge_global, sl.edge_global)
        assert np.array_equal(buckets.edges[sl.index], sl.edge_global[:sl.n_unit_edges])
