from __future__ import annotations

from collections import deque
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from corpus import KIND_NAMES, corpus, random_instance
from planarvit.cut_construction import build_doubled_dual, select_terminal_faces, shortest_dual_path
from planarvit.errors import NoTightPath
from planarvit.fixtures import fix_c4, fix_grid3
from planarvit.noncrossing_paths import (
    PathFamily,
    _assemble,
    compute_path_family,
    count_crossings,
    d_path_frame,
    leftmost_shortest_path,
    membership_intervals_ok,
    validate_family,
)
from planarvit.pair_distances import (
    PairData,
    all_pair_distances,
    compute_max_flow_and_tight_pairs,
    separating_bridges,
)
from planarvit.planar_core import RIGHT, PathFrame, build_dual, build_embedded_graph, trace_faces
from planarvit.toolkit.generators import grid_graph, triangulated_disk


def doubled(g):
    f = trace_faces(g)
    dual = build_dual(g, f)
    fs, ft = select_terminal_faces(g, f)
    return build_doubled_dual(dual, shortest_dual_path(dual, fs, ft))


def family(g, validate=True):
    D = doubled(g)
    pd = compute_max_flow_and_tight_pairs(all_pair_distances(D))
    return D, pd, compute_path_family(D, pd, validate=validate)


def all_shortest_paths(D, x, y, cap=20000):
    rs = D.rs
    dist = {y: 0}
    queue = deque([y])
    while queue:
        v = queue.popleft()
        for d in rs.darts_at(v):
            w = int(rs.head[d])
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    out: list[list[int]] = []

    def go(v, acc):
        if len(out) >= cap:
            return
        if v == y:
            out.append(list(acc))
            return
        for d in rs.darts_at(v):
            w = int(rs.head[d])
            if dist.get(w, -2) == dist[v] - 1:
                acc.append(int(d))
                go(w, acc)
                acc.pop()

    go(x, [])
    return out


def leaves_to_s_side(frame, q) -> bool:
    rs = frame.rs
    return any(int(rs.tail[d]) in frame.index and int(rs.edge[d]) not in frame.edges
               and frame.side(d) == RIGHT for d in q)


def enumerated_leftmost(D, x, y):
    """The shortest path no other shortest path ever leaves towards s."""
    paths = all_shortest_paths(D, x, y)
    return [p for p in paths
            if not any(leaves_to_s_side(d_path_frame(D, np.asarray(p)), q) for q in paths if q != p)]


non_degenerate = st.builds(
    lambda seed, kind, rt: random_instance(np.random.default_rng(seed), kind, 4, 250, rt),
    st.integers(0, 10**6), st.sampled_from(KIND_NAMES), st.booleans(),
).filter(lambda g: g is not None and not separating_bridges(g).any())


# --------------------------------------------------------------------------
# leftmost shortest paths
# --------------------------------------------------------------------------

def test_c4_first_pair_unique_leftmost():
    D = doubled(fix_c4())
    x, y = int(D.x_vertices[0]), int(D.y_vertices[0])
    p = leftmost_shortest_path(D, x, y)
    assert len(p) == 2
    assert enumerated_leftmost(D, x, y) == [p.tolist()]


def test_grid3_middle_pair_leftmost():
    D = doubled(fix_grid3())
    x, y = int(D.x_vertices[1]), int(D.y_vertices[1])
    paths = all_shortest_paths(D, x, y)
    assert len(paths) >= 2
    assert enumerated_leftmost(D, x, y) == [leftmost_shortest_path(D, x, y).tolist()]


def test_leftmost_against_enumeration():
    checked = 0
    for g in corpus(60, 5, 4, 60):
        if separating_bridges(g).any():
            continue
        D = doubled(g)
        pd = compute_max_flow_and_tight_pairs(all_pair_distances(D))
        for j in pd.tight:
            x, y = int(D.x_vertices[j]), int(D.y_vertices[j])
            assert enumerated_leftmost(D, x, y) == [leftmost_shortest_path(D, x, y).tolist()]
            checked += 1
    assert checked >= 50


def test_coinciding_ends_rejected():
    D = doubled(fix_c4())
    with pytest.raises(NoTightPath):
        leftmost_shortest_path(D, 0, 0)


def test_wrong_length_rejected():
    D = doubled(fix_c4())
    with pytest.raises(NoTightPath):
        leftmost_shortest_path(D, int(D.x_vertices[0]), int(D.y_vertices[0]), length=3)


# --------------------------------------------------------------------------
# families
# --------------------------------------------------------------------------

def test_c4_family():
    D, pd, fam = family(fix_c4())
    assert fam.k == 2 and fam.mf == 2
    assert all(len(p) == 2 for p in fam.paths)
    assert validate_family(fam, D).ok


def test_grid3_family():
    D, pd, fam = family(fix_grid3())
    rep = validate_family(fam, D)
    assert rep.ok and rep.acyclic
    assert all(len(p) == 2 for p in fam.paths)


def test_single_tight_pair_family():
    # seeded Delaunay disk whose pair distances are (4, 6, 5)
    g = triangulated_disk(12, 5)
    D, pd, fam = family(g)
    assert pd.distances == (4, 6, 5)
    assert fam.k == 1
    assert fam.u_edges.tolist() == sorted(D.rs.edge[fam.paths[0]].tolist())
    assert validate_family(fam, D).ok


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(non_degenerate)
def test_family_invariants(g):
    D, pd, fam = family(g, validate=False)
    rep = validate_family(fam, D)
    assert rep.ok, rep.messages
    assert len(fam.u_edges) <= fam.k * fam.mf
    if D.n_vertices <= 500:
        assert membership_intervals_ok(fam, D)


# --------------------------------------------------------------------------
# validator catches broken families
# --------------------------------------------------------------------------

def detour_of_length(D, x, y, length):
    """Some simple x-y path with exactly ``length`` edges, or None."""
    rs = D.rs

    def go(v, acc, seen):
        if len(acc) == length:
            return list(acc) if v == y else None
        for d in rs.darts_at(v):
            w = int(rs.head[d])
            if w in seen or (w == y and len(acc) + 1 != length):
                continue
            acc.append(int(d))
            seen.add(w)
            got = go(w, acc, seen)
            if got:
                return got
            seen.discard(w)
            acc.pop()
        return None

    return go(x, [], {x})


def test_detour_fails_shortest():
    for g in corpus(40, 12, 8, 40):
        if separating_bridges(g).any():
            continue
        D, pd, fam = family(g)
        if fam.k < 2:
            continue
        det = detour_of_length(D, int(fam.x[1]), int(fam.y[1]), fam.mf + 1)
        if det is None:
            continue
        paths = list(fam.paths)
        paths[1] = np.asarray(det, dtype=np.int64)
        bad = _assemble(D, PairData(pd.distances, pd.mf, pd.tight), paths)
        rep = validate_family(bad, D)
        assert not rep.shortest and not rep.ok
        return
    pytest.fail("no instance with a detour found")


def eight_vertex_double_touch():
    # 0 - 1 = 2 - 3 = 4 - 5 on top, 1 - 6 - 7 - 4 below; paths 0..5 both ways round
    pts = {0: (-1, 0), 1: (0, 0), 2: (1, 1), 3: (2, 1), 4: (3, 0), 5: (4, 0), 6: (1, -1), 7: (2, -1)}
    rot = [[1], [0, 2, 6], [1, 3], [2, 4], [3, 5, 7], [4], [1, 7], [4, 6]]
    g = build_embedded_graph(8, 0, 5, rot)
    assert len(pts) == g.n
    rs = g.rs

    def darts(vs):
        return np.asarray([rs.indptr[a] + g.rotation(a).index(b) for a, b in zip(vs, vs[1:])])

    p = darts([0, 1, 2, 3, 4, 5])
    q = darts([0, 1, 6, 7, 4, 5])
    d = SimpleNamespace(rs=rs, x_vertices=np.array([0, 0]), y_vertices=np.array([5, 5]))
    return d, _assemble(d, PairData((5, 5), 5, (0, 1)), [p, q])


def test_double_touch_fails_single_touch():
    d, fam = eight_vertex_double_touch()
    rep = validate_family(fam, d)
    assert rep.shortest
    assert not rep.single_touch
    assert not rep.acyclic


def test_family_dataclass_interval():
    d, fam = eight_vertex_double_touch()
    assert isinstance(fam, PathFamily)
    shared = int(d.rs.edge[fam.paths[0][0]])
    assert fam.interval(shared) == (1, 2)
    only_p = int(d.rs.edge[fam.paths[0][1]])
    assert fam.interval(only_p) == (1, 1)


# --------------------------------------------------------------------------
# crossing counter
# --------------------------------------------------------------------------

def grid_frame():
    g = grid_graph(5, 5)
    rs = g.rs

    def darts(vs):
        return [int(rs.indptr[a] + g.rotation(a).index(b)) for a, b in zip(vs, vs[1:])]

    return g, PathFrame(rs, darts(list(range(10, 15))), -1, -1), darts


def test_crossing_straight_through():
    _, frame, darts = grid_frame()
    assert count_crossings(frame, darts([2, 7, 12, 17, 22])) == 1


def test_touch_and_return_is_not_a_crossing():
    _, frame, darts = grid_frame()
    assert count_crossings(frame, darts([6, 11, 12, 7])) == 0
    assert count_crossings(frame, darts([6, 11, 12, 17])) == 1


def test_open_walk_ends_not_counted():
    _, frame, darts = grid_frame()
    assert count_crossings(frame, darts([12, 17, 22])) == 0
    assert count_crossings(frame, darts([2, 7, 12])) == 0


def test_closed_walk_crossings():
    _, frame, darts = grid_frame()
    # square around vertex 12 crosses the row twice
    ring = darts([6, 7, 8, 13, 18, 17, 16, 11, 6])
    assert count_crossings(frame, ring, closed=True) == 2
    above = darts([1, 2, 3, 8, 7, 6, 1])
    assert count_crossings(frame, above, closed=True) == 0
