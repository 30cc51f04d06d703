from __future__ import annotations

import io
import json

import numpy as np
import pytest

from corpus import corpus
from planarvit.errors import AsymmetricAdjacency, BadTerminals, CannotSatisfy, DuplicateEdge, ParseError
from planarvit.fixtures import FIXTURES, fix_c4, fix_diamond, fix_edge, fix_grid3
from planarvit.planar_core import trace_faces
from planarvit.toolkit.bench import COLUMNS, fitted_slope, run_bench, write_csv
from planarvit.toolkit.cli import main
from planarvit.toolkit.generators import generate_instance, grid_minus
from planarvit.toolkit.instance_io import parse_instance, read_instance, serialize_instance, write_instance


def same_graph(a, b) -> bool:
    return a.n == b.n and a.s == b.s and a.t == b.t and a.rotations() == b.rotations()


# --------------------------------------------------------------------------
# instance files
# --------------------------------------------------------------------------

def test_c4_file():
    g = parse_instance("pvit 1 4 4 0 2\n0: 1 3\n1: 0 2\n2: 1 3\n3: 2 0\n")
    assert g.n == 4 and g.m == 4
    assert same_graph(g, fix_c4())


def test_comments_and_blank_lines():
    text = "# leading comment\n\npvit 1 2 1 0 1\n# between\n0: 1\n\n1: 0\n"
    assert same_graph(parse_instance(text), fix_edge())


def test_equal_terminals():
    with pytest.raises(BadTerminals):
        parse_instance("pvit 1 2 1 1 1\n0: 1\n1: 0\n")


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_round_trip(name):
    g = FIXTURES[name]()
    text = serialize_instance(g, ["fixture " + name])
    assert same_graph(parse_instance(text), g)
    assert serialize_instance(parse_instance(text), ["fixture " + name]) == text


def test_generated_round_trip():
    for g in corpus(100, 99, 4, 200):
        assert same_graph(parse_instance(serialize_instance(g)), g)


def test_file_round_trip(tmp_path):
    g = fix_grid3()
    path = tmp_path / "g.pvit"
    write_instance(g, str(path), ["grid 3x3"])
    assert same_graph(read_instance(str(path)), g)


@pytest.mark.parametrize("text, line", [
    ("pvit 1 2 1 0\n0: 1\n1: 0\n", 1),
    ("pvit 2 2 1 0 1\n0: 1\n1: 0\n", 1),
    ("pvit 1 2 1 0 1\n0: 1\n1 0\n", 3),
    ("pvit 1 2 1 0 1\n0: 1\n1: x\n", 3),
    ("pvit 1 2 1 0 1\n0: 1\n0: 1\n", 3),
    ("pvit 1 2 1 0 1\n0: 1\n5: 0\n", 3),
    ("pvit 1 2 1 0 1\n0: 1\n1: 1\n", 3),
    ("pvit 1 3 2 0 1\n0: 1\n1: 0\n", 1),
    ("pvit 1 2 2 0 1\n0: 1\n1: 0\n", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_asymmetric_file():
    with pytest.raises(AsymmetricAdjacency) as info:
        parse_instance("pvit 1 3 2 0 2\n0: 1 2\n1: 0\n2: 1\n")
    assert "line" in str(info.value)


def test_duplicate_neighbour_file():
    with pytest.raises(DuplicateEdge):
        parse_instance("pvit 1 2 1 0 1\n0: 1 1\n1: 0 0\n")


# --------------------------------------------------------------------------
# generators
# --------------------------------------------------------------------------

def test_grid_3x3_is_fixture():
    assert same_graph(generate_instance("grid", rows=3, cols=3), fix_grid3())


def test_grid_1x2_is_edge():
    assert same_graph(generate_instance("grid", rows=1, cols=2), fix_edge())


def test_grid_minus_example():
    g = generate_instance("grid-minus", 1, rows=10, cols=10, deletions=20)
    assert g.m == 180 - 20
    h = parse_instance(serialize_instance(g))
    assert h.n - h.m + trace_faces(h).count == 2


def test_generators_deterministic():
    for kind, params in (("grid-minus", dict(rows=6, cols=7, deletions=9)),
                         ("triangulated-disk", dict(n=50))):
        a = generate_instance(kind, 4, **params)
        b = generate_instance(kind, 4, **params)
        c = generate_instance(kind, 5, **params)
        assert same_graph(a, b)
        assert not same_graph(a, c)


def test_generators_pass_euler():
    for g in corpus(60, 7, 4, 300):
        assert g.n - g.m + trace_faces(g).count == 2


def test_too_many_deletions():
    with pytest.raises(CannotSatisfy):
        grid_minus(3, 3, 5)


def test_disk_terminals_far_apart():
    g = generate_instance("triangulated-disk", 2, n=80)
    from planarvit import kernels

    dist = kernels.bfs_csr(g.indptr, g.nbrs, g.s)
    assert dist[g.t] == dist.max()


# --------------------------------------------------------------------------
# command line
# --------------------------------------------------------------------------

@pytest.fixture
def diamond_file(tmp_path):
    path = tmp_path / "diamond.pvit"
    write_instance(fix_diamond(), str(path))
    return str(path)


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_diamond(diamond_file, capsys):
    code, out, _ = run_cli(["compute", "-i", diamond_file], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "MF 2"
    assert [line.split()[-1] for line in lines[1:]] == ["1", "1", "0", "1", "1"]
    assert lines[1:] == ["0 1 1", "0 2 1", "1 2 0", "1 3 1", "2 3 1"]


def test_compute_deterministic(diamond_file, capsys):
    first = run_cli(["compute", "-i", diamond_file], capsys)[1]
    second = run_cli(["compute", "-i", diamond_file], capsys)[1]
    assert first == second


def test_compute_json_with_oracle(tmp_path, capsys):
    path = tmp_path / "g.pvit"
    write_instance(fix_grid3(), str(path))
    code, out, _ = run_cli(["compute", "-i", str(path), "--check-oracle", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["mf"] == 2 and doc["oracle"]["ok"]
    assert sum(e["vit"] for e in doc["edges"]) == 4


def test_compute_output_file(diamond_file, tmp_path, capsys):
    out = tmp_path / "out.txt"
    code, stdout, _ = run_cli(["compute", "-i", diamond_file, "-o", str(out)], capsys)
    assert code == 0 and stdout == ""
    assert out.read_text().startswith("MF 2\n")


def test_corrupt_file_exit_1(tmp_path, capsys):
    path = tmp_path / "bad.pvit"
    path.write_text("pvit 1 2 1 0 1\n0: 1\n1: zz\n")
    code, _, err = run_cli(["compute", "-i", str(path)], capsys)
    assert code == 1
    assert "line 3" in err


def test_missing_file_exit_1(tmp_path, capsys):
    code, _, _ = run_cli(["compute", "-i", str(tmp_path / "nope.pvit")], capsys)
    assert code == 1


def test_oracle_mismatch_exit_3(diamond_file, capsys, monkeypatch):
    import planarvit.vitality_engine as ve
    from planarvit.report import VitalityReport

    real = ve.compute_vitality

    def broken(g):
        rep = real(g)
        vit = rep.vit.copy()
        vit[2] ^= 1
        return VitalityReport(rep.mf, vit, rep.provenance)

    monkeypatch.setattr(ve, "compute_vitality", broken)
    code, _, err = run_cli(["compute", "-i", diamond_file, "--check-oracle"], capsys)
    assert code == 3
    assert "mismatch" in err


def test_invariant_failure_exit_2(diamond_file, capsys, monkeypatch):
    import planarvit.vitality_engine as ve
    from planarvit.errors import SliceInvariantViolation

    def boom(g):
        raise SliceInvariantViolation("forced")

    monkeypatch.setattr(ve, "compute_vitality", boom)
    code, _, err = run_cli(["compute", "-i", diamond_file], capsys)
    assert code == 2 and "forced" in err


def test_gen_then_compute(tmp_path, capsys):
    path = tmp_path / "g.pvit"
    code, _, _ = run_cli(["gen", "--kind", "grid-minus", "--rows", "6", "--cols", "6",
                          "--deletions", "5", "--seed", "3", "-o", str(path)], capsys)
    assert code == 0
    text = path.read_text()
    assert text.startswith("pvit 1 36 55 0 35\n# kind=grid-minus seed=3")
    code, _, _ = run_cli(["compute", "-i", str(path), "--check-oracle"], capsys)
    assert code == 0


def test_gen_missing_parameters(capsys):
    code, _, err = run_cli(["gen", "--kind", "grid"], capsys)
    assert code == 1 and "--rows" in err


def test_validate_command(diamond_file, capsys):
    code, out, _ = run_cli(["validate", "-i", diamond_file], capsys)
    assert code == 0
    assert "single_touch pass" in out and "MF 2" in out


# --------------------------------------------------------------------------
# benchmark harness
# --------------------------------------------------------------------------

def test_bench_single_size():
    recs = run_bench("grid", [400], reps=1)
    assert len(recs) == 1
    r = recs[0]
    assert r.n == 400 and r.MF == 2 and r.k >= 1
    phases = r.t_dual + r.t_cut + r.t_pairs + r.t_family + r.t_slices + r.t_tests
    assert phases <= r.t_total + 1e-9
    assert fitted_slope(recs) is None
    buf = io.StringIO()
    write_csv(recs, buf)
    header, row = buf.getvalue().splitlines()
    assert header == ",".join(COLUMNS)
    assert len(row.split(",")) == len(COLUMNS)


def test_bench_cli(tmp_path, capsys):
    out = tmp_path / "b.csv"
    code, _, err = run_cli(["bench", "--kind", "triangulated-disk", "--sizes", "2e2,4e2",
                            "--reps", "2", "--csv", str(out)], capsys)
    assert code == 0
    rows = out.read_text().splitlines()
    assert len(rows) == 5
    assert "slope" in err and "ratio" in err
    ratios = [float(x) for x in err.split("ratio")[1].split()]
    assert ratios and all(x <= 10 for x in ratios)
