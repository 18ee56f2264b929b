"""Command-line surface: exit codes, output schemas, determinism."""

import json

import pytest

from flowerwaves.cli import run

STATE_HEADER = "branch,K,N,omega,eps,p0,mass,energy"


def out_lines(capsys):
    return capsys.readouterr().out.strip().splitlines()


def test_missing_scale_is_a_usage_error(capsys):
    assert run(["symmetric", "--n", "2"]) == 1
    assert "error" in capsys.readouterr().err


def test_conflicting_scales_are_rejected(capsys):
    code = run(["symmetric", "--n", "2", "--eps", "0.5", "--omega", "-0.25"])
    assert code == 1
    capsys.readouterr()


def test_nonnegative_frequency_is_rejected(capsys):
    assert run(["symmetric", "--n", "2", "--omega", "0.1"]) == 1
    capsys.readouterr()


def test_unreachable_scale_is_a_numerical_failure(capsys):
    assert run(["symmetric", "--n", "2", "--eps", "50"]) == 2
    assert capsys.readouterr().err != ""


def test_bad_split_count_is_a_usage_error(capsys):
    assert run(["ksplit", "--n", "3", "--k", "5", "--eps", "1.0"]) == 1
    assert "k_big" in capsys.readouterr().err


def test_unknown_command_fails(capsys):
    assert run(["frobnicate"]) == 1
    capsys.readouterr()


def test_help_exits_cleanly(capsys):
    assert run(["--help"]) == 0
    assert "symmetric" in capsys.readouterr().out


def test_symmetric_small_frequency_row(capsys):
    assert run(["symmetric", "--n", "2", "--omega", "-1e-6"]) == 0
    header, row = out_lines(capsys)
    assert header == STATE_HEADER
    cells = row.split(",")
    assert cells[0] == "symmetric"
    assert cells[1] == "2" and cells[2] == "2"
    eps, mass = float(cells[4]), float(cells[6])
    assert eps == pytest.approx(1e-3, rel=1e-12)
    assert mass / eps == pytest.approx(1.0, abs=0.05)


def test_omega_and_eps_spell_the_same_state(capsys):
    assert run(["symmetric", "--n", "3", "--eps", "0.5"]) == 0
    by_eps = capsys.readouterr().out
    assert run(["symmetric", "--n", "3", "--omega", "-0.25"]) == 0
    assert capsys.readouterr().out == by_eps


def test_ksplit_row_counts_track_the_fold(capsys):
    assert run(["ksplit", "--n", "3", "--k", "1", "--p0", "0.7115"]) == 0
    assert len(out_lines(capsys)) == 3
    assert run(["ksplit", "--n", "3", "--k", "2", "--p0", "0.7115"]) == 0
    assert len(out_lines(capsys)) == 1  # header only


def test_bifurcation_row(capsys):
    assert run(["bifurcation", "--n", "3"]) == 0
    header, row = out_lines(capsys)
    record = dict(zip(header.split(","), row.split(",")))
    assert record["N"] == "3"
    assert float(record["p_bif"]) == pytest.approx(0.711206304971, rel=1e-6)
    assert float(record["eps_star"]) == pytest.approx(0.320774113246, rel=1e-6)
    assert float(record["omega_star"]) == pytest.approx(-0.102896031729, rel=1e-6)


def test_bifurcation_absent_for_one_loop(capsys):
    assert run(["bifurcation", "--n", "1"]) == 0
    assert capsys.readouterr().out == "no bifurcation\n"
    assert run(["bifurcation", "--n", "1", "--format", "json"]) == 0
    assert capsys.readouterr().out == "null\n"


def test_laplacian_exact_table(capsys):
    assert run(["laplacian", "--n", "3", "--count", "2"]) == 0
    out = capsys.readouterr().out
    assert out == "lambda,multiplicity\n0.25,2\n1,3\n2.25,2\n4,3\n"


def test_json_mirrors_csv(capsys):
    assert run(["laplacian", "--n", "2", "--count", "2", "--format", "json"]) == 0
    records = json.loads(capsys.readouterr().out)
    assert records == [
        {"lambda": 0.25, "multiplicity": 1},
        {"lambda": 1.0, "multiplicity": 2},
        {"lambda": 2.25, "multiplicity": 1},
        {"lambda": 4.0, "multiplicity": 2},
    ]


def test_spectrum_schema(capsys):
    assert run(["spectrum", "--n", "2", "--eps", "0.4"]) == 0
    lines = out_lines(capsys)
    assert lines[0] == "kind,index,lambda,multiplicity"
    kinds = {line.split(",")[0] for line in lines[1:]}
    assert "gamma" in kinds
    assert kinds <= {"gamma", "beta_even", "beta_odd"}


def test_profile_edges_meet_at_the_vertex(capsys):
    assert run(["profile", "--n", "2", "--eps", "0.8", "--samples", "41"]) == 0
    lines = out_lines(capsys)
    assert lines[0] == "edge_id,z,u"
    rows = [line.split(",") for line in lines[1:]]
    by_edge = {}
    for edge_id, z, u in rows:
        by_edge.setdefault(edge_id, []).append((float(z), float(u)))
    assert set(by_edge) == {"0", "1", "2"}
    vertex_u = by_edge["0"][0][1]
    for edge_id in ("1", "2"):
        assert by_edge[edge_id][0][1] == pytest.approx(vertex_u, rel=1e-9)
        assert by_edge[edge_id][-1][1] == pytest.approx(vertex_u, rel=1e-9)


def test_diagram_reruns_are_byte_identical(tmp_path):
    paths = [tmp_path / name for name in ("a.csv", "b.csv")]
    for path in paths:
        code = run(["diagram", "--n", "2", "--points", "10", "--out", str(path)])
        assert code == 0
    first, second = (p.read_bytes() for p in paths)
    assert first == second
    lines = first.decode().splitlines()
    assert lines[0] == STATE_HEADER
    assert len(lines) > 10
