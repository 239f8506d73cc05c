import json

import pytest
from click.testing import CliRunner

from tsde.cli import main
from tsde.cli_io import fixture_dir, validate

K33 = "g{D=3,k=3}[1,2,3|3,1,2|2,3,1]"


def run(*args, **kw):
    return CliRunner().invoke(main, list(args), **kw)


def test_census_text_and_json():
    r = run("census", "--rank", "3", "--max-vertices", "8", "--connected")
    assert r.exit_code == 0 and r.output.strip() == "1,3,7,26"
    r = run("census", "--rank", "4", "--max-vertices", "4", "--format", "json")
    d = json.loads(r.output)
    validate(d, "census")
    assert d["counts"] == {"2": 1, "4": 8}


def test_aut_and_degree():
    assert run("aut", K33).output.strip() == "3"
    assert run("degree", K33).output.strip() == "1"
    d = json.loads(run("aut", "g{D=3,k=2}[1,2|2,1|1,2]", "--format", "json").output)
    assert d["aut_order"] == 2 and d["connected"]


def test_degree_of_disconnected_graph_fails_cleanly():
    r = run("degree", "g{D=3,k=1}[1|1|1]+g{D=3,k=1}[1|1|1]")
    assert r.exit_code == 1
    assert json.loads(r.stderr)["error"] == "ValueError"


@pytest.mark.parametrize("args", [["aut", "g{D=3,k=2}[1,1|1,2|1,2]"], ["census", "--rank", "9"],
                                  ["solve-simple", "--m2", "-1"], ["yterm", "--order", "3"],
                                  ["gw-census", "--points", "6"]])
def test_usage_errors_exit_2(args):
    assert run(*args).exit_code == 2


def test_boundary_reads_stdin():
    fig = json.loads((fixture_dir() / "fig1.json").read_text())
    panel = next(g for g in fig["graphs"] if g["panel"] == "e")
    r = run("boundary", "-", "--model", "melonic-quartic", input=panel["open"])
    d = json.loads(r.output)
    assert d["boundary"] == "g{D=3,k=3}[1,2,3|2,3,1|3,1,2]"
    assert d["feynman"] is True


@pytest.mark.parametrize("fmt", ["json", "text", "latex"])
def test_sde_formats(fmt):
    r = run("sde", "--graph", "g{D=3,k=1}[1|1|1]", "--format", fmt)
    assert r.exit_code == 0 and r.output
    if fmt == "json":
        validate(json.loads(r.output), "equation")


def test_sde_is_deterministic():
    a = run("sde", "--graph", K33).output
    assert a == run("sde", "--graph", K33).output


def test_yterm():
    d = json.loads(run("yterm", "--order", "4").output)
    assert d["order"] == 4 and d["targets"]


def test_solve_simple(tmp_path):
    out = tmp_path / "sol.json"
    r = run("solve-simple", "--cutoff", "1", "--kmax", "2", "--out", str(out))
    assert r.exit_code == 0
    d = json.loads(out.read_text())
    validate(d, "solve")
    assert [o["points"] for o in d["orders"]] == [2, 4]
    assert all(o["residual"] <= 1e-10 for o in d["orders"])


def test_solve_simple_nonconvergence_exits_1():
    r = run("solve-simple", "--cutoff", "1", "--max-iter", "2")
    assert r.exit_code == 1
    assert json.loads(r.stderr)["error"] == "ConvergenceError"


def test_gw_census():
    d = json.loads(run("gw-census", "--points", "2").output)
    assert d["count"] == 4
    assert len(run("gw-census", "--points", "4", "--format", "text").output.splitlines()) == 50


def test_verify_golden():
    r = run("verify-golden")
    assert r.exit_code == 0
    assert "FAIL" not in r.output
