import json

import pytest
from click.testing import CliRunner

from linklab.cli import main
from linklab.kirby import twist_configuration
from linklab.satellites import borromean


@pytest.fixture
def run():
    runner = CliRunner()

    def _run(*args):
        return runner.invoke(main, [str(a) for a in args])

    return _run


def test_theorem1_json(run):
    res = run("theorem1", "--parallels", "2,2", "--clasp-inner", "+", "--format", "json")
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["banded_lagrangian_trivial"] is True
    assert data["natural_lagrangian_trivial"] is False
    assert data["plus_verdict"]["verdict"] == "fail"
    assert data["surgery_equivalence"] == {"framings_preserved": True, "h1_equal": True}


def test_theorem1_obstructed_case_exits_one(run):
    res = run("theorem1", "--clasps", "--,--")
    assert res.exit_code == 1


def test_mu_borromean(run, tmp_path):
    path = tmp_path / "b.json"
    path.write_text(borromean().to_json())
    res = run("mu", "--in", path, "--max-length", "3")
    assert res.exit_code == 0
    values = [l for l in res.output.splitlines() if l.strip().startswith("mu(")]
    assert values[-1].split("=")[1].strip() in ("1", "-1")
    res = run("mu", "--in", path, "--homotopy")
    assert res.exit_code == 1


def test_check_fig9(run):
    assert run("check", "--system", "fig9", "--condition", "trivial-plus").exit_code == 0
    assert run("check", "--system", "fig9", "--condition", "good-block").exit_code == 1


def test_check_needs_one_source(run):
    assert run("check", "--condition", "trivial").exit_code == 2


def test_fig9_text(run):
    res = run("fig9")
    assert res.exit_code == 0
    assert "extended_form: pass" in res.output


def test_build_round_trip(run, tmp_path):
    out = tmp_path / "lag.json"
    res = run("build", "--system", "lagrangian", "--out", out)
    assert res.exit_code == 0
    assert res.output.startswith("6 components")
    assert run("mu", "--in", out, "--homotopy").exit_code == 0


def test_kirby_blow_down(run, tmp_path):
    sp = tmp_path / "sp.json"
    sp.write_text(twist_configuration(-1).to_json())
    script = tmp_path / "moves.json"
    script.write_text(json.dumps([{"move": "blow", "direction": "down", "site": "U1"}]))
    res = run("kirby", "--in", sp, "--script", script, "--format", "json")
    assert res.exit_code == 0
    assert json.loads(res.output)["framings"] == {"K1": 4}


@pytest.mark.parametrize(
    "args",
    [
        ("theorem1", "--parallels", "2"),
        ("theorem1", "--clasp-inner", "x"),
        ("theorem1", "--clasps", "-+,+"),
        ("build", "--parallels", "0,1"),
        ("mu", "--in", "/nonexistent.json"),
    ],
)
def test_invalid_input_exits_two(run, args):
    assert run(*args).exit_code == 2


def test_malformed_json_and_unknown_label(run, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert run("mu", "--in", bad).exit_code == 2
    sp = tmp_path / "sp.json"
    sp.write_text(twist_configuration().to_json())
    script = tmp_path / "m.json"
    script.write_text(json.dumps([{"move": "blow", "direction": "down", "site": "nope"}]))
    res = run("kirby", "--in", sp, "--script", script)
    assert res.exit_code == 2
    assert "nope" in res.output
