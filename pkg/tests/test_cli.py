import io
import json
import subprocess
import sys

import pytest

from teamsem import __version__
from teamsem.cli import run
from teamsem.io import read_team
from teamsem.nogo import ghz_team_minimal


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--json")
    assert code in (0, 2), err
    data = json.loads(out)
    assert data["schema"] == 1
    return code, data


@pytest.fixture
def team_path(fixtures):
    return lambda name: str(fixtures / name)


def test_eval_verdicts(team_path):
    code, out, _ = call("eval", "--team", team_path("epr.csv"), "--formula", "y0 _||_ y1 | x0 x1")
    assert (code, out.strip()) == (0, "false")
    code, data = call_json("eval", "--team", team_path("worked_example.csv"), "--formula", "y0 _||_ y1 | x0 x1")
    assert data["verdict"] == "true"
    code, data = call_json("eval", "--team", team_path("epr.csv"), "--formula", "Eh z . ( =(z) /\\ y0 _||_ y1 | x0 x1 z )", "--k-max", "1")
    assert data["verdict"] == "false"


def test_probabilistic_eval(team_path):
    code, data = call_json("eval", "--prob", "--team", team_path("epr_quantum.csv"), "--formula", "x0 _||_ x1")
    assert data["verdict"] == "true" and data["semantics"] == "probabilistic"
    code, _, err = call("eval", "--prob", "--team", team_path("epr.csv"), "--formula", "x0 _||_ x1")
    assert code == 1 and "error" in err


def test_budget_exhaustion_exits_two(team_path):
    code, out, _ = call("eval", "--team", team_path("epr.csv"), "--formula", "Eh z . ( =(z) /\\ y0 _||_ y1 | x0 x1 z )", "--budget", "3")
    assert code == 2 and "inconclusive" in out


def test_usage_and_io_errors_exit_one(team_path, tmp_path):
    assert call("eval", "--team", team_path("epr.csv"), "--formula", "y0 _||_")[0] == 1
    assert call("eval", "--team", str(tmp_path / "missing.csv"), "--formula", "x0 = x0")[0] == 1
    assert call("frobnicate")[0] == 1
    assert call("pr-probe", "--team", team_path("epr.csv"))[0] == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("x0,y0\n0\n")
    assert call("property", "--team", str(bad), "--check", "NS")[0] == 1


def test_help_and_version(capsys):
    assert run(["--version"]) == 0
    assert __version__ in capsys.readouterr().out
    assert run(["eval", "--help"]) == 0


def test_property(team_path):
    code, data = call_json("property", "--team", team_path("ns_counterexample.csv"), "--check", "NS")
    assert code == 0 and json.dumps(data).count("true") >= 1
    code, out, _ = call("property", "--team", team_path("ghz_minimal.csv"), "--check", "NS")
    assert code == 0 and "false" in out


def test_realize_and_lift_round_trip(team_path, tmp_path):
    dest = tmp_path / "sd.csv"
    assert call("realize", "--team", team_path("epr.csv"), "--mode", "sd", "--emit", str(dest))[0] == 0
    H = read_team(dest)
    assert H.hidden == ("z",)
    code, out, _ = call("property", "--team", str(dest), "--check", "SD")
    assert code == 0 and "true" in out
    wd = tmp_path / "wd.csv"
    assert call("realize", "--team", team_path("epr.csv"), "--mode", "wdzi", "--emit", str(wd))[0] == 0
    lifted = tmp_path / "lift.csv"
    assert call("lift", "--team", str(wd), "--emit", str(lifted))[0] == 0
    assert sum(read_team(lifted).weights.values()) == 1
    assert call("entropy-report", "--team", str(wd))[0] == 0


def test_entail(team_path):
    code, out, _ = call("entail", "--premises", team_path("sd_lemma_premises.txt"), "--goal", "x1 _||_ y0 | x0 z")
    assert code == 0 and "Symmetry" in out
    code, data = call_json("entail", "--premises", team_path("sd_lemma_premises.txt"), "--goal", "x1 _||_ y0", "--depth", "1")
    assert code == 2


def test_nogo_cases():
    for case in ("epr", "ghz", "hardy", "ks"):
        code, data = call_json("nogo", "--case", case)
        assert code == 0, case


def test_quantum_table():
    code, out, _ = call("quantum", "--preset", "hardy")
    assert code == 0
    for p in ("9/100", "27/200", "16/25", "9/40", "5/8", "3/20", "3/8"):
        assert p in out


def test_game(team_path, tmp_path):
    dest = tmp_path / "chsh.csv"
    code, data = call_json("game", "--spec", team_path("chsh_game.json"), "--to-team", str(dest))
    assert code == 0
    assert len(read_team(dest).rows) == 8


def test_probe_on_small_budget(team_path):
    code, data = call_json("pr-probe", "--team", team_path("worked_example.csv"), "--formula", "y0 _||_ y1 | x0 x1", "--restarts", "50", "--iterations", "100")
    assert code == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["nogo", "--case", "ghz", "--json"],
        ["quantum", "--preset", "ghz", "--json"],
        ["pr-probe", "--team", "tests/fixtures/ns_counterexample.csv", "--prop", "NS", "--restarts", "300", "--json"],
    ],
)
def test_reruns_are_byte_identical(argv):
    cmd = [sys.executable, "-m", "teamsem", *argv]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_emitted_team_reads_back(tmp_path):
    dest = tmp_path / "ghz.csv"
    assert call("nogo", "--case", "ghz", "--emit", str(dest))[0] == 0
    assert read_team(dest) == ghz_team_minimal()
