import json
import subprocess
import sys

import pytest

from basicvar.cli import main

from conftest import GRID_8

D8 = "(4,1),(7,2),(8,3),(5,4)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_diagram_text(capsys):
    code, out, err = run(capsys, "diagram", "--n", "8", "--d", D8)
    assert code == 0 and not err
    lines = out.splitlines()
    assert lines[:8] == GRID_8
    assert lines[8] == "C(D) = (4,1),(7,2),(8,3),(8,4),(5,4)"


def test_diagram_steps(capsys):
    code, out, _ = run(capsys, "diagram", "--n", "4", "--d", "(3,1),(4,2)", "--steps")
    assert code == 0 and out.startswith("step 0:")


def test_wd(capsys):
    code, out, _ = run(capsys, "wd", "--n", "4", "--d", "(3,1),(4,2)")
    assert code == 0
    assert out.splitlines()[0] == "3 4 2 1"
    assert "homogeneous=true" in out


def test_factor(capsys):
    code, out, _ = run(capsys, "factor", "--n", "4", "--d", "(3,1),(4,2)", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["equal"] and data["reflections"] == [[3, 1], [4, 2], [4, 3]]


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "--n", "8", "--d", D8)
    assert code == 0
    assert "F(8,4) = x[8,4]*x[4,1] + x[8,3]*x[3,1]" in out.splitlines()


def test_invariants_levels(capsys):
    code, out, _ = run(capsys, "invariants", "--n", "4", "--d", "(3,1),(4,2)",
                       "--phi", "(3,1)=2,(4,2)=-1/2", "--format", "json")
    data = json.loads(out)
    assert data["levels"] == {"(3,1)": "2", "(4,2)": "-1/2"}


def test_relations(capsys):
    code, out, _ = run(capsys, "relations", "--n", "4", "--d", "(3,1),(4,2)")
    assert code == 0 and "x[4,1] = 0" in out and "x[3,1] != 0" in out


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "3")
    assert code == 0
    assert "basic subsets: 5" in out and "homogeneous elements: 5" in out
    data = json.loads(run(capsys, "enumerate", "--n", "3", "--format", "json")[1])
    assert data["basic_subsets"] == data["homogeneous_elements"] == 5


def test_verify_report(capsys):
    code, out, _ = run(capsys, "verify", "--n", "7", "--d", "(4,1),(5,2),(6,3),(7,5)",
                       "--trials", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert set(data) >= {"D", "extension", "generators", "cell_relations", "invariance", "jacobian_rank"}
    assert data["invariance"]["failures"] == [] and data["jacobian_rank"] == 6


def test_json_is_deterministic(capsys):
    args = ["verify", "--n", "5", "--d", "(3,1),(5,2)", "--trials", "2", "--seed", "4", "--format", "json"]
    first = run(capsys, *args)[1]
    assert run(capsys, *args)[1] == first
    json.loads(first)


@pytest.mark.parametrize("argv", [
    ["wd", "--n", "4", "--d", "(3,1),(3,2)"],
    ["wd", "--n", "4", "--d", "(5,1)"],
    ["verify", "--n", "4", "--d", "(3,1)", "--phi", "(3,1)=0"],
    ["verify", "--n", "4", "--d", "(3,1)", "--phi", "(4,1)=1"],
    ["verify", "--n", "4", "--d", "(3,1)", "--phi", "(3,1)=abc"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and not out and err.startswith("basicvar: error:")


def test_verification_failure_exit_code(capsys, monkeypatch):
    import basicvar.cli as cli
    from basicvar.invariants import InvarianceReport

    def broken(D, **kwargs):
        return InvarianceReport(D, 1, failures=[{"trial": 0, "check": "forced"}])

    monkeypatch.setattr(cli, "verify_invariance", broken)
    code, out, _ = run(capsys, "verify", "--n", "3", "--d", "(3,1)", "--trials", "1")
    assert code == 1
    assert json.loads(out)["invariance"]["failures"][0]["check"] == "forced"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "basicvar", "wd", "--n", "3", "--d", "(3,1)"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("3 2 1")
