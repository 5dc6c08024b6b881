import json
import subprocess
import sys

import pytest

from conftest import BROKEN_FIXTURES
from trisasaki import data_path
from trisasaki.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# -- verify ----------------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["h1.json", "t3.json", "su2.json", "h1-conjugated.json"])
def test_verify_valid_fixtures(capsys, name):
    code, out, _ = run(capsys, "verify", data_path(name))
    assert code == 0
    assert "overall: pass" in out


def test_verify_h1_reports_inferred_parameters(capsys, tmp_path):
    report = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", data_path("h1.json"), "--json", report)
    assert code == 0
    assert "alpha = 1/2, delta = 0" in out
    doc = json.loads(report.read_text())
    assert doc["overall"] == "pass"
    assert doc["inferred_parameters"] == {"alpha": "1/2", "delta": "0"}
    assert all(c["status"] == "pass" for c in doc["checks"])


def test_human_report_lines_carry_formulas(capsys):
    _, out, _ = run(capsys, "verify", data_path("h1.json"))
    line = next(x for x in out.splitlines() if "3ad.structure_equation[1]" in x)
    assert "dη_i = 2αΦ_i + 2(α-δ)η_j∧η_k" in line


@pytest.mark.parametrize("name,check", sorted(BROKEN_FIXTURES.items()))
def test_verify_broken_fixtures(capsys, tmp_path, name, check):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", data_path(name), "--json", report)
    assert code == 1
    first_fail = next(x for x in out.splitlines() if x.startswith("FAIL"))
    assert check in first_fail
    doc = json.loads(report.read_text())
    failing = [c for c in doc["checks"] if c["status"] == "fail"]
    assert failing[0]["name"] == check
    assert doc["overall"] == "fail"


def test_broken_constant_names_witness(capsys):
    _, out, _ = run(capsys, "verify", data_path("h1-broken.json"))
    assert "at (e4, e5)" in out


def test_verify_float_mode(capsys):
    code, _, _ = run(capsys, "verify", data_path("h1-conjugated.json"), "--mode", "float",
                     "--tol", "1e-10")
    assert code == 0


def test_verify_degenerate_only(capsys):
    assert run(capsys, "verify", data_path("h1.json"), "--degenerate-only")[0] == 0
    code, out, _ = run(capsys, "verify", data_path("su2.json"), "--degenerate-only")
    assert code == 1
    assert "degenerate.delta" in out


def test_parse_error_reports_location(capsys, tmp_path):
    bad = json.loads(data_path("h1.json").read_text())
    bad["structure_constants"][2]["value"] = "one"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, _, err = run(capsys, "verify", path)
    assert code == 2
    assert "structure_constants.2.value" in err


def test_invalid_json_and_missing_file(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{nope")
    code, _, err = run(capsys, "verify", path)
    assert code == 2 and "line 1" in err
    assert run(capsys, "verify", tmp_path / "missing.json")[0] == 2


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify"])
    assert info.value.code == 2


# -- generate -----------------------------------------------------------------------------

def test_generate_heisenberg(capsys, tmp_path):
    path = tmp_path / "h.json"
    assert run(capsys, "generate", "heisenberg", "--n", "1", "-o", path)[0] == 0
    doc = json.loads(path.read_text())
    assert doc["dim"] == 7
    assert len(doc["structure_constants"]) == 6
    assert run(capsys, "verify", path)[0] == 0


def test_generate_t3_to_stdout(capsys):
    code, out, _ = run(capsys, "generate", "t3")
    assert code == 0
    doc = json.loads(out)
    assert doc["dim"] == 3 and doc["structure_constants"] == []


def test_generate_flat_bw_half_matches_heisenberg(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "generate", "heisenberg", "--n", "1", "-o", a)
    run(capsys, "generate", "flat-bw", "--n", "1", "--alpha", "1/2", "-o", b)
    assert json.loads(a.read_text()) == json.loads(b.read_text())


@pytest.mark.parametrize("kind,n", [("heisenberg", 1), ("heisenberg", 2), ("t3", 1),
                                    ("su2", 1), ("flat-bw", 1), ("flat-bw", 2)])
def test_every_generator_output_verifies(capsys, tmp_path, kind, n):
    path = tmp_path / "g.json"
    assert run(capsys, "generate", kind, "--n", n, "-o", path)[0] == 0
    assert run(capsys, "verify", path)[0] == 0


@pytest.mark.parametrize("argv", [["heisenberg", "--n", "0"], ["flat-bw", "--alpha", "0"],
                                  ["flat-bw", "--alpha", "abc"]])
def test_generate_invalid_parameters(capsys, argv):
    assert run(capsys, "generate", *argv)[0] == 2


# -- deform -----------------------------------------------------------------------------------

def test_deform_lambda_two(capsys, tmp_path):
    out = tmp_path / "d.json"
    code, _, _ = run(capsys, "deform", data_path("h1.json"), "--a", "1", "--b", "3", "--c", "2",
                     "-o", out)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["alpha"] == "1" and doc["delta"] == "0"
    assert run(capsys, "verify", out)[0] == 0


def test_deform_identity_keeps_values(capsys, tmp_path):
    out = tmp_path / "d.json"
    run(capsys, "deform", data_path("h1.json"), "--a", "1", "--b", "0", "--c", "1", "-o", out)
    new = json.loads(out.read_text())
    old = json.loads(data_path("h1.json").read_text())
    for key in ("structure_constants", "metric", "xi", "eta", "phi", "basis_labels"):
        assert new[key] == old[key]


def test_deform_constraint_violation(capsys):
    code, _, err = run(capsys, "deform", data_path("h1.json"), "--a", "1", "--b", "1", "--c", "1")
    assert code == 2
    assert "a + b = c^2" in err


def test_deform_rejects_invalid_input(capsys):
    code, _, _ = run(capsys, "deform", data_path("h1-broken.json"), "--a", "1", "--b", "3",
                     "--c", "2")
    assert code == 1


# -- infer --------------------------------------------------------------------------------------

def test_infer_outputs(capsys):
    code, out, _ = run(capsys, "infer", data_path("h1.json"))
    assert code == 0 and out.strip() == "alpha = 1/2, delta = 0"
    code, out, _ = run(capsys, "infer", data_path("su2.json"))
    assert code == 0 and "delta = 1" in out


@pytest.mark.parametrize("name", sorted(BROKEN_FIXTURES))
def test_infer_broken(capsys, name):
    code, out, _ = run(capsys, "infer", data_path(name))
    if name == "h1-wrong-alpha.json":
        # only the declared alpha is wrong, the structure itself is fine
        assert code == 0
        return
    assert code == 1
    assert "not 3-(α,δ)-Sasakian" in out


# -- isomorphism -----------------------------------------------------------------------------------

def test_isomorphism_h1_identity(capsys, tmp_path):
    out = tmp_path / "psi.json"
    code, _, _ = run(capsys, "isomorphism", data_path("h1.json"), "-o", out)
    assert code == 0
    doc = json.loads(out.read_text())
    psi = doc["psi"]
    assert psi == [[1.0 if i == j else 0.0 for j in range(7)] for i in range(7)]
    assert doc["report"]["overall"] == "pass"


def test_isomorphism_conjugated_fixture(capsys, tmp_path):
    out = tmp_path / "psi.json"
    code, stdout, _ = run(capsys, "isomorphism", data_path("h1-conjugated.json"), "-o", out)
    assert code == 0
    defect = float(stdout.split("max defect:")[1])
    assert defect <= 1e-8


def test_isomorphism_solvable_counterexample(capsys):
    code, _, err = run(capsys, "isomorphism", data_path("solvable-counterexample.json"))
    assert code == 1
    assert "not nilpotent" in err


def test_isomorphism_after_cli_deformation(capsys, tmp_path):
    d = tmp_path / "d.json"
    run(capsys, "deform", data_path("h1.json"), "--a", "1", "--b", "8", "--c", "3", "-o", d)
    out = tmp_path / "psi.json"
    assert run(capsys, "isomorphism", d, "-o", out)[0] == 0
    assert "deformation" in json.loads(out.read_text())


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "trisasaki", "infer", str(data_path("h1.json"))],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "alpha = 1/2, delta = 0"
