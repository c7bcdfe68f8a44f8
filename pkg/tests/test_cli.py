import json
import shutil
import subprocess
import sys

import pytest

from altkron.cli import main, parse_element, parse_field, InputError
from altkron.constructions import cay_bimodule, split_null_extension
from altkron.samples import m2, truncated_poly
from altkron.scalars import GF, QQ

from fixtures import corrupted


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


@pytest.fixture
def octo(tmp_path, capsys):
    code, rep = run(capsys, "construct", "octonion", "--out", str(tmp_path))
    assert code == 0
    return tmp_path / "octonion.algebra.json"


def test_construct_and_coordinatize_octonions(octo, tmp_path, capsys):
    doc = json.loads(octo.read_text())
    assert doc["embedding"]["format"] == 1 and doc["provenance"]["kind"] == "octonion"
    code, rep = run(capsys, "coordinatize", str(octo), "--out", str(tmp_path / "rec"))
    assert code == 0 and rep["pass"]
    assert rep["dims"]["V"] == 2 and rep["dims"]["Z_a"] == 1
    assert (tmp_path / "rec" / "recovered.spec.json").exists()
    assert rep["inputs"][str(octo)]
    # the recovered triple rebuilds through the kron constructor
    code, rep = run(capsys, "construct", "kron", "--spec", str(tmp_path / "rec" / "recovered.spec.json"))
    assert code == 0 and rep["dim"] == 8


def test_octonion_criterion_reported(capsys):
    code, rep = run(capsys, "construct", "octonion", "--field", "GF(3)")
    assert code == 0
    assert rep["octonion_criterion"]["is_octonion"] is True
    assert rep["algebra"]["field"]


def test_check_identities(octo, capsys):
    code, rep = run(capsys, "check", str(octo), "--identity", "moufang_central", "--identity", "e16")
    assert code == 0 and rep["pass"]
    names = [c["name"] for c in rep["checks"]]
    assert names[0] == "alternative" and len(names) == 3


def test_check_detects_corruption(tmp_path, capsys):
    bad = corrupted(split_null_extension(m2(), *cay_bimodule()), 4, 5, {0: 1})
    path = tmp_path / "bad.json"
    path.write_text(bad.dumps())
    code, rep = run(capsys, "check", str(path), "--identity", "moufang_central")
    assert code == 1 and not rep["pass"]
    failing = [c for c in rep["checks"] if not c["pass"]]
    assert failing and all(c["witness"] is not None for c in failing)


def test_random_mode_needs_seed(octo, capsys):
    code, _ = run(capsys, "check", str(octo), "--identity", "moufang_central", "--mode", "random:5")
    assert code == 2
    code, rep = run(capsys, "check", str(octo), "--identity", "moufang_central", "--mode", "random:5:9")
    assert code == 0 and rep["seed"] == 9


def test_reports_are_deterministic(octo, capsys):
    argv = ["check", str(octo), "--identity", "acirc_left", "--mode", "random:4:1"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_matrix_algebra_coordinates(tmp_path, capsys):
    code, _ = run(capsys, "construct", "nullext", "--base", "m2", "--bimodule", "reg", "--out", str(tmp_path))
    assert code == 0
    A = m2()
    doc = A.to_json()
    doc["embedding"] = {"format": 1, "E11": [[0, "1"]], "E12": [[1, "1"]], "E21": [[2, "1"]], "E22": [[3, "1"]]}
    path = tmp_path / "m2.json"
    path.write_text(json.dumps(doc))
    code, rep = run(capsys, "coordinatize", str(path))
    assert code == 0 and rep["dims"]["V"] == 0


def test_bogus_units_fail(octo, tmp_path, capsys):
    doc = json.loads(octo.read_text())
    doc["embedding"]["E12"], doc["embedding"]["E21"] = doc["embedding"]["E21"], doc["embedding"]["E12"]
    path = tmp_path / "swapped.json"
    path.write_text(json.dumps(doc))
    code, rep = run(capsys, "coordinatize", str(path))
    assert code == 1 and rep["stage"] == "input"


def test_malformed_inputs_exit_two(octo, tmp_path, capsys):
    broken = json.loads(octo.read_text())
    broken["table"][0][0] = [[99, "1"]]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(broken))
    assert run(capsys, "check", str(path))[0] == 2
    (tmp_path / "junk.json").write_text("{")
    assert run(capsys, "check", str(tmp_path / "junk.json"))[0] == 2
    assert run(capsys, "check", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "check", str(octo), "--identity", "nonsense")[0] == 2
    assert run(capsys, "construct", "cd", "--base", "dual")[0] == 2
    assert run(capsys, "construct", "cd", "--base", "nowhere", "--alpha", "1")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_precondition_failures_exit_one(capsys):
    code, rep = run(capsys, "construct", "ncd", "--base", "upper_triangular", "--alpha", "e12")
    assert code == 1 and "central" in rep["error"]
    assert run(capsys, "construct", "cd", "--base", "grassmann2", "--alpha", "1")[0] == 1


def test_doublings_from_cli(capsys):
    code, rep = run(capsys, "construct", "cd", "--base", "dual", "--alpha", "t")
    assert code == 0 and rep["dim"] == 16
    code, rep = run(capsys, "construct", "ncd", "--base", "grassmann2", "--alpha", "e1e2", "--seed", "3")
    assert code == 0 and rep["seed"] == 3
    code, rep = run(capsys, "construct", "threegen", "--base", "truncated:3", "--a", "t", "--b", "0,0,1")
    assert code == 0 and rep["octonion_criterion"]["is_octonion"] is False


def test_invalid_spec_needs_force(tmp_path, capsys):
    from altkron.coordinatized import BimoduleV, CoeffRing, KronSpec, SkewForm
    from altkron.linalg import LinearMap
    from altkron.samples import ground

    B = CoeffRing(ground())
    spec = KronSpec(B, BimoduleV(B, 3, [LinearMap.identity(QQ, 3)]), SkewForm(B, [[{}, {0: 1}, {}], [{0: -1}, {}, {}], [{}, {}, {}]]))
    path = tmp_path / "bad.spec.json"
    path.write_text(spec.dumps())
    code, _ = run(capsys, "construct", "kron", "--spec", str(path))
    assert code == 1
    code, rep = run(capsys, "construct", "kron", "--spec", str(path), "--force")
    assert code == 1 and rep["checks"][0]["name"] == "alternative" and not rep["pass"]


def test_plucker_commands(tmp_path, capsys):
    code, rep = run(capsys, "plucker", "grassmann", "--n", "5", "--independence", "--seed", "1", "--out", str(tmp_path))
    assert code == 0 and rep["pass"]
    assert run(capsys, "plucker", "grassmann", "--n", "4", "--convention", "printed")[0] == 1
    fam = tmp_path / "grassmann5.json"
    assert run(capsys, "plucker", "check", str(fam))[0] == 0
    (tmp_path / "bad.json").write_text(json.dumps({"format": 1, "n": 4, "entries": {"1,2": 1, "3,4": 1}}))
    code, rep = run(capsys, "plucker", "check", str(tmp_path / "bad.json"))
    assert code == 1 and rep["checks"][0]["witness"] == [1, 2, 3, 4]
    assert run(capsys, "plucker", "grassmann", "--n", "5", "--independence")[0] == 2
    assert run(capsys, "plucker", "grassmann", "--n", "1")[0] == 2


def test_parse_helpers():
    assert parse_field("GF(7)") == GF(7) and parse_field("q") == QQ
    with pytest.raises(InputError):
        parse_field("R")
    A = truncated_poly(3)
    assert parse_element("1 - 2*t", A) == {0: 1, 1: -2}
    assert parse_element("0,1/2,0", A) == {1: QQ.parse("1/2")}
    with pytest.raises(InputError):
        parse_element("s", A)
    with pytest.raises(InputError):
        parse_element("1,2", A)


@pytest.mark.skipif(shutil.which("altkron") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["altkron", "plucker", "grassmann", "--n", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["pass"]
    proc = subprocess.run([sys.executable, "-m", "altkron.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()
