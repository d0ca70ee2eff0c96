import json
import subprocess
import sys

import pytest

from kirwanres import cli, io, load_fixture
from kirwanres.io import fixture_path

CP1 = str(fixture_path("cp1"))
CP2 = str(fixture_path("cp2"))
CHAIN = str(fixture_path("cp1xcp1_stages"))


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if "--human" not in argv else out)


def test_validate_fixture(capsys):
    code, rep = run(capsys, "validate", CP1)
    assert code == 0 and rep["payload"]["ok"]


def test_validate_nonregular(tmp_path, capsys):
    data = json.loads(open(CP1).read())
    data["points"][0]["moment"] = "0"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, rep = run(capsys, "validate", str(path))
    assert code == 2 and rep["payload"]["error"] == "NonRegularValue"


def test_validate_malformed(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, rep = run(capsys, "validate", str(path))
    assert code == 2 and rep["payload"]["error"] == "SchemaError"


def test_schema_error_has_path(tmp_path, capsys):
    data = json.loads(open(CP1).read())
    data["points"][1]["weights"] = [["1", "2"]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, rep = run(capsys, "validate", str(path))
    assert code == 2 and "points[1].weights[0]" in rep["payload"]["message"]


def test_validate_rejects_fake_class(tmp_path, capsys):
    data = json.loads(open(CP1).read())
    data["classes"]["fake"] = {"degree": 0, "restrictions": {"p-": "1", "p+": "0"}}
    path = tmp_path / "fake.json"
    path.write_text(json.dumps(data))
    code, rep = run(capsys, "validate", str(path))
    assert code == 2 and not rep["payload"]["ok"]


@pytest.mark.parametrize("expr, value", [("1/(X+2*Y1)", "1"), ("1/X^2", "0")])
def test_residue(capsys, expr, value):
    code, rep = run(capsys, "residue", expr)
    assert code == 0
    assert rep["payload"]["res_plus"] == rep["payload"]["res_gk"] == value


def test_residue_parse_error(capsys):
    code, rep = run(capsys, "residue", "1/(X+")
    assert code == 2 and rep["payload"]["error"] == "ParseError"


def test_pairing(capsys):
    code, rep = run(capsys, "pairing", CP1, "one", "one")
    assert code == 0 and rep["payload"]["value"] == "-1"
    _, a = run(capsys, "pairing", CP2, "h", "alpha_plus[p1]")
    _, b = run(capsys, "pairing", CP2, "alpha_plus[p1]", "h")
    assert a["payload"]["value"] == b["payload"]["value"]


def test_pairing_warning_on_fake_class(tmp_path, capsys):
    data = json.loads(open(CP1).read())
    data["classes"]["fake"] = {"degree": 0, "restrictions": {"p-": "1", "p+": "0"}}
    path = tmp_path / "fake.json"
    path.write_text(json.dumps(data))
    code, rep = run(capsys, "pairing", str(path), "fake", "one")
    assert code == 2 and "warning" in rep["payload"]
    assert rep["payload"]["value"] == "0"


def test_kernel(capsys):
    code, rep = run(capsys, "kernel", CP1, CP1, "alpha_minus[p+]", "--expect-kernel")
    assert code == 0 and rep["payload"]["in_kernel"]
    assert rep["payload"]["xi_plus"]["restrictions"] == {"p+": "-X", "p-": "0"}
    code, rep = run(capsys, "kernel", CP1, CP1, "one", "--expect-kernel", "--degree", "3")
    assert code == 1
    assert rep["payload"]["witness"]["pairing"] == "-1"
    assert rep["payload"]["residue_sweep"]["agrees"]


def test_kernel_times(capsys):
    code, rep = run(capsys, "kernel", CP1, CP1, "alpha_minus[p+]", "--times", "X^2")
    assert rep["payload"]["class"] == "(X^2)*alpha_minus[p+]" and rep["payload"]["in_kernel"]


def test_unknown_class(capsys):
    code, rep = run(capsys, "kernel", CP1, CP1, "nope")
    assert code == 2 and "nope" in rep["payload"]["message"]


def test_stages(capsys):
    code, rep = run(capsys, "stages", "check", CHAIN, "L.h")
    assert code == 0 and rep["payload"]["detected_stage"] == 2
    code, rep = run(capsys, "stages", "check", CHAIN, "one", "--expect-kernel")
    assert code == 1 and rep["payload"]["verdict"] == "not_detected"
    code, rep = run(capsys, "stages", "check", CHAIN, "missing")
    assert code == 2


def test_toric_round_trip(tmp_path, capsys):
    a = tmp_path / "cp1.json"
    code, rep = run(capsys, "toric", "cpn", "1", "-o", str(a))
    assert code == 0 and rep["payload"]["circle"]["xi"] == [1]
    b = tmp_path / "prod.json"
    code, rep = run(capsys, "toric", "product", str(a), str(a), "-o", str(b))
    assert code == 0 and len(rep["payload"]["points"]) == 4
    code, rep = run(capsys, "validate", str(b))
    assert code == 0
    code, rep = run(capsys, "toric", "chain", str(b))
    assert code == 0 and [s["j"] for s in rep["payload"]] == [1, 2]
    assert rep["payload"] == json.loads(open(CHAIN).read())


def test_toric_shift(capsys):
    code, rep = run(capsys, "toric", "cpn", "2", "--shift=-1/2")
    moments = sorted(p["moment"] for p in rep["payload"]["points"])
    assert code == 0 and moments == ["-1/2", "-3/2", "1/2"]


def test_shipped_cp2_matches_builder(capsys):
    code, rep = run(capsys, "toric", "cpn", "2")
    assert rep["payload"] == json.loads(open(CP2).read())


def test_deterministic_output():
    argv = [sys.executable, "-m", "kirwanres", "kernel", CP2, CP2, "h", "--degree", "2"]
    a = subprocess.run(argv, capture_output=True, check=False).stdout
    b = subprocess.run(argv, capture_output=True, check=False).stdout
    assert a == b and a


def test_human_rendering(capsys):
    code, out = run(capsys, "residue", "Y1/(X-Y1)", "--human")
    assert code == 0 and "res_plus: Y1" in out


def test_io_round_trip():
    space, classes, basis = load_fixture("cp2")
    d = io.space_to_dict(space, classes, basis)
    space2, classes2 = io.space_from_dict(json.loads(io.dumps(d)))
    assert space2 == space and classes2.keys() == classes.keys()
    assert io.basis_from_dict(d, space.num_y_vars).alpha_minus["p0"].restrictions == basis.alpha_minus["p0"].restrictions
    chain = load_fixture("cp1xcp1_stages")
    assert io.chain_from_list(io.chain_to_list(chain)) == chain
