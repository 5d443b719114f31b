import json
import subprocess
import sys
from pathlib import Path

import pytest

from idgalois.cli import run
from idgalois.reports import SCHEMA, Report, ReportError

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def sc(name):
    return str(SCENARIOS / name)


def test_derive_example():
    code, rep = run(["derive", "--field", "GF(3)", "--expr", "t^5", "--k", "2"])
    assert code == 0
    assert rep.result["derivative"] == "t^3"
    assert any("GF(3)" in n and "approximated" in n for n in rep.notes)


def test_taylor_and_axioms():
    code, rep = run(["taylor", "--field", "GF(5)", "--expr", "t^2", "--order", "3"])
    assert code == 0 and rep.result["coefficients"] == ["t^2", "2*t", "1", "0"]
    code, rep = run(["axioms", "--field", "GF(2)", "--count", "5", "--N", "8"])
    assert code == 0 and rep.result["samples"] == 5


def test_frattini_examples():
    code, rep = run(["frattini", "--group", "catalogue:Z4", "--onto", "catalogue:Z2"])
    assert code == 0 and rep.result["criterion"]
    code, rep = run(["frattini", "--group", "catalogue:V4", "--onto", "catalogue:Z2"])
    assert code == 1 and rep.witness["proper_supplement"]
    code, rep = run(["frattini", "--group", "catalogue:D4", "--onto", "catalogue:Z2", "--all"])
    assert rep.checks[0].holds


def test_group_commands():
    code, rep = run(["semidirect", "--n", "catalogue:Z3", "--h", "catalogue:Z2", "--action", '{"1": [0, 2, 1]}',
                     "--expect", "catalogue:S3"])
    assert code == 0 and rep.result["order"] == 6
    code, rep = run(["fibre", "--a", "catalogue:Z4", "--b", "catalogue:Z4", "--c", "catalogue:Z2"])
    assert code == 0 and rep.result["order"] == 8
    code, rep = run(["type-mu", "--group", "catalogue:Z4", "--normal", "0,2"])
    assert code == 0 and rep.result["kernel_order"] == 2
    code, rep = run(["semidirect", "--n", "cycles:(1 2 3)", "--h", "catalogue:Z2"])
    assert code == 0 and rep.result["abelian"]


def test_decompose_borel():
    code, rep = run(["decompose", "--descriptor", sc("borel.json"), "--plan"])
    assert code == 0
    assert {4, 5} <= set(rep.result["leaf_classes"]) <= {1, 4, 5}
    assert "tree" in rep.result and rep.result["plan"]["steps"]
    code, rep = run(["plan", "--descriptor", sc("gl_pgl.json")])
    assert code == 0 and "tree" not in rep.result


def test_system_commands():
    assert run(["ide", "--system", sc("system_gf3.json")])[0] == 0
    assert run(["check-fsm", "--system", sc("artin_schreier.json")])[0] == 0
    assert run(["equivariance", "--system", sc("torus.json")])[0] == 0
    code, rep = run(["compose", "--system", sc("torus.json")])
    assert code == 0 and len(rep.result["D_tilde"]) == 1
    code, rep = run(["equivariance", "--system", sc("torus_bad.json")])
    assert code == 1 and rep.witness["entry"] is not None
    code, rep = run(["hilbert90", "--field", "GF(3)", "--ext", "kummer(m=2)", "--N", "9", "--chi", "[[0,1],[1,0]]"])
    assert code == 0
    args = ["form-member", "--field", "GF(3)", "--ext", "kummer(m=2)", "--N", "9", "--chi", "[[1,0],[0,2]]"]
    assert run(args + ["--u", "s"])[0] == 0
    assert run(args + ["--u", "1"])[0] == 1


def test_gauge_and_pv(tmp_path):
    gauge = json.dumps([[["1", "0"], ["0", "2"]]] * 3)
    code, rep = run(["gauge", "--system", sc("system_gf3.json"), "--gauge", gauge])
    assert code == 0
    bad = json.dumps([[["1", "0"], ["0", "1"]], [["t", "0"], ["0", "1"]], [["1", "0"], ["0", "1"]]])
    assert run(["gauge", "--system", sc("system_gf3.json"), "--gauge", bad])[0] == 1
    pair = tmp_path / "pair.json"
    pair.write_text(json.dumps({"field": "GF(3)", "N": 9, "L": 0,
                                "U": [[["1", "t"], ["0", "1"]]], "U2": [[["1", "t+t^3"], ["0", "1"]]]}))
    assert run(["pv-equal", "--pair", str(pair)])[0] == 0
    pair.write_text(json.dumps({"field": "GF(3)", "N": 9, "L": 0,
                                "U": [[["1", "t"], ["0", "1"]]], "U2": [[["1", "0"], ["0", "1"]]]}))
    assert run(["pv-equal", "--pair", str(pair)])[0] == 1


@pytest.mark.parametrize("argv", [
    ["derive", "--field", "GF(6)", "--expr", "t", "--k", "1"],
    ["derive", "--field", "GF(3)", "--expr", "t +* 1", "--k", "1"],
    ["derive", "--field", "GF(3)", "--expr", "t", "--k", "99", "--N", "8"],
    ["frattini", "--group", "catalogue:NOPE", "--onto", "catalogue:Z2"],
    ["frattini", "--group", "catalogue:Z3", "--onto", "catalogue:Z2"],
    ["decompose", "--descriptor", "/nonexistent.json"],
    ["derive", "--field", "GF(3)"],
])
def test_bad_input_exits_2(argv):
    assert run(argv)[0] == 2


def test_unknown_command():
    assert run(["frobnicate"])[0] == 2
    assert run([])[0] == 2


def test_json_roundtrip():
    code, rep = run(["frattini", "--group", "catalogue:V4", "--onto", "catalogue:Z2", "--json"])
    back = Report.from_json(rep.to_json())
    assert back.to_dict() == rep.to_dict()
    d = json.loads(rep.to_json())
    assert d["schema"] == SCHEMA and d["verdict"] == "fail"
    with pytest.raises(ReportError):
        Report.from_dict({**d, "schema": "other/1"})
    code, rep = run(["derive", "--field", "GF(3)", "--expr", "t^", "--k", "1"])
    assert rep.verdict == "error" and rep.witness["error"] == "ParseError"


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "idgalois.cli", "derive", "--field", "GF(3)", "--expr", "t^5",
                          "--k", "2", "--json"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["result"]["derivative"] == "t^3"
