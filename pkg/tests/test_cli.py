import json
import subprocess
import sys

import pytest

from capmeasure.cli import main
from capmeasure.harness import get_theorem, verify

S2 = "carrier a b\nmatrix\n0 2\n3 0\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return {
        "s2": write("s2.txt", S2),
        "s2json": write("s2.json", json.dumps({"carrier": ["a", "b"], "matrix": [["0", "2"], ["3", "0"]]})),
        "diag": write("diag.txt", "carrier a b\nmatrix\n1 2\n3 0\n"),
        "bad": write("bad.txt", "carrier a b\nmatrix\n0 1/0\n3 0\n"),
        "point": write("pt.txt", "carrier p\nmatrix\n0\n"),
        "ind": write("ind.txt", "carrier a b\nmatrix\n0 0\n0 0\n"),
        "id": write("id.txt", "map\na -> a\nb -> b\n"),
        "const": write("const.txt", "map\na -> p\nb -> p\n"),
        "broken": write("broken.txt", "carrier a b\ntable\na : 0 2\nb : 3 0\na,b : 0 2\n"),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check(capsys, files):
    code, out, _ = run(capsys, "check", files["s2"])
    assert code == 0
    assert out.strip() == "CAL1 ok, CAL2 ok, CAL3 ok (canonical), PSAP yes, PRAP yes, AP yes"
    assert run(capsys, "check", files["s2json"])[1] == out


def test_check_input_errors(capsys, files):
    code, out, _ = run(capsys, "check", files["diag"])
    assert code == 2 and "CAL1 violated" in out
    code, _, err = run(capsys, "check", files["bad"])
    assert code == 2 and "bad.txt:3:3:" in err and "zero denominator" in err
    code, out, _ = run(capsys, "check", files["broken"])
    assert code == 2 and "CAL3 violated" in out
    code, _, err = run(capsys, "check", "missing-file.txt")
    assert code == 2 and "no such file" in err
    assert run(capsys, "check", "--nope", files["s2"])[0] == 2


def test_measure(capsys, files):
    code, out, _ = run(capsys, "measure", files["s2"], "--class", "all", "--at", "b", "--filter", "a")
    assert code == 0 and out.splitlines() == ["2", "witness: {a}↑"]
    assert run(capsys, "measure", files["s2"], "--at", "a,b", "--filter", "a,b")[1].splitlines()[0] == "0"
    code, out, _ = run(capsys, "measure", files["s2"], "--class", "points", "--at", "b", "--filter", "a")
    assert out.splitlines()[0] == "2"
    code, out, _ = run(capsys, "measure", files["s2"], "--at", "b", "--filter", "a", "--format", "json")
    assert json.loads(out) == {"at": ["b"], "class": "All", "filter": ["a"], "value": "2", "witness": ["a"]}


def test_measure_errors(capsys, files):
    assert run(capsys, "measure", files["s2"], "--at", "z", "--filter", "a")[0] == 2
    assert run(capsys, "measure", files["s2"], "--class", "odd", "--filter", "a")[0] == 2


def test_classify(capsys, files):
    code, out, _ = run(capsys, "classify", files["s2"], files["s2"], files["id"])
    assert code == 0 and " no" not in out
    code, out, _ = run(capsys, "classify", files["s2"], files["point"], files["const"])
    assert all(line.split()[-1] in ("yes", "agree") for line in out.splitlines())
    code, out, _ = run(capsys, "classify", files["ind"], files["s2"], files["id"])
    assert out.splitlines()[0].startswith("contraction              no  witness: F={b}↑, x=a")
    assert run(capsys, "classify", files["s2"], files["point"], files["id"])[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "ADH-TWO-FORMS", "--max-size", "3", "--grid", "0,1,inf")
    assert code == 0 and "violations: 0" in out
    assert run(capsys, "verify", "MAIN-PRODUCT-12", "--max-size", "2")[0] == 0
    code, out, _ = run(capsys, "verify", "--mutated", "COR-PRODUCT-MEASURE")
    assert code == 0 and "mutation caught" in out
    assert run(capsys, "verify", "NOPE")[0] == 2
    assert run(capsys, "verify", "PROP-CLOSED-F0", "--max-size", "4", "--budget", "1000")[0] == 2


def test_verify_summary_equals_in_process_report(capsys):
    code, out, _ = run(capsys, "verify", "THM1-ADH-MEASURE", "--mode", "random", "--seed", "5",
                       "--count", "10", "--format", "summary")
    spec = get_theorem("THM1-ADH-MEASURE").default_spec(mode="random", seed=5, count=10)
    assert code == 0
    assert json.loads(out) == verify("THM1-ADH-MEASURE", spec).summary()


def test_search(capsys):
    code, out, _ = run(capsys, "search", "MAIN-PRODUCT-STRICT", "--format", "summary")
    assert code == 1 and json.loads(out)["violation_count"] > 0
    code, out, _ = run(capsys, "search", "--list")
    assert code == 0 and "THM4-NON-AP" in out


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "spaces", "--size", "2", "--count-only")
    assert out.strip() == "9"
    code, out, _ = run(capsys, "enumerate", "spaces", "--size", "3", "--grid", "0,inf", "--format", "json")
    assert len(json.loads(out)) == 64
    code, out, _ = run(capsys, "enumerate", "spaces", "--size", "1")
    assert out == "carrier a\nmatrix\n0\n"
    code, out, _ = run(capsys, "enumerate", "theorems")
    assert out.splitlines()[0].startswith("ADH-TWO-FORMS")
    assert run(capsys, "enumerate", "spaces", "--size", "4", "--budget", "10")[0] == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "capmeasure", "check", files["diag"]],
                          capture_output=True, text=True)
    assert proc.returncode == 2
