import json
import re
import subprocess
import sys
import time

import pytest

from algebase import cli, table
from algebase.serialize import dumps, fmt_float

FLOAT_RE = re.compile(r"^-?\d\.\d{14}e[+-]\d{2,}$")


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def run_json(argv, capsys):
    code, out = run(argv, capsys)
    return code, json.loads(out)


def test_alphabet_golden(capsys):
    t0 = time.perf_counter()
    code, d = run_json(["alphabet", "x^2 - x - 1"], capsys)
    assert time.perf_counter() - t0 < 1
    assert code == 0
    assert d["m"] == "3" and d["N"] == 2 and d["gN"] == ["1", "-3", "1"]
    assert "index 3" in d["note"]
    assert d["minimality_rechecked"] is True
    assert FLOAT_RE.match(d["mahler_estimate"])


def test_alphabet_no_note_elsewhere(capsys):
    code, d = run_json(["alphabet", "x^3 - x - 1"], capsys)
    assert code == 0 and "note" not in d


def test_alphabet_t(capsys):
    code, d = run_json(["alphabet", "x^2 - x - 1", "--t", "2"], capsys)
    assert d["N"] == 4 and d["gN"][1] == "-7"


def test_pierce(capsys):
    code, d = run_json(["pierce", "x^2 - x - 1", "--N", "5"], capsys)
    assert code == 0 and d["pierce"] == "11"
    code, d = run_json(["pierce", "x - 2", "--N", "10", "--backend", "numeric"], capsys)
    assert d["pierce"] == "1023" and d["backend"] == "numeric"


def test_trail(capsys):
    code, d = run_json(["trail", "1 - x - x^3", "1 + x"], capsys)
    assert code == 0
    assert d["certificate"]["remainder"] == ["2", "1", "2"]
    assert all(d["verification"].values())


def test_represent(capsys):
    code, d = run_json(["represent", "x^2 - x - 1", "1/2", "--alphabet-m", "1"], capsys)
    assert code == 0 and d["mode"] == "balanced"
    assert all(d["verification"].values())
    code, d = run_json(["represent", "x^3 - x^2 - 1", "1,-1,1", "--alphabet-m", "2"], capsys)
    assert code == 0 and all(d["verification"].values())
    code, d = run_json(["represent", "x^3 - x - 1", "1"], capsys)
    assert d["mode"] == "greedy" and d["representation"]["preperiod"] == [1, 0, 0, 0, 1]


def test_classb(capsys):
    code, d = run_json(["classb", "--n", "5"], capsys)
    assert code == 0
    assert d["split"]["A"] == "x^2 - x + 1" and d["minimal_polynomial"] == "x^3 - x - 1"
    assert d["trinomial_irreducible"] is False
    code, d = run_json(["classb", "--n", "3", "--exponents", "4"], capsys)
    assert code == 1 and d["error"]["exception"] == "GapViolation"


def test_mahler(capsys):
    code, d = run_json(["mahler", "x^2 - x - 1", "--method", "graeffe"], capsys)
    assert d["mahler"] == fmt_float((1 + 5**0.5) / 2)


def test_parry_and_trace_csv(capsys):
    code, out = run(["parry", "--sections", "3", "--format", "csv"], capsys)
    assert code == 0 and out.splitlines()[0] == "j,deg,M_j" and len(out.splitlines()) == 4
    code, out = run(["trace", "--sections", "3", "--format", "csv"], capsys)
    assert code == 0 and out.splitlines()[0] == "s,re_r_s,im_r_s,eta_s,pbeta_abs"


def test_pisot_csv(capsys):
    code, out = run(["pisot", "--k-max", "2", "--format", "csv"], capsys)
    assert out == "k,beta_k,m_k_mantissa,m_k_exponent\n1,1.32471795724475e+00,6.000000000,0\n2,1.53415774491427e+00,4.400000000,1\n"


def test_reproduce_subset(capsys, monkeypatch):
    monkeypatch.setattr(table, "REFERENCE_ROWS", [table.REFERENCE_ROWS[2], table.REFERENCE_ROWS[9]])
    code, d = run_json(["reproduce"], capsys)
    assert code == 0 and d["within_1e-6"] is True
    assert [r["N"] for r in d["rows"]] == [588, 525]
    assert d["rows"][0]["m_mantissa"] == "3.196582086" and d["rows"][0]["m_exponent"] == 151
    code, out = run(["reproduce", "--format", "csv"], capsys)
    assert out.splitlines()[0].startswith("label,N,j0,m_mantissa")


@pytest.mark.parametrize(
    "argv,code",
    [
        (["alphabet", "2x"], 1),
        (["alphabet"], 1),
        (["pierce", "x - 2"], 1),
        (["bogus"], 1),
        ([], 1),
        (["mahler", "x", "--format", "csv"], 1),
        (["alphabet", "x - 2", "--budget", "0"], 1),
        (["alphabet", "x^2 - x + 1"], 2),
        (["alphabet", "x^101 + x^11 + x - 1", "--budget", "5", "--backend", "numeric"], 2),
        (["represent", "x^2 - x - 1", "10", "--alphabet-m", "1"], 2),
        (["represent", "x^3 - x - 1", "1/47", "--budget", "3"], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    got, out = run(argv, capsys)
    assert got == code
    err = json.loads(out)["error"]
    assert err["exit_code"] == code and err["type"] == ("usage" if code == 1 else "computation")


@pytest.mark.parametrize("cmd", cli.COMMANDS)
def test_selftest(cmd, capsys):
    code, d = run_json([cmd, "--selftest"], capsys)
    assert code == 0 and d["passed"] and d["checks"]


def test_out_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert cli.main(["alphabet", "x^3 - x - 1", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert capsys.readouterr().out == ""


def test_serialization():
    assert json.loads(dumps({"n": 10**400, "k": 3, "x": 0.1}))["n"] == str(10**400)
    assert json.loads(dumps({"k": 3}))["k"] == 3
    assert fmt_float(0.1) == "1.00000000000000e-01"
    assert fmt_float(None) == ""
    assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')


def test_console_module():
    out = subprocess.run([sys.executable, "-m", "algebase", "pierce", "x - 2", "--N", "3"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["pierce"] == "7"
