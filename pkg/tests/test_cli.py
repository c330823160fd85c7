import json

import pytest

from harmsum import cli
from harmsum.identities.verify import INCONCLUSIVE, Summary, VerificationReport
from harmsum.sums import eval_exact


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_exact_rational(capsys):
    code, out, _ = run(capsys, "eval", "S[1,1,1,1,1,1](7)")
    assert code == 0 and out.strip() == str(eval_exact((1,) * 6, 7))


def test_eval_over_points(capsys):
    code, out, _ = run(capsys, "eval", "S[2](N) - zeta(2)", "--N", "1..3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == "harmsum.cli/1" and len(data["results"]) == 3
    assert not data["results"][0]["exact"]


def test_eval_continuation(capsys):
    code, out, _ = run(capsys, "eval", "S[1,1,1,1,2](N)", "--N", "2.5", "--digits", "25")
    assert code == 0 and out.startswith("N=5/2: 2.41455719129552761")


def test_syntax_error_exit_2(capsys):
    code, _, err = run(capsys, "eval", "S[-3,0,1](5)")
    assert code == 2 and "zero index at position 6" in err


@pytest.mark.parametrize("digits", ["19", "201", "abc"])
def test_digits_range(capsys, digits):
    assert run(capsys, "eval", "1", "--digits", digits)[0] == 2


def test_digits_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("HARMSUM_DIGITS", "22")
    code, out, _ = run(capsys, "eval", "zeta(3)")
    assert code == 0 and len(out.strip()) == 23
    monkeypatch.setenv("HARMSUM_DIGITS", "500")
    assert run(capsys, "eval", "zeta(3)")[0] == 2


def test_basis_weight_six(capsys):
    code, out, _ = run(capsys, "basis", "--weight", "6")
    assert code == 0 and len(out.strip().splitlines()) == 20
    assert run(capsys, "basis", "--weight", "9")[0] == 2


def test_verify_section_five(capsys):
    code, out, _ = run(capsys, "verify", "--section", "5", "--N", "1..12", "--digits", "50", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == "harmsum.verify/1"
    assert data["counted"] == 2 and data["status"] == "pass"


def test_verify_failure_exit_1(capsys, tmp_path):
    f = tmp_path / "c.json"
    f.write_text(json.dumps([{"id": "off-by-one", "anchor": "2", "lhs": "S[2](N)", "rhs": "S[2](N+1)"}]))
    code, out, _ = run(capsys, "verify", "--catalog", str(f), "--N", "1..3", "--digits", "20")
    assert code == 1 and "off-by-one" in out and "residual" in out


def test_verify_inconclusive_exit_3(capsys, monkeypatch):
    rep = VerificationReport("r", None, "sum", 30, 0, status=INCONCLUSIVE, message="quadrature")
    monkeypatch.setattr("harmsum.identities.verify_all", lambda *a, **k: Summary(30, [1], [rep]))
    assert run(capsys, "verify", "--N", "1")[0] == 3


def test_verify_unknown_section(capsys):
    assert run(capsys, "verify", "--section", "9", "--N", "1")[0] == 2


def test_continue_json(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, _, _ = run(capsys, "continue", "2,1,1,1,1", "--N", "8,3.5+1j", "--format", "json", "--out", str(out_file))
    data = json.loads(out_file.read_text())
    assert code == 0 and data["verb"] == "continue"
    assert data["results"][0]["route"] == "decomposition"
    assert run(capsys, "continue", "S[-3,1]")[0] == 2


def test_continue_pole(capsys):
    assert run(capsys, "continue", "1,1,1,1,2", "--N", "-3")[0] == 2


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "S[2,1]")
    assert code == 0 and out.strip() == "S[1](N)*S[2](N) - S[1,2](N) + S[3](N)"


def test_mellin_verb(capsys):
    code, out, _ = run(capsys, "mellin", "1/(x-1)", "--plus", "--N", "3", "--digits", "20")
    assert code == 0 and "1.833333333333333333" in out
    assert run(capsys, "mellin", "Li2(x)/(x+1)", "--plus")[0] == 2


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--names", "zeta(3);ln2", "--format", "json", "--digits", "20")
    data = json.loads(out)
    assert code == 0 and [c["name"] for c in data["constants"]] == ["zeta(3)", "ln2"]
    assert run(capsys, "constants", "--names", "zeta(1)")[0] == 2


def test_asym(capsys):
    code, out, _ = run(capsys, "asym", "--terms", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and [c["coeff"] for c in data["coefficients"]] == ["1", "1/32", "-179/7776"]
    code, out, _ = run(capsys, "asym", "--kernel", "1-x", "--shift", "0", "--terms", "3", "--z", "40")
    assert code == 0 and "c_3 = -3" in out and "value at z=40" in out
    assert run(capsys, "asym", "--kernel", "ln(1-x)")[0] == 2


def test_json_is_deterministic(capsys):
    a = run(capsys, "asym", "--format", "json")[1]
    b = run(capsys, "asym", "--format", "json")[1]
    assert a == b
