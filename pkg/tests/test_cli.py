import io
import json

import pytest

from regugen.cli import run
from regugen.report import FAIL, PASS, Report, exit_code


def call(argv):
    buf = io.StringIO()
    code = run(argv, stream=buf)
    return code, [json.loads(ln) for ln in buf.getvalue().splitlines()]


def test_delta_brute_command():
    code, out = call(["delta", "brute", "--group", "SU(3,2)", "--classes", "4a", "4b", "4c"])
    assert code == 0 and out[0]["actual"] == 10


def test_delta_table_command_with_class_index():
    code, out = call(["delta", "table", "--group", "SU(3,2)", "--classes", "x", "x", "x", "--class-index", "5,6,7"])
    assert code == 0 and out[0]["actual"] == 10


def test_ambiguous_label_lists_candidates(capsys):
    with pytest.raises(SystemExit) as e:
        call(["delta", "brute", "--group", "SU(3,2)", "--classes", "4", "4b", "4c"])
    assert e.value.code == 2
    err = capsys.readouterr().err
    assert "4a" in err and "4c" in err and "--class-index" in err


def test_theta_command():
    code, out = call(["theta", "--delta", "486", "--correction", "1:81"])
    assert code == 0 and out[0]["actual"] == 405


def test_expect_mismatch_exits_nonzero():
    code, out = call(["theta", "--delta", "486", "--correction", "1:81", "--expect", "400"])
    assert code == 1 and out[0]["status"] == FAIL


def test_formula_command_and_big_integers_are_decimal():
    code, out = call(["delta", "formula", "--formula", "ree-delta", "--param", "m=1"])
    assert code == 0
    assert out[0]["actual"] == "4041638206498668544"


def test_inequality_command_reports_each_m(tmp_path):
    target = tmp_path / "out.json"
    code, out = call(["inequality", "--family", "f4", "--max-m", "5", "--out", str(target)])
    assert code == 0 and len(out) == 5
    assert [r["check"] for r in json.loads(target.read_text())] == [r["check"] for r in out]


def test_twisted_e6_inequality_fails_only_at_m_one():
    code, out = call(["inequality", "--family", "2e6", "--max-m", "4", "--no-timing"])
    assert code == 1
    assert [r["status"] for r in out] == [FAIL, PASS, PASS, PASS]
    assert out[0]["extra"]["union_bound"] is True


def test_chartab_build_and_check(tmp_path):
    f = tmp_path / "t.json"
    code, out = call(["chartab", "build", "--group", "SL(2,3)", "--out", str(f)])
    assert code == 0 and sorted(out[0]["extra"]["degrees"]) == [1, 1, 1, 2, 2, 2, 3]
    assert call(["chartab", "check", str(f)])[0] == 0
    data = json.loads(f.read_text())
    data["order"] = 25
    f.write_text(json.dumps(data))
    assert call(["chartab", "check", str(f)])[0] == 1


def test_classes_and_genpairs_commands():
    code, out = call(["classes", "--group", "Sym(4)"])
    assert code == 0 and len(out[0]["extra"]["classes"]) == 5
    code, out = call(["genpairs", "--group", "SL(3,2)", "--classes", "4a", "4a", "7a"])
    assert code == 0 and out[0]["actual"] == 7


def test_witness_command_is_stable():
    a = call(["witness", "verify", "sp4-2", "--no-timing"])
    b = call(["witness", "verify", "sp4-2", "--no-timing"])
    assert a == b and a[0] == 0


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit):
        call(["theta", "--delta", "1", "--bogus"])


def test_exit_code_rule():
    assert exit_code([Report("a", PASS), Report("b", "INCONCLUSIVE")]) == 0
    assert exit_code([Report("a", PASS), Report("b", FAIL)]) == 1


def test_report_keeps_big_integers_exact():
    d = Report.compare("x", 2**80, 2**80).to_dict(timing=False)
    assert d == {"check": "x", "status": PASS, "expected": str(2**80), "actual": str(2**80), "basis": "direct"}
