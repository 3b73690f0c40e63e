import json
import subprocess
import sys

import pytest

from infbraid.cli import main
from infbraid.suites import SUITES


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_coherence_pass_and_fail(capsys):
    code, out, _ = run(capsys, "coherence", "--c", "-2/1")
    assert code == 0 and out.splitlines()[-1] == "PASS"
    code, out, _ = run(capsys, "coherence", "--c", "0/1")
    assert code == 1
    assert "defects=9" in out and out.splitlines()[-1] == "FAIL"


def test_classical_four_term(capsys):
    assert run(capsys, "classical-4t")[0] == 0


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-suite"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["coherence", "--c", "one"])
    assert exc.value.code == 2
    assert run(capsys, "kz-flatness", "--n", "1")[0] == 2


def test_bad_model_file(capsys, tmp_path):
    p = tmp_path / "m.json"
    p.write_text('{"version": 1, "g_basis": ["a"], "h_basis": [], "g_bracket": [["a", "b", "a", 1]]}')
    code, _, err = run(capsys, "pbw", "--model", str(p))
    assert code == 2 and "model error" in err
    assert run(capsys, "pbw", "--model", str(tmp_path / "missing.json"))[0] == 2


def test_finite_model_file(capsys, tmp_path):
    p = tmp_path / "sl2.json"
    doc = {
        "version": 1,
        "g_basis": ["f", "k", "e"],
        "h_basis": [],
        "g_bracket": [["f", "k", "f", 1], ["k", "f", "f", -1], ["f", "e", "k", 2], ["e", "f", "k", -2],
                      ["k", "e", "e", 1], ["e", "k", "e", -1]],
        "tensor": {"r": [["f", "e", 1], ["e", "f", 1], ["k", "k", -2]]},
    }
    p.write_text(json.dumps(doc))
    assert run(capsys, "classical-4t", "--model", str(p))[0] == 0


def test_json_report_schema(capsys):
    code, out, _ = run(capsys, "matrices", "--report", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["schema_version"] == 1 and rep["suite"] == "matrices" and rep["status"] == "pass"
    assert set(rep["config"]) >= {"degree_bound", "n", "c", "seed", "oracle"}
    for c in rep["checks"]:
        assert set(c) == {"id", "paper_ref", "status", "defect_term_count", "elapsed_ms"}
        assert (c["status"] == "pass") == (c["defect_term_count"] == 0)
        assert c["elapsed_ms"] is None


def test_reports_are_byte_identical(capsys):
    first = run(capsys, "un-space", "--report", "json", "--seed", "3")[1]
    second = run(capsys, "un-space", "--report", "json", "--seed", "3")[1]
    assert first == second


def test_timings_flag(capsys):
    rep = json.loads(run(capsys, "matrices", "--report", "json", "--timings")[1])
    assert all(isinstance(c["elapsed_ms"], int) for c in rep["checks"])


def test_suite_list():
    assert SUITES == ("pbw", "classical-4t", "un-space", "two-cat-laws", "quasi-invariant", "coherence",
                      "braiding-axioms", "categorified-4t", "matrices", "kz-flatness", "sn-invariance")


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "infbraid", "sn-invariance", "--n", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0, res.stderr
    assert res.stdout.splitlines()[-1] == "PASS"
