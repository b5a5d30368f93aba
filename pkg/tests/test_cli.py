import json

import pytest

from orw.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_normalize_example(capsys):
    rc, out, _ = run(capsys, "normalize", "--preset", "XD", "--gens", "x,y", "--lambda", "1", "D(x*y)")
    assert rc == 0 and out.strip() == "x*D(y) + D(x)*y + D(x)*D(y)"


def test_normalize_json_trace(capsys):
    rc, out, _ = run(capsys, "normalize", "--preset", "XPD", "--json", "--trace", "D(P(x))")
    rec = json.loads(out)
    assert rc == 0 and rec["normal_form"] == "x" and rec["path"]


def test_flatten_unflatten(capsys):
    rc, out, _ = run(capsys, "flatten", "D(x)*P(y)", "--gens", "x,y")
    assert rc == 0
    word = out.strip()
    rc, out, _ = run(capsys, "unflatten", word, "--gens", "x,y")
    assert rc == 0 and out.strip() == "D(x)*P(y)"


def test_pda_accept(capsys):
    rc, out, _ = run(capsys, "pda-accept", "aabb", "--machine", "anbn", "--trace")
    assert rc == 0 and "$ -> $0 -> $00 -> $0 -> $ -> eps" in out
    rc, out, _ = run(capsys, "pda-accept", "abab", "--machine", "anbn")
    assert rc == 1 and out.startswith("rejected")


def test_check_and_term_check(capsys):
    rc, out, _ = run(capsys, "check", "--preset", "XP_reduced", "--bound", "5")
    assert rc == 0 and "left-reduced: True" in out and "PASS" in out
    rc, out, _ = run(capsys, "term-check", "--preset", "XD", "--measure", "op-count", "--bound", "5")
    assert rc == 1 and out.startswith("FAIL")
    rc, out, _ = run(capsys, "term-check", "--preset", "XD", "--measure", "bogus", "--bound", "5")
    assert rc == 2


def test_cp_families(capsys):
    rc, out, _ = run(capsys, "cp", "--preset", "XP", "--bound", "6", "--classify-families", "--json")
    lines = [json.loads(x) for x in out.splitlines()]
    summ = lines[-1]
    assert rc == 0 and summ["summary"] and summ["pairs"] == 377 and summ["unclassified"] == 0
    assert {"kind", "source", "left_rule", "right_rule", "overlap", "joinable", "family"} <= set(lines[0])


def test_confluence_failure(capsys):
    rc, out, _ = run(capsys, "confluence", "--preset", "X_DRB_pre", "--bound", "5")
    assert rc == 1 and "non-joinable D(P(1))*D(x)" in out


def test_gs_check(capsys):
    rc, out, _ = run(capsys, "gs-check", "--preset", "XP", "--bound", "6")
    assert rc == 0 and "0 disagreements" in out


def test_complete(capsys):
    rc, out, _ = run(capsys, "complete", "--preset", "X_DRB_pre", "--bound", "5", "--json")
    summ = json.loads(out.splitlines()[-1])
    assert rc == 0 and summ["converged"] and summ["unmatched"] == 0


def test_basis_and_squier(capsys):
    rc, out, _ = run(capsys, "basis", "--preset", "XP", "--bound", "6", "--compare-phi")
    assert rc == 0 and "0 mismatches" in out
    rc, out, _ = run(capsys, "squier", "--preset", "XI_reduced", "-n", "1", "--bound", "4",
                     "--boundaries")
    assert rc == 0 and "eps | B(B(x))   : B(B(x)) -> x" in out
    rc, out, _ = run(capsys, "squier", "--preset", "XP_reduced", "-n", "3", "--bound", "4",
                     "--boundaries")
    assert rc == 2


def test_export_reload(capsys, tmp_path):
    rc, out, _ = run(capsys, "export", "--preset", "XP", "--gens", "x,y")
    f = tmp_path / "xp.orw"
    f.write_text(out)
    rc, out, _ = run(capsys, "normalize", "--system", str(f), "P(x)*P(y)")
    assert rc == 0 and out.strip() == "P(x*y) + P(x*P(y)) + P(P(x)*y)"


@pytest.mark.parametrize("argv", [
    ["normalize", "--preset", "XD", "D(x"],
    ["normalize", "--preset", "NOPE", "x"],
    ["normalize", "x"],
    ["unflatten", "l_D x"],
    ["cp"],
    ["normalize", "--system", "/nonexistent", "x"],
])
def test_usage_errors(capsys, argv):
    rc, _, err = run(capsys, *argv)
    assert rc == 2
