import json
import shutil
from importlib import resources

import pytest

from aqlam.cli import main
from aqlam.suite import curated_suite


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, [json.loads(line) for line in out.splitlines() if line.strip()], err


def test_record_shape_and_determinism(capsys):
    code, recs, _ = run(capsys, "fs", "--type", "B2", "--form", "sc", "--lambda", "0,1", "--oracle")
    assert code == 0
    rec = recs[0]
    assert set(rec) == {"kind", "query", "result", "rule_trace", "provenance"}
    assert rec["result"]["indicator"] == -1
    _, again, _ = run(capsys, "fs", "--type", "B2", "--form", "sc", "--lambda", "0,1", "--oracle")
    assert again == recs


def test_beta_without_lambda(capsys):
    code, recs, _ = run(capsys, "fs", "--type", "D6", "--beta")
    assert code == 0
    assert recs[0]["result"]["form_label"] == "sc" and len(recs[0]["result"]["beta"]) == 4


def test_local_global(capsys):
    code, recs, _ = run(capsys, "local-global", "--a", "-1", "--b", "-1")
    assert code == 0
    assert recs[0]["result"]["ramified"] == [2, "inf"] and recs[0]["result"]["parity_ok"]


def test_descend_round_trip(tmp_path, capsys):
    entry = next(e for e in curated_suite() if e.kind == "real")
    path = tmp_path / "m.json"
    path.write_text(json.dumps(entry.module.to_json()))
    code, recs, _ = run(capsys, "descend", "--file", str(path))
    assert code == 0 and recs[0]["result"]["verdict"] == "real"
    model = tmp_path / "model.json"
    model.write_text(json.dumps(recs[0]["result"]["model"]))
    code, recs, _ = run(capsys, "descend", "--file", str(model))
    assert code == 0 and recs[0]["result"]["verdict"] == "real"


def test_aq_report_file_and_flags_agree(tmp_path, capsys):
    path = tmp_path / "aq.json"
    path.write_text(json.dumps({"cartan_type": "C3", "form_kind": "equal_rank_inner", "noncompact_marks": [0],
                                "levi_subset": [], "lambda_coords": [0, 0, 0]}))
    code, a, _ = run(capsys, "aq-report", "--file", str(path))
    assert code == 0
    code, b, _ = run(capsys, "aq-report", "--type", "C3", "--form-kind", "equal_rank_inner", "--marks", "0")
    assert code == 0
    assert a[0]["result"] == b[0]["result"]
    assert a[0]["result"]["field_of_definition"] == "F"


def test_character(capsys):
    code, recs, _ = run(capsys, "character", "--type", "A1", "--lambda", "1")
    assert code == 0
    assert recs[0]["result"]["kostant"] == [[0, [1]], [1, [-3]]]


def test_classify_forms(capsys):
    code, recs, _ = run(capsys, "classify-forms", "--max-rank", "3")
    assert code == 0 and recs


@pytest.mark.parametrize(
    "argv",
    [
        ["fs", "--type", "Q3", "--lambda", "1"],
        ["fs", "--type", "A2", "--lambda", "1"],
        ["aq-report", "--type", "A2", "--form-kind", "equal_rank_inner", "--marks", "7"],
        ["local-global", "--a", "0", "--b", "1"],
        ["local-global", "--a", "x", "--b", "1"],
        ["no-such-command"],
    ],
)
def test_validation_errors_exit_one(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 1


def test_orbit_cap_exits_two(capsys, monkeypatch):
    monkeypatch.setenv("AQLAM_ORBIT_CAP", "3")
    code, _, err = run(capsys, "character", "--type", "A2", "--lambda", "1,1")
    assert code == 2 and "cap" in err


def _golden_copy(tmp_path):
    for name in ("admissible_forms.jsonl", "unconditional_forms.jsonl"):
        with resources.as_file(resources.files("aqlam.data").joinpath(name)) as src:
            shutil.copy(src, tmp_path / name)
    return tmp_path


def test_verify_names_a_mutated_row(tmp_path, capsys):
    d = _golden_copy(tmp_path)
    path = d / "unconditional_forms.jsonl"
    rows = [json.loads(line) for line in path.read_text().splitlines() if line.strip()]
    target = next(r for r in rows if r["series"] == "E" and r["rank"] == 7)
    target["verdict"] = "mutated"
    path.write_text("".join(json.dumps(r) + "\n" for r in rows))
    code, recs, _ = run(capsys, "verify", "--golden-dir", str(d))
    assert code == 1
    unc = next(r for r in recs if r["query"]["table"] == "unconditional")
    assert not unc["result"]["pass"]
    first = unc["result"]["first_divergent"]["golden"]
    assert (first["series"], first["rank"]) == ("E", 7)
    assert any("E" in line and "mutated" in line for line in unc["rule_trace"])


def test_verify_flags_uncovered_rows(capsys):
    code, recs, _ = run(capsys, "verify", "--max-rank", "10")
    unc = next(r for r in recs if r["query"]["table"] == "unconditional")
    assert unc["result"]["uncovered"] > 0
    assert all(int(label.split()[0][1:]) > 8 for label in unc["result"]["uncovered_rows"])
    cases = next(r for r in recs if r["query"]["table"] == "standard_module_cases")
    assert cases["result"]["pass"]
