"""Command-line behaviour: golden outputs, formats, config validation and error reporting."""

import csv
import io
import json
import subprocess
import sys

import pytest

from pseudotelepathy.cli import main
from pseudotelepathy.game import build_c5_prime, dumps_game


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_separation(capsys):
    code, out, _ = run(capsys, "separation", "--game", "c5")
    assert code == 0
    assert out.splitlines()[0] == "epsilon >= 1/54"
    assert "weighted diagnostic" in out and "1/46" in out


def test_classical_value_weighted(capsys):
    code, out, _ = run(capsys, "classical-value", "--game", "c5-prime", "--x", "3", "--y", "1", "--z", "1")
    assert code == 0 and out.splitlines()[0] == "10/13"


def test_classical_value_json(capsys):
    _, out, _ = run(capsys, "classical-value", "--format", "json")
    data = json.loads(out)
    assert data["classical_value"] == "5/6"
    assert "0 0 0 0 0" in data["optimal_profiles"]


def test_spec_file(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(dumps_game(build_c5_prime(3, 1, 1)))
    _, out, _ = run(capsys, "classical-value", "--spec", str(path))
    assert out.splitlines()[0] == "10/13"


def test_spec_error_reports_position(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 5,\n  "questions": [,]}')
    code, _, err = run(capsys, "classical-value", "--spec", str(path))
    assert code == 2
    assert "line 2" in err and "column" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("classical-value", "--game", "c5-prime", "--x", "3"),
        ("classical-value", "--game", "c5", "--x", "3"),
        ("classical-value", "--spec", "g.json", "--game", "c5-prime", "--x", "1", "--y", "1", "--z", "1"),
    ],
)
def test_config_validation(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_bad_rational(capsys):
    with pytest.raises(SystemExit):
        main(["classical-value", "--game", "c5-prime", "--x", "a", "--y", "1", "--z", "1"])


def test_quantum_check_csv(capsys):
    code, out, _ = run(capsys, "quantum-check", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert rows[0].keys() == {"kind", "name", "expected", "value", "tolerance"}
    xxxxx = next(r for r in rows if r["name"] == "XXXXX")
    assert xxxxx["expected"] == "-1"


def test_ns_value(capsys):
    code, out, _ = run(capsys, "ns-value")
    assert code == 0 and out.splitlines()[0] == "1"


def test_restricted_scan_pair(capsys):
    _, out, _ = run(capsys, "restricted-scan", "--pair", "2,3", "--format", "json")
    data = json.loads(out)
    assert data["restricted_value"] == "5/6" and data["pair"] == [2, 3]
    assert data["box_min_loss"] == "1/6"


def test_restricted_scan_rejects_far_pair(capsys):
    code, _, err = run(capsys, "restricted-scan", "--pair", "1,3")
    assert code == 2 and "adjacent" in err


def test_appendix_table_csv(capsys):
    _, out, _ = run(capsys, "appendix-table", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 136 and sum(int(r["size"]) for r in rows) == 1024
    _, out, _ = run(capsys, "appendix-table", "--format", "csv", "--printed-rows")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 56
    assert {r["flag"] for r in rows} == {"MATCH", "MISMATCH", "UNPARSEABLE"}


def test_optimize_weights(capsys):
    _, out, _ = run(capsys, "optimize-weights", "--tie-yz", "--format", "json")
    data = json.loads(out)
    assert (data["x"], data["y"], data["z"], data["t"]) == ("3", "1", "1", "3/13")
    _, out, _ = run(capsys, "optimize-weights", "--format", "json")
    assert json.loads(out)["t"] == "1/4"


def test_bound_tables(capsys):
    _, out, _ = run(capsys, "bound-tables", "--format", "csv")
    rows = {r["strategy"]: r for r in csv.DictReader(io.StringIO(out))}
    assert [rows["S-bar"][f"Q{i}"] for i in range(1, 6)] == ["9"] * 5
    assert rows["S_{1,5,2}"]["Q1"] == "17"


def test_out_file_and_determinism(capsys, tmp_path):
    path = tmp_path / "o.txt"
    run(capsys, "appendix-table", "--out", str(path))
    first = path.read_text()
    run(capsys, "appendix-table", "--out", str(path))
    assert path.read_text() == first and first


def test_reproduce_all_reports_each_check(capsys):
    code, out, _ = run(capsys, "reproduce-all")
    lines = out.splitlines()
    assert all(line.startswith(("PASS", "FAIL")) for line in lines[:-1])
    assert code == (0 if all(line.startswith("PASS") for line in lines[:-1]) else 1)


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "pseudotelepathy", "separation"], capture_output=True, text=True, check=True
    )
    assert proc.stdout.startswith("epsilon >= 1/54")


def test_reproduce_all_deterministic(capsys):
    _, first, _ = run(capsys, "reproduce-all")
    _, second, _ = run(capsys, "reproduce-all")
    assert first == second


def test_json_and_text_agree(capsys):
    _, text, _ = run(capsys, "separation")
    _, js, _ = run(capsys, "separation", "--format", "json")
    data = json.loads(js)
    assert f"epsilon >= {data['epsilon']}" in text
    assert data["weighted_diagnostic"] in text
