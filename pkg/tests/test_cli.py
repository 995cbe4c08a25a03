import csv
import io
import json
import math

import pytest

from hardykit import __version__
from hardykit.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def header(text):
    return dict(line[2:].split("=", 1) for line in text.splitlines() if line.startswith("# "))


def test_evaluate_d(capsys, fixture_path):
    code, out, _ = run(capsys, "evaluate", fixture_path("bilinear_power.json"), "--cond", "D")
    assert code == 0
    rec = json.loads(out)
    assert rec["result"]["value"] == pytest.approx(2 ** -0.5, abs=1e-6)
    assert rec["version"] == __version__ and rec["seed"] == 0 and len(rec["config_sha256"]) == 64


def test_evaluate_rejects_bad_exponents(capsys, caplog, tmp_path, fixture_path):
    doc = json.loads(fixture_path("bilinear_power.json").read_text())
    doc["exponents"]["q"] = 1.5
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "evaluate", path, "--cond", "D")
    assert code == 2 and out == ""
    assert "p1, p2 <= q" in caplog.text


def test_evaluate_infinite_muckenhoupt(capsys, fixture_path):
    code, out, _ = run(capsys, "evaluate", fixture_path("divergent_tail.json"), "--cond", "AM")
    assert code == 0
    assert json.loads(out)["result"]["value"] == "+inf"


def test_evaluate_unknown_condition(capsys, fixture_path):
    code, _, _ = run(capsys, "evaluate", fixture_path("linear_power.json"), "--cond", "B16")
    assert code == 2


def test_evaluate_geomean(capsys, fixture_path):
    code, out, _ = run(capsys, "evaluate", fixture_path("geomean_power.json"), "--cond", "scriptB")
    assert code == 0 and json.loads(out)["result"]["value"] == pytest.approx(1.0, abs=1e-6)


def test_evaluate_writes_plot_data(capsys, tmp_path, fixture_path):
    plot = tmp_path / "plot.csv"
    out_file = tmp_path / "out.json"
    code, out, _ = run(capsys, "evaluate", fixture_path("bilinear_power.json"), "--cond", "D",
                       "--plot-data", plot, "-o", out_file)
    assert code == 0 and out == ""
    assert json.loads(out_file.read_text())["result"]["id"] == "D"
    rows = csv_rows(plot.read_text())
    assert {r["condition"] for r in rows} >= {"D[0]"}
    assert header(plot.read_text())["version"] == __version__


@pytest.mark.parametrize("name, expected", [
    ("bilinear_power.json", 0),
    ("mixed_finiteness.json", 1),
    ("loose_tolerance.json", 4),
    ("divergent_tail.json", 0),
])
def test_verify_exit_codes(capsys, fixture_path, name, expected):
    code, out, _ = run(capsys, "verify-equivalence", fixture_path(name))
    assert code == expected
    rep = json.loads(out)
    assert rep["status"] == {0: "PASS", 1: "FAIL", 4: "INCONCLUSIVE"}[expected]
    assert rep["version"] == __version__ and "config_sha256" in rep and "seed" in rep


def test_seed_override_is_recorded(capsys, fixture_path):
    code, out, _ = run(capsys, "verify-equivalence", fixture_path("bilinear_power.json"), "--seed", "11")
    assert code == 0 and json.loads(out)["seed"] == 11


def test_estimate_constant(capsys, fixture_path):
    code, out, _ = run(capsys, "estimate-constant", fixture_path("bilinear_power.json"),
                       "--ineq", "H2", "--family", "truncated-dual", "--grid", "5")
    assert code == 0
    rec = json.loads(out)
    assert rec["bracket"]["lower"] >= math.sqrt(3) / 2 - 1e-6
    assert rec["bracket"]["condition"] == "D"
    code, _, _ = run(capsys, "estimate-constant", fixture_path("bilinear_power.json"), "--ineq", "H1")
    assert code == 2


def test_sweep_csv(capsys, fixture_path):
    code, out, _ = run(capsys, "sweep", fixture_path("bilinear_power.json"), "--axis", "lambda",
                       "--values=-4,-3,-2.5")
    assert code == 0
    rows = [r for r in csv_rows(out) if r["condition"] == "D[0]"]
    assert [r["value"] == "+inf" for r in rows] == [True, False, True]
    assert "config_sha256" in header(out)


def test_sweep_json_and_bad_values(capsys, fixture_path):
    code, out, _ = run(capsys, "sweep", fixture_path("bilinear_power.json"), "--axis", "q", "--values", "2",
                       "--format", "json")
    assert code == 0 and json.loads(out)["points"][0]["report"]["status"] == "PASS"
    code, _, _ = run(capsys, "sweep", fixture_path("bilinear_power.json"), "--axis", "q", "--values", "two")
    assert code == 2


def test_limit_check_table(capsys, fixture_path):
    code, out, _ = run(capsys, "limit-check", fixture_path("limit_check.json"))
    assert code == 0
    rows = csv_rows(out)
    assert [float(r["alpha"]) for r in rows] == [1.0, 0.1, 0.01, 0.001]
    gaps = [float(r["gap"]) for r in rows]
    assert gaps[-1] <= 1e-3 and gaps[1] > gaps[2] > gaps[3]
    assert header(out)["seed"] == "0"


def test_limit_check_constant(capsys):
    code, out, _ = run(capsys, "limit-check", "--f", '{"family": "constant", "value": 5}', "--x", "2")
    assert code == 0
    # exact up to rounding in the averaged logarithm
    assert all(float(r["gap"]) <= 5 * 1e-13 for r in csv_rows(out))


def test_limit_check_log_not_integrable(capsys, caplog):
    code, _, _ = run(capsys, "limit-check", "--f", '{"family": "indicator", "support": [1, 2]}', "--x", "3")
    assert code == 3 and "log not integrable" in caplog.text


def test_limit_check_needs_a_weight(capsys):
    code, _, _ = run(capsys, "limit-check")
    assert code == 2


def test_exactly_one_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
