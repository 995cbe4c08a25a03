import copy
import json
import math

import pytest

from hardykit.config import load_run_config, parse_run_config
from hardykit.equivalence import (
    pointwise_table,
    random_configs,
    run_suite,
    sweep,
    sweep_csv,
    with_axis,
)
from hardykit.errors import ConfigInvalid


@pytest.fixture(scope="module")
def bilinear_report(request):
    from conftest import FIXTURES
    return run_suite(load_run_config(FIXTURES / "bilinear_power.json"))


def test_default_bilinear_config_passes(bilinear_report):
    rep = bilinear_report
    assert rep.status == "PASS"
    assert rep.reference["id"] == "D"
    assert set(rep.conditions) == {"D[0]", "At1[0]", "At10[0]", "At11[0]"}
    assert rep.conditions["D[0]"]["value"] == pytest.approx(2 ** -0.5, abs=1e-6)
    for key, cv in rep.conditions.items():
        assert math.isfinite(cv["value"]) and cv["converged"], key
    assert set(rep.ratios) == {"At1[0]", "At10[0]", "At11[0]"}
    assert all(0 < r < math.inf for r in rep.ratios.values())


def test_identity_residual_on_default_config(bilinear_report):
    ident = bilinear_report.identities
    assert ident["I1[0]"]["residual"] <= 1e-8 and ident["I1[0]"]["points"] == 50
    assert ident["I2[0]"]["residual"] <= 1e-8


def test_divergent_tail_gives_uniform_infinity(fixture_path):
    rep = run_suite(load_run_config(fixture_path("divergent_tail.json")))
    assert rep.status == "PASS"
    assert rep.conditions and all(cv["value"] == math.inf for cv in rep.conditions.values())
    assert rep.invariants["finiteness_coherence"]["pattern_uniform"]


def test_loose_tolerance_is_inconclusive(fixture_path):
    assert run_suite(load_run_config(fixture_path("loose_tolerance.json"))).status == "INCONCLUSIVE"


def test_injected_mixed_finiteness_fails(fixture_path):
    rep = run_suite(load_run_config(fixture_path("mixed_finiteness.json")))
    assert rep.status == "FAIL"
    assert not rep.invariants["finiteness_coherence"]["pass"]


def test_reports_are_byte_identical(fixture_path):
    cfg = load_run_config(fixture_path("linear_power.json"))
    a = run_suite(cfg).to_json()
    b = run_suite(load_run_config(fixture_path("linear_power.json"))).to_json()
    assert a == b
    assert json.loads(a)["config_sha256"] == cfg.sha256


def test_ratios_are_stable_under_rescaling_u(fixture_path):
    doc = json.loads(fixture_path("linear_power.json").read_text())
    base = run_suite(parse_run_config(doc))
    scaled_doc = copy.deepcopy(doc)
    scaled_doc["weights"]["u"]["scale"] = 10.0
    scaled = run_suite(parse_run_config(scaled_doc))
    assert base.ratios.keys() == scaled.ratios.keys()
    for key, r in base.ratios.items():
        assert scaled.ratios[key] == pytest.approx(r, rel=1e-6), key


def test_power_sweep_finds_the_balanced_exponent(fixture_path):
    cfg = load_run_config(fixture_path("bilinear_power.json"))
    points = sweep(cfg, "lambda", [-4.0, -3.5, -3.0, -2.5])
    finite = {p.value: math.isfinite(p.report.conditions["D[0]"]["value"]) for p in points}
    assert finite == {-4.0: False, -3.5: False, -3.0: True, -2.5: False}
    assert all(p.report.status == "PASS" for p in points)
    csv_text = sweep_csv(points)
    assert csv_text.splitlines()[0].startswith("axis,axis_value,status")


def test_singleton_sweep_equals_run_suite(fixture_path):
    cfg = load_run_config(fixture_path("bilinear_power.json"))
    (point,) = sweep(cfg, "q", [2.0])
    assert point.report.to_dict()["conditions"] == run_suite(cfg).to_dict()["conditions"]


def test_side_condition_violations_are_collected(fixture_path):
    doc = json.loads(fixture_path("bilinear_power.json").read_text())
    doc["conditions"] = ["D", "At5"]  # At5 needs alpha > s1, alpha = 1/2
    points = sweep(doc, "s1", [0.25, 0.75])
    assert points[0].report is not None and points[0].report.status == "PASS"
    assert points[1].report is None and points[1].error["error"] == "SideConditionViolated"


def test_unknown_sweep_axis_is_rejected(fixture_path):
    doc = json.loads(fixture_path("bilinear_power.json").read_text())
    with pytest.raises(ConfigInvalid):
        with_axis(doc, "weights.u.rate", 1.0)


def test_default_scale_skips_and_records_side_conditions(fixture_path):
    rep = run_suite(load_run_config(fixture_path("linear_power.json")))
    skipped = {s["key"] for s in rep.skipped}
    assert "B8[1]" in skipped and "B9[0]" in skipped  # alpha > s and alpha < s
    assert "B8[0]" in rep.conditions and "B9[1]" in rep.conditions


def test_random_configs_are_seeded():
    kw = dict(suite="linear", exponents={"p": 2.0, "q": 3.0}, parameters=[{"s": 0.5}])
    a, b = random_configs(seed=5, **kw), random_configs(seed=5, **kw)
    assert a == b and len(a) == 20
    assert random_configs(seed=6, **kw) != a
    kinds = [d["name"].rsplit("-", 1)[0] for d in a]
    assert kinds.count("power") == 8 and kinds.count("mixed") == 4


def test_random_linear_configs_have_finite_reference():
    docs = random_configs("linear", {"p": 2.0, "q": 3.0}, [{"s": 0.5}], seed=2,
                          mix=(("power", 2), ("power_bounded", 1), ("exponential", 1), ("mixed", 1)),
                          conditions=["B2"])
    for d in docs:
        rep = run_suite(parse_run_config(d))
        assert math.isfinite(rep.conditions["B1[0]"]["value"]), d["name"]
        assert rep.status == "PASS", d["name"]


def test_pointwise_table(fixture_path):
    rows = pointwise_table(load_run_config(fixture_path("bilinear_power.json")), n=9)
    conds = {r["condition"] for r in rows}
    assert conds == {"D[0]", "At1[0]", "At10[0]", "At11[0]"}
    d_rows = [r for r in rows if r["condition"] == "D[0]"]
    assert len(d_rows) == 9
    assert all(r["value"] == pytest.approx(2 ** -0.5, rel=1e-9) for r in d_rows)
