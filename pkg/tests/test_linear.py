import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hardykit.errors import ConfigInvalid, SideConditionViolated
from hardykit.formula import AuxFunctionSpec
from hardykit.linear import (
    LINEAR_IDS,
    LinearContext,
    LinearParams,
    TRUNCATED_ITEMS,
    eval_linear_pointwise,
    evaluate_linear,
    hardy_params,
    muckenhoupt_AM,
    sup_linear,
    truncated_pair,
)
from hardykit.weights import Constant, Indicator, Interval, Power, Product, scale

RIGHT = Interval(1.0, math.inf)
G = AuxFunctionSpec("G")
F = AuxFunctionSpec("F")


@pytest.fixture(scope="module")
def hardy_ctx():
    # u = x^-3, v = x^(-1/3), p = 2, q = 3: the Muckenhoupt function is constant
    return LinearContext.hardy(Power(-3.0), Power(-1.0 / 3.0), 2.0)


def test_b1_pointwise_example():
    ctx = LinearContext(Power(-2.0, RIGHT), Constant(1.0, RIGHT))
    assert eval_linear_pointwise("B1", 2.0, LinearParams(1.0, 1.0), ctx) == pytest.approx(0.5, rel=1e-14)


def test_b2_at_s_equal_beta_reduces_to_b1(hardy_ctx):
    params = LinearParams(1 / 3, 0.5, 0.5)
    xs = np.geomspace(1e-4, 1e4, 50)
    b1 = eval_linear_pointwise("B1", xs, params, hardy_ctx)
    b2 = eval_linear_pointwise("B2", xs, params, hardy_ctx)
    assert np.allclose(b2, b1, rtol=1e-9, atol=0)


def test_muckenhoupt_is_b1_bit_for_bit(hardy_ctx):
    u, v = Power(-3.0), Power(-1.0 / 3.0)
    am = muckenhoupt_AM(u, v, 2.0, 3.0)
    b1 = sup_linear("B1", hardy_params(2.0, 3.0), LinearContext.hardy(u, v, 2.0))
    assert am.value == b1.value and am.witness == b1.witness


@pytest.mark.parametrize("u, expected", [
    (Power(-2.0), 1.0),
    (Indicator(0.0, 1.0), 0.5),
    (Constant(1.0), math.inf),
])
def test_muckenhoupt_examples(u, expected):
    cv = muckenhoupt_AM(u, Constant(1.0), 2.0, 2.0)
    if math.isinf(expected):
        assert cv.value == math.inf
    else:
        assert cv.value == pytest.approx(expected, abs=1e-6)


def test_muckenhoupt_unbalanced_power_is_infinite():
    assert muckenhoupt_AM(Power(-2.5), Constant(1.0), 2.0, 2.0).value == math.inf


def test_scale_invariance(hardy_ctx):
    params = LinearParams(1 / 3, 0.5)
    base = sup_linear("B1", params, hardy_ctx).value
    v = Power(-1.0 / 3.0)
    for c in (0.5, 2.0, 10.0):
        ctx = LinearContext.hardy(scale(Power(-3.0), c), v, 2.0)
        assert sup_linear("B1", params, ctx).value == pytest.approx(c ** params.alpha * base, rel=1e-12)


def test_singleton_sub_interval_tends_to_pointwise(hardy_ctx):
    params = LinearParams(1 / 3, 0.5, 0.25)
    x0 = 2.0
    point = eval_linear_pointwise("B6", x0, params, hardy_ctx)
    cv = evaluate_linear("B6", params, hardy_ctx, Interval(x0, x0 * (1 + 1e-9)))
    assert cv.value == pytest.approx(point, rel=1e-6)


def test_b12_with_g_is_two_to_the_s_times_b2(hardy_ctx):
    params = LinearParams(1 / 3, 0.5, 1.0)
    b2 = evaluate_linear("B2", params, hardy_ctx).value
    b12 = evaluate_linear("B12", params, hardy_ctx, candidates=[G]).value
    assert b12 == pytest.approx(2.0 ** params.s * b2, rel=1e-8)


def test_b14_with_g_is_two_to_the_beta_plus_s_times_b4(hardy_ctx):
    params = LinearParams(1 / 3, 0.5, 0.25)
    xs = np.geomspace(1e-3, 1e3, 25)
    b4 = eval_linear_pointwise("B4", xs, params, hardy_ctx)
    b14 = eval_linear_pointwise("B14", xs, params, hardy_ctx, G)
    assert np.allclose(b14, 2.0 ** (params.beta + params.s) * b4, rtol=1e-9, atol=0)


@pytest.mark.parametrize("cid", ["B12", "B13", "B14", "B15"])
def test_candidate_superset_never_increases_the_value(hardy_ctx, cid):
    params = LinearParams(1 / 3, 0.5, 1.0)
    base = "G" if cid in ("B12", "B14") else "F"
    single = evaluate_linear(cid, params, hardy_ctx, candidates=[AuxFunctionSpec(base)])
    full = evaluate_linear(cid, params, hardy_ctx)
    assert full.value <= single.value * (1 + 1e-12)
    assert full.upper_bound and full.best_aux is not None


@pytest.mark.parametrize("cid, params", [
    ("B8", LinearParams(0.5, 0.5, 1.0)),
    ("B9", LinearParams(0.5, 0.5, 0.25)),
    ("B10", LinearParams(0.5, 0.5, 1.0)),
    ("B11", LinearParams(0.5, 0.5, 0.25)),
    ("B12", LinearParams(0.5, 0.5, 0.25)),
    ("B13", LinearParams(0.5, 0.5, 0.25)),
])
def test_side_conditions_fail_fast(hardy_ctx, cid, params):
    with pytest.raises(SideConditionViolated):
        evaluate_linear(cid, params, hardy_ctx)


def test_b14_b15_carry_no_side_condition(hardy_ctx):
    for s in (0.1, 2.0):
        params = LinearParams(1 / 3, 0.5, s)
        assert math.isfinite(evaluate_linear("B14", params, hardy_ctx).value)
        assert math.isfinite(evaluate_linear("B15", params, hardy_ctx).value)


def test_parameters_must_be_positive():
    with pytest.raises(ConfigInvalid):
        LinearParams(0.0, 0.5)
    with pytest.raises(ConfigInvalid):
        LinearParams(0.5, 0.5, -1.0)
    with pytest.raises(ConfigInvalid):
        evaluate_linear("B99", LinearParams(0.5, 0.5, 0.1), LinearContext(Power(-2.0), Constant(1.0)))


def test_every_condition_is_finite_on_a_balanced_config(hardy_ctx):
    for s in (0.1, 1.0):
        params = LinearParams(1 / 3, 0.5, s)
        for cid in LINEAR_IDS:
            if cid == "AM":
                continue
            try:
                cv = evaluate_linear(cid, params, hardy_ctx)
            except SideConditionViolated:
                continue
            assert math.isfinite(cv.value) and cv.value > 0, cid
            assert cv.converged, cid


@given(st.floats(-6.0, 2.0), st.floats(0.0, 0.8))
def test_witness_in_sub_interval_and_value_dominates_samples(lo_log, width):
    # sub-intervals stay inside the support of u, where every factor is positive
    ctx = LinearContext.hardy(Product((Power(-2.0), Indicator(0.0, 20.0))), Constant(1.0), 2.0)
    params = LinearParams(0.5, 0.5, 0.25)
    sub = Interval(math.exp(lo_log), math.exp(lo_log + width + 0.1))
    cv = evaluate_linear("B6", params, ctx, sub)
    assert sub.a <= cv.witness <= sub.b
    xs = np.geomspace(sub.a, sub.b, 40)[1:-1]
    sampled = eval_linear_pointwise("B6", xs, params, ctx)
    assert cv.value >= np.nanmax(sampled) * (1 - 1e-9)


def test_truncated_pairs_cover_all_items():
    ctx = LinearContext.hardy(Power(-3.0), Power(-1.0 / 3.0), 2.0)
    assert len(TRUNCATED_ITEMS) == 14
    for item, (_, cid) in TRUNCATED_ITEMS.items():
        s = 1.0 if cid in ("B9", "B11", "B12", "B13") else 0.25
        lhs, rhs = truncated_pair(item, LinearParams(1 / 3, 0.5, s), ctx, 1.0)
        assert lhs.value > 0 and math.isfinite(lhs.value), item
        assert rhs.value > 0 and math.isfinite(rhs.value), item


def test_truncation_point_must_be_interior():
    ctx = LinearContext.hardy(Power(-3.0, RIGHT), Constant(1.0, RIGHT), 2.0)
    with pytest.raises(ConfigInvalid):
        truncated_pair("i", LinearParams(0.5, 0.5, 0.25), ctx, 0.5)
