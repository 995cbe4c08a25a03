import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardykit.errors import DivergentTail, ExponentOutOfRange, LogNotIntegrable
from hardykit.geomean import (
    GeoMeanContext,
    averaging_A,
    condition_scriptB,
    condition_scriptB_bilinear,
    geomean_T,
    limit_check_LHA,
)
from hardykit.weights import Constant, Exponential, Indicator, Interval, LogPower, Power, Product, Tabulated, scale

ONE = Constant(1.0)
positive_weights = st.sampled_from([
    Power(1.0), Power(-0.5), Power(2.5), Exponential(-1.0), Exponential(0.3), Constant(3.0),
    Product((Power(0.5), Exponential(-0.2))), LogPower(0.5, 1.0),
    Tabulated((0.0, 1.0, 2.0, 5.0), (1.0, 3.0, 0.5, 2.0), Interval(0.0, 5.0)),
])
points = st.floats(0.05, 4.5)


def test_averaging_examples():
    assert averaging_A(Constant(2.5), 3.0) == pytest.approx(2.5, rel=1e-14)
    assert averaging_A(Power(1.0), 2.0) == pytest.approx(1.0, rel=1e-14)
    with pytest.raises(DivergentTail):
        averaging_A(Power(-2.0), 1.0)


def test_geometric_mean_examples():
    assert geomean_T(Constant(7.0), 0.3) == pytest.approx(7.0, rel=1e-14)
    assert geomean_T(Power(1.0), 1.0) == pytest.approx(math.exp(-1), rel=1e-13)
    assert geomean_T(Power(1.0), math.e) == pytest.approx(1.0, rel=1e-13)


def test_geometric_mean_by_quadrature_matches_closed_form():
    # exp(-t) has ln f = -t: T f(x) = exp(-x / 2)
    for x in (0.1, 1.0, 7.0):
        assert geomean_T(Exponential(-1.0), x) == pytest.approx(math.exp(-x / 2), rel=1e-10)


def test_vanishing_weight_has_no_geometric_mean():
    with pytest.raises(LogNotIntegrable):
        geomean_T(Indicator(1.0, 2.0), 3.0)


def test_limit_check_examples():
    for a in (1.0, 0.1, 0.001):
        assert limit_check_LHA(Constant(5.0), 2.0, a).gap <= 1e-12
    last = limit_check_LHA(Power(1.0), 1.0, 1e-3)
    assert abs(last.lhs - 1 / math.e) <= 1e-3
    assert last.lhs == pytest.approx((1 / (1 + 1e-3)) ** 1e3, rel=1e-10)
    gaps = [limit_check_LHA(Power(1.0), 1.0, a).gap for a in (0.1, 0.01, 0.001)]
    assert gaps[0] > gaps[1] > gaps[2]


@settings(max_examples=50)
@given(positive_weights, positive_weights, points)
def test_multiplicativity(f, g, x):
    if x > min(f.interval.b, g.interval.b):
        return
    prod = geomean_T(Product((f, g)), x)
    assert prod == pytest.approx(geomean_T(f, x) * geomean_T(g, x), rel=1e-9)


@given(positive_weights, st.floats(0.01, 100.0), points)
def test_homogeneity(f, c, x):
    if x > f.interval.b:
        return
    ctx, scaled = GeoMeanContext(f), GeoMeanContext(scale(f, c))
    shift = scaled.log_T(np.array([x]))[0] - ctx.log_T(np.array([x]))[0]
    assert shift == pytest.approx(math.log(c), abs=1e-12)


@given(positive_weights, points)
def test_geometric_mean_is_below_the_average(f, x):
    if x > f.interval.b:
        return
    assert geomean_T(f, x) <= averaging_A(f, x) * (1 + 1e-10)


@given(positive_weights, st.floats(0.2, 3.0))
def test_power_means_converge(f, x):
    if x > f.interval.b:
        return
    g2 = limit_check_LHA(f, x, 1e-2).gap
    g3 = limit_check_LHA(f, x, 1e-3).gap
    assert g3 <= 10 * g2 or g2 < 1e-14


# -- conditions -------------------------------------------------------------------


def test_condition_b_examples():
    assert condition_scriptB(Indicator(0.0, 1.0), ONE, 2.0, 2.0).value == pytest.approx(1.0, abs=1e-6)
    assert condition_scriptB(ONE, ONE, 2.0, 2.0).value == pytest.approx(1.0, abs=1e-6)
    base = condition_scriptB(Indicator(0.0, 1.0), ONE, 2.0, 2.0).value
    assert condition_scriptB(Indicator(0.0, 1.0), Constant(4.0), 2.0, 2.0).value == pytest.approx(base / 2, rel=1e-9)
    with pytest.raises(ExponentOutOfRange):
        condition_scriptB(ONE, ONE, 3.0, 2.0)


def test_condition_b_accepts_exponents_below_one():
    cv = condition_scriptB(Indicator(0.0, 1.0), ONE, 0.5, 0.5)
    # sup_t t^-2 min(t, 1)^2 = 1
    assert cv.value == pytest.approx(1.0, abs=1e-6)


def test_bilinear_condition_examples():
    u = Product((Power(3.0), Indicator(0.0, 1.0)))
    assert condition_scriptB_bilinear(u, ONE, ONE, 2.0, 2.0, 4.0).value == pytest.approx(2 ** -0.5, abs=1e-6)
    assert condition_scriptB_bilinear(Indicator(0.0, 1.0), ONE, ONE, 2.0, 2.0, 4.0).value == math.inf
    with pytest.raises(ExponentOutOfRange):
        condition_scriptB_bilinear(u, ONE, ONE, 2.0, 2.0, 2.0)


def test_condition_b_with_curved_weights_by_quadrature():
    # v = e^x: T(1/v)(s) = e^(-s/2); u = 1 on (0, 1), p = q = 1:
    # B = sup_t t^-1 int_0^min(t,1) e^(-s/2) ds, attained as t -> 0 with value 1
    cv = condition_scriptB(Indicator(0.0, 1.0), Exponential(1.0), 1.0, 1.0)
    assert cv.value == pytest.approx(1.0, abs=1e-6)
