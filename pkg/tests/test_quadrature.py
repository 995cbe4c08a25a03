import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate as sp_integrate

from hardykit.errors import ConfigInvalid, DivergentTail
from hardykit.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    QuadratureSettings,
    cumulative_eval,
    gk_batch,
    integrate,
    integrate_function,
    lower_tail,
    upper_tail,
)
from hardykit.weights import Constant, Exponential, Indicator, Interval, LogPower, Power, Product

HALF_LINE = Interval(0.0, math.inf)
RIGHT = Interval(1.0, math.inf)


def test_gauss_kronrod_constants():
    g_nodes, g_weights = np.polynomial.legendre.leggauss(10)
    mask = GAUSS_WEIGHTS != 0
    assert np.allclose(np.sort(NODES[mask]), g_nodes, rtol=0, atol=1e-15)
    assert np.allclose(GAUSS_WEIGHTS[mask][np.argsort(NODES[mask])], g_weights, rtol=0, atol=1e-15)
    assert math.isclose(KRONROD_WEIGHTS.sum(), 2.0, rel_tol=1e-15)
    # the 21-point Kronrod rule is exact for polynomials of degree 31
    for k in range(0, 32, 3):
        exact = (1 - (-1) ** (k + 1)) / (k + 1)
        assert math.isclose(float(np.dot(KRONROD_WEIGHTS, NODES ** k)), exact, abs_tol=1e-14)


def test_integrate_examples():
    assert integrate(Power(-2.0, RIGHT), 1.0, math.inf) == pytest.approx(1.0, rel=1e-12)
    assert integrate(Constant(0.0), 2.0, 7.0) == 0.0
    assert integrate(Exponential(-1.0), 0.0, math.inf) == pytest.approx(1.0, rel=1e-12)


def test_integrate_examples_by_quadrature():
    assert integrate(Power(-2.0, RIGHT), 1.0, math.inf, force_quadrature=True) == pytest.approx(1.0, rel=1e-9)
    assert integrate(Exponential(-1.0), 0.0, math.inf, force_quadrature=True) == pytest.approx(1.0, rel=1e-9)


def test_divergent_integrals_are_infinite():
    assert integrate(Power(-1.0), 1.0, math.inf) == math.inf
    assert integrate(Power(-1.5), 0.0, 1.0, force_quadrature=True) == math.inf


@pytest.mark.parametrize("w, lo, hi", [
    (LogPower(-0.5, 2.0), 0.0, 1.0),
    (LogPower(-2.0, 1.0), 2.0, math.inf),
    (Product((Power(-0.7), Exponential(-0.5))), 0.0, math.inf),
    (Power(-0.9), 0.0, 3.0),
])
def test_against_scipy(w, lo, hi):
    ref, err = sp_integrate.quad(lambda t: float(w(np.array([t]))[0]), lo, hi, limit=500, epsabs=0, epsrel=1e-11)
    assert integrate(w, lo, hi, force_quadrature=True) == pytest.approx(ref, rel=1e-8)


def test_gk_batch_vectorises_over_panels():
    lo = np.array([0.0, 1.0, 2.0])
    hi = np.array([1.0, 3.0, 2.5])
    vals, errs, conv = gk_batch(lambda t: t ** 2, lo, hi)
    assert np.allclose(vals, (hi ** 3 - lo ** 3) / 3, rtol=1e-14)
    assert conv.all()


def test_settings_validation():
    with pytest.raises(ConfigInvalid):
        QuadratureSettings(rel_tol=0.0)
    with pytest.raises(ConfigInvalid):
        QuadratureSettings(max_subdivisions=0)
    with pytest.raises(ConfigInvalid):
        QuadratureSettings.from_dict({"reltol": 1e-8})


# -- cumulative integrals ---------------------------------------------------------


def test_cumulative_examples():
    U = upper_tail(Power(-2.0, RIGHT))
    assert cumulative_eval(U, 2.0) == pytest.approx(0.5, rel=1e-14)
    assert cumulative_eval(U, 4.0) == pytest.approx(0.25, rel=1e-14)
    assert cumulative_eval(upper_tail(Indicator(0.0, 1.0)), 2.0) == 0.0
    assert cumulative_eval(upper_tail(Exponential(-1.0)), 1e-12) == pytest.approx(1.0, rel=1e-11)
    V = lower_tail(Constant(1.0))
    assert cumulative_eval(V, 3.0) == pytest.approx(3.0, rel=1e-14)
    assert cumulative_eval(V, 0.001) == pytest.approx(0.001, rel=1e-14)
    assert cumulative_eval(lower_tail(Power(-0.5)), 4.0) == pytest.approx(4.0, rel=1e-14)
    with pytest.raises(DivergentTail):
        lower_tail(Power(-2.0))


def test_cumulative_cache_is_deterministic():
    U = upper_tail(Product((Power(-2.0), Exponential(-0.1))))
    first = cumulative_eval(U, 1.7)
    assert cumulative_eval(U, 1.7) == first
    xs = np.geomspace(1e-3, 1e3, 17)
    fresh = upper_tail(Product((Power(-2.0), Exponential(-0.1))))
    assert np.array_equal(U(xs[::-1])[::-1], fresh(xs))


@pytest.mark.parametrize("w, kind", [
    (Power(-2.0, RIGHT), "upper"),
    (Power(-0.5), "lower"),
    (Power(1.5), "lower"),
    (Power(-3.0, Interval(0.0, math.inf)), "upper"),
    (Exponential(-1.0), "upper"),
    (Exponential(0.7), "lower"),
    (Product((Constant(2.0), Power(-1.5))), "upper"),
])
def test_closed_form_and_quadrature_paths_agree(w, kind):
    tail = upper_tail if kind == "upper" else lower_tail
    closed, quad = tail(w), tail(w, force_quadrature=True)
    a = w.interval.a
    xs = a + np.geomspace(1e-4, 1e4, 41)
    if w.interval.b < math.inf:
        xs = xs[xs < w.interval.b]
    assert np.allclose(quad(xs), closed(xs), rtol=1e-8, atol=0)


def test_tables_reach_far_into_the_tails():
    w = Power(-2.0)
    quad = upper_tail(w, force_quadrature=True)
    xs = np.exp(np.array([-200.0, -50.0, 0.0, 50.0, 200.0]))
    assert np.allclose(quad(xs), 1.0 / xs, rtol=1e-9, atol=0)


@given(st.lists(st.floats(1e-3, 1e3), min_size=2, max_size=30))
def test_cumulatives_are_monotone(points):
    xs = np.array(sorted(set(points)))
    U = upper_tail(Product((Power(-1.5), Exponential(-0.3))), force_quadrature=True)
    V = lower_tail(Product((Power(0.5), Indicator(0.0, 5.0))), force_quadrature=True)
    u, v = U(xs), V(xs)
    assert np.all(np.diff(u) <= 1e-14 + 1e-9 * u[:-1])
    assert np.all(np.diff(v) >= -(1e-14 + 1e-9 * v[1:]))
    assert np.all(u >= 0) and np.all(v >= 0)
    assert U.monotone() and V.monotone()


@given(st.floats(0.0, 1.0), st.floats(0.01, 0.99), st.floats(0.0, 1.0))
def test_additivity(u_lo, frac, u_hi):
    settings = QuadratureSettings()
    w = LogPower(-0.5, 1.0)
    lo = 0.01 + 2 * u_lo
    hi = lo + 0.5 + 10 * u_hi
    mid = lo + frac * (hi - lo)
    whole = integrate(w, lo, hi, settings, force_quadrature=True)
    parts = integrate(w, lo, mid, settings, True) + integrate(w, mid, hi, settings, True)
    assert abs(parts - whole) <= 10 * settings.rel_tol * abs(whole)


def test_integrate_function_reports_heuristic_divergence():
    r = integrate_function(lambda t: 1.0 / (t * np.log(t) ** 0.5 + 0 * t), 2.0, math.inf)
    assert r.value == math.inf
    assert r.diagnostics["heuristic"]
