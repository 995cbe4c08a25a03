import math

import numpy as np
import pytest

from hardykit.bilinear import (
    AT_IDS,
    BilinearContext,
    BilinearParams,
    bilinear_D,
    eval_A_tilde,
    eval_bilinear_pointwise,
    evaluate_bilinear,
    hardy_bilinear_params,
    inf_bilinear,
)
from hardykit.equivalence import identity_residuals
from hardykit.errors import ExponentOutOfRange, MissingAuxFunction, SideConditionViolated
from hardykit.formula import AuxFunctionSpec
from hardykit.quadrature import QuadratureSettings
from hardykit.weights import Constant, Exponential, Power, Product

G, H = AuxFunctionSpec("G"), AuxFunctionSpec("H")
HALF = 0.5


@pytest.fixture(scope="module")
def power_ctx():
    # u = x^-3, v1 = v2 = 1, p1 = p2 = 2: U = x^-2 / 2, V1 = V2 = x
    return BilinearContext.hardy(Power(-3.0), Constant(1.0), Constant(1.0), 2.0, 2.0)


@pytest.fixture(scope="module")
def curved_ctx():
    # weights whose cumulative integrals have no closed form
    return BilinearContext(
        Product((Power(-2.5), Exponential(-0.3))),
        Product((Power(0.5), Exponential(0.1))),
        Product((Power(-0.2), Exponential(-0.05))),
    )


def test_bt1_pointwise_example(power_ctx):
    params = BilinearParams(HALF, HALF, HALF)
    assert eval_bilinear_pointwise("Bt1", 1.0, params, power_ctx) == pytest.approx(2 ** -0.5, rel=1e-14)


def test_bt1_sup_is_constant(power_ctx):
    cv = evaluate_bilinear("Bt1", BilinearParams(HALF, HALF, HALF), power_ctx)
    assert cv.value == pytest.approx(2 ** -0.5, abs=1e-6)


def test_bt2_at_s_equal_beta_gamma_reduces_to_bt1(curved_ctx):
    params = BilinearParams(0.3, 0.4, 0.6, s1=0.4, s2=0.6)
    xs = np.geomspace(1e-3, 1e3, 30)
    assert np.allclose(eval_bilinear_pointwise("Bt2", xs, params, curved_ctx),
                       eval_bilinear_pointwise("Bt1", xs, params, curved_ctx), rtol=1e-9, atol=0)


@pytest.mark.parametrize("s1, s2", [(0.25, 0.35), (0.75, 0.75), (1.5, 0.4)])
def test_exact_identities(curved_ctx, s1, s2):
    params = BilinearParams(0.25, 0.2, 0.3, s1=s1, s2=s2)
    res = identity_residuals(curved_ctx, params, 50)
    for name in ("I1", "I2"):
        assert res[name]["points"] == 50
        assert res[name]["residual"] <= 1e-8, (name, res[name])


def test_bt18_with_canonical_pair_is_two_to_the_s_times_bt2(power_ctx):
    params = BilinearParams(HALF, HALF, HALF, s1=0.75, s2=0.75)
    bt2 = evaluate_bilinear("Bt2", params, power_ctx).value
    bt18 = inf_bilinear("Bt18", params, power_ctx, candidates1=[G], candidates2=[H]).value
    assert bt18 == pytest.approx(2 ** 1.5 * bt2, rel=1e-8)


def test_larger_candidate_grid_never_increases_the_value(power_ctx):
    params = BilinearParams(HALF, HALF, HALF, s1=0.75, s2=0.75)
    canonical = inf_bilinear("Bt18", params, power_ctx, candidates1=[G], candidates2=[H]).value
    wide = inf_bilinear("Bt18", params, power_ctx,
                        candidates1=[AuxFunctionSpec("G", c) for c in (0.25, 1.0, 4.0)],
                        candidates2=[AuxFunctionSpec("H", c) for c in (0.25, 1.0, 4.0)])
    assert wide.value <= canonical * (1 + 1e-12)
    assert wide.upper_bound


def test_bt16_with_h1_equal_h_closed_form(power_ctx):
    # (int_x^inf t^-3 t^(1-2s))^(1/2) x^(1/2) (2x)^s = 2^s / sqrt(1 + 2s)
    s = 1.0
    params = BilinearParams(HALF, HALF, HALF, s=s)
    cv = evaluate_bilinear("Bt16", params, power_ctx)
    assert cv.value == pytest.approx(2 ** s / math.sqrt(1 + 2 * s), rel=1e-8)


def test_inf_type_needs_aux_functions(power_ctx):
    params = BilinearParams(HALF, HALF, HALF, s1=0.75, s2=0.75)
    with pytest.raises(MissingAuxFunction):
        eval_bilinear_pointwise("Bt18", 1.0, params, power_ctx)


@pytest.mark.parametrize("cid, params", [
    ("Bt6", BilinearParams(0.5, 0.5, 0.5, s1=0.75, s2=0.1)),
    ("Bt8", BilinearParams(0.5, 0.5, 0.5, s1=0.25, s2=0.1)),
    ("Bt14", BilinearParams(0.5, 0.5, 0.5, s=0.75)),
    ("Bt15", BilinearParams(0.5, 0.5, 0.5, s=0.25)),
    ("Bt16", BilinearParams(0.5, 0.5, 0.5, s=0.25)),
    ("Bt18", BilinearParams(0.5, 0.5, 0.5, s1=0.25, s2=0.75)),
])
def test_side_conditions_fail_fast(power_ctx, cid, params):
    with pytest.raises(SideConditionViolated):
        evaluate_bilinear(cid, params, power_ctx)


# -- condition D ------------------------------------------------------------------


def test_condition_d_examples():
    u, one = Power(-3.0), Constant(1.0)
    assert bilinear_D(u, one, one, 2.0, 2.0, 2.0).value == pytest.approx(2 ** -0.5, abs=1e-6)
    with pytest.raises(ExponentOutOfRange):
        bilinear_D(u, one, one, 2.0, 2.0, 1.5)
    scaled = bilinear_D(u, Constant(4.0), one, 2.0, 2.0, 2.0).value
    assert scaled == pytest.approx(0.5 * 2 ** -0.5, rel=1e-9)


def test_condition_d_is_symmetric():
    u = Product((Power(-2.2), Exponential(-0.4)))
    v1, v2 = Power(0.3), Product((Constant(2.0), Exponential(0.2)))
    d12 = bilinear_D(u, v1, v2, 2.0, 3.0, 4.0).value
    d21 = bilinear_D(u, v2, v1, 3.0, 2.0, 4.0).value
    assert d12 == pytest.approx(d21, rel=1e-12)


# -- the A-tilde scale ------------------------------------------------------------


def test_a_tilde_is_the_shifted_b_tilde_bit_for_bit(curved_ctx):
    p1, p2, q = 2.0, 3.0, 4.0
    u, v1, v2 = Product((Power(-2.5), Exponential(-0.3))), Power(0.4), Constant(2.0)
    ctx = BilinearContext.hardy(u, v1, v2, p1, p2)
    for i, s1, s2 in ((1, 0.1, 0.1), (3, 0.1, 0.2), (9, 1.0, 1.0), (12, 1.0, 1.0)):
        at = eval_A_tilde(i, u, v1, v2, p1, p2, q, s=0.5, s1=s1, s2=s2, ctx=ctx)
        params = hardy_bilinear_params(p1, p2, q, 0.5, s1, s2)
        bt = evaluate_bilinear(f"Bt{i + 1}", params, ctx)
        assert at.value == bt.value and at.witness == bt.witness


def test_a_tilde_independent_recomputation():
    # At1 = Bt2 at alpha = beta = gamma = 1/2 on the power config is 1 / sqrt(2 (s1 + s2)) for every x
    settings = QuadratureSettings(rel_tol=1e-14)
    ctx = BilinearContext.hardy(Power(-3.0), Constant(1.0), Constant(1.0), 2.0, 2.0, settings)
    s1, s2 = 0.75, 0.75
    params = hardy_bilinear_params(2.0, 2.0, 2.0, None, s1, s2)
    vals = eval_bilinear_pointwise("At1", np.array([0.3, 1.7, 25.0]), params, ctx)
    assert np.allclose(vals, 1 / math.sqrt(2 * (s1 + s2)), rtol=1e-12, atol=0)


def test_a1_at_dual_exponents_reduces_to_d():
    u, one = Power(-3.0), Constant(1.0)
    at1 = eval_A_tilde(1, u, one, one, 2.0, 2.0, 2.0, s1=0.5, s2=0.5)
    assert at1.value == pytest.approx(bilinear_D(u, one, one, 2.0, 2.0, 2.0).value, rel=1e-9)


def test_a10_is_within_ten_of_d():
    u, one = Power(-3.0), Constant(1.0)
    d = bilinear_D(u, one, one, 2.0, 2.0, 2.0).value
    a10 = eval_A_tilde(10, u, one, one, 2.0, 2.0, 2.0, s=0.25, s1=0.75, s2=0.75).value
    assert math.isfinite(a10) and 0.1 <= a10 / d <= 10


def test_every_a_tilde_is_finite_on_the_power_config():
    u, one = Power(-3.0), Constant(1.0)
    ctx = BilinearContext.hardy(u, one, one, 2.0, 2.0)
    for s1 in (0.25, 1.0):
        for cid in AT_IDS:
            try:
                cv = eval_A_tilde(int(cid[2:]), u, one, one, 2.0, 2.0, 2.0, s=s1, s1=s1, s2=s1, ctx=ctx)
            except SideConditionViolated:
                continue
            assert math.isfinite(cv.value) and cv.value > 0, (cid, s1)


def test_bt10_diverges_while_bt1_is_finite():
    # F = x^-4, G = x, H = x^3 with alpha = beta = gamma = 1/2: F^a G^b H^c = 1 for every x.
    # The inner integral of Bt10, int_0^x g F^((a/2)/(b+s1)), converges at 0 only when
    # 1 > 4 (1/4) / (1/2 + s1), i.e. s1 > 1/2.
    ctx = BilinearContext(Power(-5.0) * 4.0, Constant(1.0), Power(2.0) * 3.0)
    small = BilinearParams(HALF, HALF, HALF, s1=0.1, s2=0.1)
    large = BilinearParams(HALF, HALF, HALF, s1=1.0, s2=1.0)
    assert evaluate_bilinear("Bt1", small, ctx).value == pytest.approx(1.0, abs=1e-6)
    assert evaluate_bilinear("Bt10", small, ctx).value == math.inf
    assert math.isfinite(evaluate_bilinear("Bt10", large, ctx).value)
