"""Averaging and geometric-mean operators and the conditions for their weighted inequalities.

``(A f)(x) = (1/x) int_0^x f`` and ``(T f)(x) = exp((1/x) int_0^x ln f)``.
``T`` is the limit of ``((A f^a)(x))^(1/a)`` as ``a -> 0``.  Everything is
computed in log space, so reciprocals such as ``T(1/v)`` never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigInvalid, DivergentTail, ExponentOutOfRange, LogNotIntegrable, PointOutsideDomain
from .formula import ConditionValue
from .quadrature import (
    DEFAULT_SETTINGS,
    LOWER_TAIL,
    CumulativeIntegral,
    QuadratureSettings,
    integrate,
)
from .supremum import SupSettings, sup_function
from .weights import Interval, Weight, power_transform

INF = math.inf


def _check_origin(w: Weight, what: str) -> None:
    if w.interval.a != 0.0:
        raise ConfigInvalid(f"{what} must be defined on an interval starting at 0, got {tuple(w.interval)}")


class GeoMeanContext:
    """``f`` together with the running integral of ``ln f`` from 0."""

    def __init__(self, f: Weight, settings: QuadratureSettings = DEFAULT_SETTINGS):
        _check_origin(f, "the weight of a geometric mean")
        self.f = f
        self.settings = settings
        self.positive_until = f.positive_until()
        probe = min(1.0, 0.5 * self.positive_until) if self.positive_until > 0 else None
        self._closed = probe is not None and f.log_integral(0.0, probe) is not None
        self._log_cum: CumulativeIntegral | None = None

    def _cumulative(self) -> CumulativeIntegral:
        if self._log_cum is None:
            f = self.f

            def logf(t):
                with np.errstate(divide="ignore", invalid="ignore"):
                    return np.log(f(t))

            iv = Interval(0.0, self.positive_until)
            try:
                self._log_cum = CumulativeIntegral(
                    LOWER_TAIL, logf, iv, self.settings,
                    breakpoints=f.breakpoints + f.singularities, signed=True, name="log integral",
                )
            except DivergentTail as exc:
                raise LogNotIntegrable(f"ln f is not integrable near 0: {exc}") from None
        return self._log_cum

    def log_integral(self, x) -> np.ndarray:
        """``int_0^x ln f`` (``-inf`` where f vanishes on part of ``(0, x)``)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(x <= 0) or np.any(x > self.f.interval.b):
            raise PointOutsideDomain("geometric means are evaluated at 0 < x <= b")
        out = np.full_like(x, -INF)
        ok = x <= self.positive_until
        if np.any(ok):
            if self._closed:
                vals = [self.f.log_integral(0.0, float(v)) for v in x[ok]]
                out[ok] = np.asarray(vals, dtype=float)
            else:
                out[ok] = self._cumulative()(x[ok])
        if np.any(np.isnan(out)) or np.any(out == INF):
            raise LogNotIntegrable("the integral of ln f is undefined on (0, x)")
        return out

    def log_T(self, x, allow_zero: bool = False) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        L = self.log_integral(x)
        if not allow_zero and np.any(L == -INF):
            bad = float(x[np.argmax(L == -INF)])
            raise LogNotIntegrable(
                f"ln f is not integrable on (0, {bad}): f vanishes on a set of positive measure"
            )
        return L / x

    def T(self, x, allow_zero: bool = False) -> np.ndarray:
        return np.exp(self.log_T(x, allow_zero))


def averaging_A(f: Weight, x: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """``(1/x) int_0^x f``."""
    _check_origin(f, "the averaged weight")
    x = float(x)
    if not 0 < x <= f.interval.b:
        raise PointOutsideDomain(f"x={x} must satisfy 0 < x <= {f.interval.b}")
    total = integrate(f, 0.0, x, settings)
    if math.isinf(total):
        raise DivergentTail(f"int_0^{x} f diverges")
    return total / x


def geomean_T(f: Weight, x: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """``exp((1/x) int_0^x ln f)``."""
    return float(GeoMeanContext(f, settings).T(np.array([float(x)]))[0])


@dataclass(frozen=True)
class LimitCheck:
    alpha: float
    lhs: float
    rhs: float
    gap: float


def limit_check_LHA(f: Weight, x: float, alpha: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> LimitCheck:
    """Compare ``((A f^alpha)(x))^(1/alpha)`` with ``(T f)(x)``."""
    if not alpha > 0:
        raise ConfigInvalid("alpha must be positive")
    rhs = geomean_T(f, x, settings)
    avg = averaging_A(power_transform(f, alpha), x, settings)
    lhs = math.exp(math.log(avg) / alpha) if avg > 0 else 0.0
    return LimitCheck(alpha, lhs, rhs, abs(lhs - rhs))


# -- conditions ------------------------------------------------------------


def _reciprocal_log_T(v: Weight, settings) -> GeoMeanContext:
    ctx = GeoMeanContext(v, settings)
    if ctx.positive_until < v.interval.b:
        raise LogNotIntegrable("1/v is infinite on a set of positive measure")
    return ctx


def _geo_condition(cid, u, factors, t_power, q, settings, sup_settings, params) -> ConditionValue:
    """``sup_t t^(-t_power) (int_0^t prod T(1/v_i)^(e_i) u)^(1/q)``."""
    _check_origin(u, "u")
    ctxs = [(_reciprocal_log_T(v, settings), e) for v, e in factors]

    def integrand(x):
        x = np.asarray(x, dtype=float)
        ux = u(x)
        logw = np.zeros_like(x)
        for c, e in ctxs:
            logw = logw - e * c.log_T(x)
        with np.errstate(over="ignore", invalid="ignore"):
            val = ux * np.exp(logw)
        return np.where(ux == 0, 0.0, val)

    bps = set(u.breakpoints) | set(u.singularities)
    for v, _ in factors:
        bps |= set(v.breakpoints) | set(v.singularities)
    diag = {}
    try:
        cum = CumulativeIntegral(LOWER_TAIL, integrand, u.interval, settings, breakpoints=tuple(bps), name=cid)
    except DivergentTail:
        cum = None
        diag["divergent_tail"] = True

    def func(t):
        t = np.asarray(t, dtype=float)
        if cum is None:
            return np.full_like(t, INF)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.exp(-t_power * np.log(t) + np.log(cum(t)) / q)

    s = sup_settings or SupSettings(abs_tol=settings.abs_tol, value_rel_tol=settings.rel_tol)
    est = sup_function(func, u.interval, s)
    diag.update(est.diagnostics)
    diag["grid_size"] = est.grid_size
    diag["refined_passes"] = est.refined_passes
    return ConditionValue(cid, est.value, est.witness, est.converged, params, diag)


def condition_scriptB(
    u: Weight,
    v: Weight,
    p: float,
    q: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    sup_settings: SupSettings | None = None,
) -> ConditionValue:
    """``sup_t t^(-1/p) (int_0^t T(1/v)^(q/p) u)^(1/q)`` for ``0 < p <= q < inf``."""
    if not (0 < p <= q < INF):
        raise ExponentOutOfRange(f"need 0 < p <= q < inf (p={p}, q={q})")
    return _geo_condition("scriptB", u, [(v, q / p)], 1.0 / p, q, settings, sup_settings, {"p": p, "q": q})


def condition_scriptB_bilinear(
    u: Weight,
    v1: Weight,
    v2: Weight,
    p1: float,
    p2: float,
    q: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    sup_settings: SupSettings | None = None,
) -> ConditionValue:
    """``sup_t t^-(1/p1+1/p2) (int_0^t T(1/v1)^(q/p1) T(1/v2)^(q/p2) u)^(1/q)``, ``1 < max(p1,p2) < q``."""
    if not (p1 > 0 and p2 > 0 and 1 < max(p1, p2) < q < INF):
        raise ExponentOutOfRange(f"need 1 < max(p1, p2) < q < inf (p1={p1}, p2={p2}, q={q})")
    return _geo_condition(
        "scriptB2", u, [(v1, q / p1), (v2, q / p2)], 1.0 / p1 + 1.0 / p2, q, settings, sup_settings,
        {"p1": p1, "p2": p2, "q": q},
    )

