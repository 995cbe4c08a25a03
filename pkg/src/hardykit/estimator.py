"""Lower bounds for best inequality constants from test-function families.

For a test function ``f`` the quotient ``lhs(f) / rhs(f)`` of an inequality
is a lower bound for its best constant.  Maximizing over a parametric family
gives a bracket ``lower <= C`` that is reported next to the characterizing
condition value; the ratio of the two is recorded, never interpreted as a
sharp constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bilinear import bilinear_D
from .errors import (
    AllSamplesDegenerate,
    ConfigInvalid,
    DivergentNorm,
    DivergentTail,
    HardyKitError,
    ZeroTestFunction,
)
from .geomean import GeoMeanContext, condition_scriptB, condition_scriptB_bilinear
from .linear import muckenhoupt_AM
from .maps import IntervalMap
from .quadrature import DEFAULT_SETTINGS, QuadratureSettings, integrate_function, integrate_weight, lower_tail
from .weights import Indicator, Interval, Power, Product, Weight, conjugate, power_transform

INF = math.inf
FAMILY_KINDS = ("truncated_dual", "power_cut", "plateau", "custom")
INEQUALITIES = ("H1", "H2", "GM", "BGM")


@dataclass
class QuotientSample:
    lhs: float
    rhs: float
    quotient: float
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "quotient": self.quotient, "params": dict(self.params)}


@dataclass
class ConstantBracket:
    lower: float
    condition_value: float
    ratio: float
    condition: str = ""
    best: dict = field(default_factory=dict)
    samples: int = 0
    skipped: int = 0

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "condition": self.condition,
            "condition_value": self.condition_value,
            "ratio": self.ratio,
            "best": dict(self.best),
            "samples": self.samples,
            "skipped": self.skipped,
        }


def _norm(f: Weight, v: Weight, p: float, settings: QuadratureSettings) -> float:
    """``(int f^p v)^(1/p)``."""
    fp = power_transform(f, p)
    integrand = Product((fp, v))
    a, b = integrand.interval
    r = integrate_weight(integrand, a, b, settings)
    if r.value < 0 or math.isnan(r.value):
        raise DivergentNorm("weighted norm is undefined")
    return r.value ** (1.0 / p)


def _ratio(lhs: float, rhs: float, params: dict) -> QuotientSample:
    if rhs == 0:
        raise ZeroTestFunction("the test function has zero weighted norm")
    if math.isinf(rhs):
        raise DivergentNorm("the test function has infinite weighted norm")
    return QuotientSample(lhs, rhs, lhs / rhs, params)


def _primitive(f: Weight, settings):
    try:
        return lower_tail(f, settings)
    except DivergentTail:
        raise DivergentNorm("the primitive of the test function is infinite") from None


def quotient_linear(f: Weight, u: Weight, v: Weight, p: float, q: float,
                    settings: QuadratureSettings = DEFAULT_SETTINGS, params: dict | None = None) -> QuotientSample:
    """``(int (int_a^x f)^q u)^(1/q) / (int f^p v)^(1/p)``."""
    rhs = _norm(f, v, p, settings)
    if rhs == 0:
        raise ZeroTestFunction("the test function has zero weighted norm")
    Fp = _primitive(f, settings)
    a, b = u.interval

    def integrand(x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ux = u(x)
            val = np.asarray(Fp(x), dtype=float) ** q * ux
        return np.where(ux == 0, 0.0, val)

    bps = set(f.breakpoints) | set(u.breakpoints) | set(f.singularities) | set(u.singularities)
    lhs_q = integrate_function(integrand, a, b, settings, tuple(bps)).value
    return _ratio(lhs_q ** (1.0 / q), rhs, dict(params or {}))


def quotient_bilinear(f: Weight, g: Weight, u: Weight, v1: Weight, v2: Weight, p1: float, p2: float, q: float,
                      settings: QuadratureSettings = DEFAULT_SETTINGS, params: dict | None = None) -> QuotientSample:
    """``(int (int_a^x f)^q (int_a^x g)^q u)^(1/q) / (||f||_{p1,v1} ||g||_{p2,v2})``."""
    rhs = _norm(f, v1, p1, settings) * _norm(g, v2, p2, settings)
    if rhs == 0:
        raise ZeroTestFunction("a test function has zero weighted norm")
    Fp, Gp = _primitive(f, settings), _primitive(g, settings)
    a, b = u.interval

    def integrand(x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ux = u(x)
            val = (np.asarray(Fp(x), dtype=float) * np.asarray(Gp(x), dtype=float)) ** q * ux
        return np.where(ux == 0, 0.0, val)

    bps = set()
    for w in (f, g, u):
        bps |= set(w.breakpoints) | set(w.singularities)
    lhs_q = integrate_function(integrand, a, b, settings, tuple(bps)).value
    return _ratio(lhs_q ** (1.0 / q), rhs, dict(params or {}))


def quotient_geomean(
    f: Weight,
    u: Weight,
    p: float,
    q: float,
    v: Weight | None = None,
    g: Weight | None = None,
    v1: Weight | None = None,
    v2: Weight | None = None,
    p1: float | None = None,
    p2: float | None = None,
    bilinear: bool = False,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    params: dict | None = None,
) -> QuotientSample:
    """Quotient of the geometric-mean inequality, or its bilinear version.

    Where a test function vanishes on part of ``(0, x)`` its geometric mean
    at ``x`` is taken to be 0.
    """
    if bilinear:
        if g is None or v1 is None or v2 is None or p1 is None or p2 is None:
            raise ConfigInvalid("the bilinear geometric-mean quotient needs g, v1, v2, p1, p2")
        rhs = _norm(f, v1, p1, settings) * _norm(g, v2, p2, settings)
        ctxs = [GeoMeanContext(f, settings), GeoMeanContext(g, settings)]
        ws = (f, g, u)
    else:
        if v is None:
            raise ConfigInvalid("the geometric-mean quotient needs v")
        rhs = _norm(f, v, p, settings)
        ctxs = [GeoMeanContext(f, settings)]
        ws = (f, u)
    if rhs == 0:
        raise ZeroTestFunction("a test function has zero weighted norm")
    a, b = u.interval

    def integrand(x):
        x = np.asarray(x, dtype=float)
        ux = u(x)
        logt = np.zeros_like(x)
        for c in ctxs:
            logt = logt + c.log_T(np.minimum(x, c.f.interval.b), allow_zero=True)
        with np.errstate(over="ignore", invalid="ignore"):
            val = np.exp(q * logt) * ux
        return np.where(ux == 0, 0.0, val)

    bps = set()
    for w in ws:
        bps |= set(w.breakpoints) | set(w.singularities)
    lhs_q = integrate_function(integrand, a, b, settings, tuple(bps)).value
    return _ratio(lhs_q ** (1.0 / q), rhs, dict(params or {}))


# -- families ----------------------------------------------------------------


@dataclass(frozen=True)
class TestFunctionFamily:
    """A parametric family of nonnegative test functions.

    ``grid`` is the number of truncation points (truncated_dual), the number
    of exponents (power_cut) or of plateau end points (plateau).
    """

    __test__ = False  # not a pytest class

    kind: str = "truncated_dual"
    grid: int = 33
    custom: Weight | None = None
    span: float = 8 * math.log(2.0)

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ConfigInvalid(f"family must be one of {FAMILY_KINDS}")
        if self.kind == "custom" and self.custom is None:
            raise ConfigInvalid("custom family needs a weight")
        if self.grid < 1:
            raise ConfigInvalid("family grid must be nonempty")

    def members(self, v: Weight, p: float, interval: Interval):
        """Yield ``(params, weight)`` pairs."""
        m = IntervalMap(interval)
        a, b = interval
        if self.kind == "custom":
            yield {"kind": "custom"}, self.custom
            return
        if self.kind == "truncated_dual":
            if not p > 1:
                raise ConfigInvalid("the truncated dual family needs p > 1")
            dual = power_transform(v, 1.0 - conjugate(p).p_conj)
            for t in m.to_x(np.linspace(-self.span, self.span, self.grid)):
                t = float(t)
                if a < t < b:
                    yield {"kind": self.kind, "t": t}, Product((dual, Indicator(a, t, interval)))
            return
        if self.kind == "power_cut":
            if a != 0.0:
                raise ConfigInvalid("the power-cut family needs an interval starting at 0")
            lam_v = v.lam if isinstance(v, Power) else 0.0
            critical = (-1.0 - lam_v) / p
            offsets = 2.0 ** np.linspace(-6, 2, self.grid) if self.grid > 1 else np.array([1.0])
            for t in m.to_x(np.array([-2.0, 0.0, 2.0])):
                for th in critical + offsets:
                    yield ({"kind": self.kind, "theta": float(th), "t": float(t)},
                           Product((Power(float(th), interval), Indicator(a, float(t), interval))))
            return
        pts = [float(t) for t in m.to_x(np.linspace(-self.span, self.span, self.grid + 1))]
        for i, t1 in enumerate(pts):
            for t2 in pts[i + 1:]:
                yield {"kind": self.kind, "t1": t1, "t2": t2}, Indicator(t1, t2, interval)


@dataclass
class EstimatorConfig:
    ineq: str
    u: Weight
    q: float
    v: Weight | None = None
    p: float | None = None
    v1: Weight | None = None
    v2: Weight | None = None
    p1: float | None = None
    p2: float | None = None
    settings: QuadratureSettings = DEFAULT_SETTINGS

    def __post_init__(self):
        if self.ineq not in INEQUALITIES:
            raise ConfigInvalid(f"inequality must be one of {INEQUALITIES}")
        if self.ineq in ("H1", "GM") and (self.v is None or self.p is None):
            raise ConfigInvalid(f"{self.ineq} needs v and p")
        if self.ineq in ("H2", "BGM") and None in (self.v1, self.v2, self.p1, self.p2):
            raise ConfigInvalid(f"{self.ineq} needs v1, v2, p1 and p2")

    def condition(self):
        s = self.settings
        if self.ineq == "H1":
            return muckenhoupt_AM(self.u, self.v, self.p, self.q, s)
        if self.ineq == "H2":
            return bilinear_D(self.u, self.v1, self.v2, self.p1, self.p2, self.q, s)
        if self.ineq == "GM":
            return condition_scriptB(self.u, self.v, self.p, self.q, s)
        return condition_scriptB_bilinear(self.u, self.v1, self.v2, self.p1, self.p2, self.q, s)


def _sample(cfg: EstimatorConfig, f, g, params) -> QuotientSample:
    s = cfg.settings
    if cfg.ineq == "H1":
        return quotient_linear(f, cfg.u, cfg.v, cfg.p, cfg.q, s, params)
    if cfg.ineq == "H2":
        return quotient_bilinear(f, g, cfg.u, cfg.v1, cfg.v2, cfg.p1, cfg.p2, cfg.q, s, params)
    if cfg.ineq == "GM":
        return quotient_geomean(f, cfg.u, cfg.p, cfg.q, v=cfg.v, settings=s, params=params)
    return quotient_geomean(f, cfg.u, cfg.p1 or 0.0, cfg.q, g=g, v1=cfg.v1, v2=cfg.v2, p1=cfg.p1, p2=cfg.p2,
                            bilinear=True, settings=s, params=params)


def sample_family(family: TestFunctionFamily, cfg: EstimatorConfig, family2: TestFunctionFamily | None = None):
    """All quotient samples of a family (product family for bilinear inequalities)."""
    interval = cfg.u.interval
    samples, skipped = [], 0
    if cfg.ineq in ("H1", "GM"):
        pairs = ((pf, f, None, None) for pf, f in family.members(cfg.v, cfg.p, interval))
    else:
        fam2 = family2 or family
        first = list(family.members(cfg.v1, cfg.p1, interval))
        second = list(fam2.members(cfg.v2, cfg.p2, interval))
        pairs = ((pf, f, pg, g) for pf, f in first for pg, g in second)
    for pf, f, pg, g in pairs:
        params = {"f": pf} if pg is None else {"f": pf, "g": pg}
        try:
            smp = _sample(cfg, f, g, params)
        except (ZeroTestFunction, DivergentNorm):
            skipped += 1
            continue
        except HardyKitError:
            skipped += 1
            continue
        if math.isnan(smp.quotient):
            skipped += 1
            continue
        samples.append(smp)
    return samples, skipped


def maximize_quotient(
    family: TestFunctionFamily,
    cfg: EstimatorConfig,
    family2: TestFunctionFamily | None = None,
    condition_value: float | None = None,
) -> ConstantBracket:
    """Largest observed quotient, paired with the characterizing condition."""
    samples, skipped = sample_family(family, cfg, family2)
    if not samples:
        raise AllSamplesDegenerate("every member of the test-function family was degenerate")
    best = max(samples, key=lambda smp: smp.quotient)
    cond_name = {"H1": "AM", "H2": "D", "GM": "scriptB", "BGM": "scriptB2"}[cfg.ineq]
    if condition_value is None:
        condition_value = cfg.condition().value
    if condition_value > 0 and math.isfinite(condition_value):
        ratio = best.quotient / condition_value
    elif condition_value == 0:
        ratio = INF if best.quotient > 0 else math.nan
    else:
        ratio = 0.0
    return ConstantBracket(best.quotient, condition_value, ratio, cond_name, best.to_dict(), len(samples), skipped)
