"""The Muckenhoupt condition and the linear scale of equivalent conditions B1..B15.

With ``F(x) = int_x^b f`` and ``G(x) = int_a^x g`` the reference condition is
``B1(x) = F(x)^alpha G(x)^beta``; B2..B11 trade powers between an inner
integral and outer factors, and B12..B15 additionally involve a free
auxiliary function ``h`` over which an infimum is taken.  For the Hardy
inequality with weights ``u, v`` and exponents ``p <= q`` one takes ``f = u``,
``g = v^(1-p')``, ``alpha = 1/q`` and ``beta = 1/p'``, and B1 becomes the
Muckenhoupt function ``U^(1/q) V^(1/p')``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import ConfigInvalid, ExponentOutOfRange, SideConditionViolated
from .formula import (
    AuxFunctionSpec,
    Base,
    ConditionValue,
    Context,
    Integral,
    Term,
    condition_from_sup,
    cum,
    default_sup_settings,
    require_aux,
    sup_of_terms,
)
from .quadrature import DEFAULT_SETTINGS, LOWER_TAIL, UPPER_TAIL, QuadratureSettings
from .supremum import SupSettings
from .weights import Interval, Weight, conjugate, power_transform

LINEAR_IDS = tuple(f"B{i}" for i in range(1, 16)) + ("AM",)
INF_TYPE_LINEAR = ("B12", "B13", "B14", "B15")
CANDIDATE_SCALES = tuple(2.0 ** k for k in range(-8, 9))


@dataclass(frozen=True)
class LinearParams:
    alpha: float
    beta: float
    s: float | None = None

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ConfigInvalid(f"{name} must be a positive real, got {v!r}")
        if self.s is not None and not (self.s > 0 and math.isfinite(self.s)):
            raise ConfigInvalid(f"s must be a positive real, got {self.s!r}")

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


# (description, test) of the side condition attached to each functional
_SIDE = {
    "B8": ("alpha > s", lambda p: p.alpha > p.s),
    "B9": ("alpha < s", lambda p: p.alpha < p.s),
    "B10": ("beta > s", lambda p: p.beta > p.s),
    "B11": ("beta < s", lambda p: p.beta < p.s),
    "B12": ("beta < s", lambda p: p.beta < p.s),
    "B13": ("alpha < s", lambda p: p.alpha < p.s),
}


def side_condition_holds(cid: str, params: LinearParams) -> bool:
    if cid in ("B1", "AM"):
        return True
    if params.s is None:
        return False
    rule = _SIDE.get(cid)
    return rule is None or rule[1](params)


def check_linear(cid: str, params: LinearParams) -> None:
    if cid not in LINEAR_IDS:
        raise ConfigInvalid(f"unknown linear condition {cid!r}")
    if cid in ("B1", "AM"):
        return
    if params.s is None:
        raise ConfigInvalid(f"{cid} needs the parameter s")
    rule = _SIDE.get(cid)
    if rule is not None and not rule[1](params):
        raise SideConditionViolated(
            f"{cid} requires {rule[0]} (alpha={params.alpha}, beta={params.beta}, s={params.s})"
        )


def linear_terms(cid: str, params: LinearParams, h: AuxFunctionSpec | None = None) -> list[Term]:
    """The factors of the condition function ``cid`` at a point."""
    check_linear(cid, params)
    a, b, s = params.alpha, params.beta, params.s
    F, G = cum("F"), cum("G")
    up = lambda w, *fac: Integral(UPPER_TAIL, w, tuple(fac))  # noqa: E731
    lo = lambda w, *fac: Integral(LOWER_TAIL, w, tuple(fac))  # noqa: E731
    if cid in ("B1", "AM"):
        return [Term(F, a), Term(G, b)]
    if cid in INF_TYPE_LINEAR:
        require_aux(cid, 1, h)
        hb = Base(aux=h)
    table = {
        "B2": lambda: [Term(up("f", (G, (b - s) / a)), a), Term(G, s)],
        "B3": lambda: [Term(lo("g", (F, (a - s) / b)), b), Term(F, s)],
        "B4": lambda: [Term(lo("f", (G, (b + s) / a)), a), Term(G, -s)],
        "B5": lambda: [Term(up("g", (F, (a + s) / b)), b), Term(F, -s)],
        "B6": lambda: [Term(up("f", (G, b / (a + s))), a + s), Term(F, -s)],
        "B7": lambda: [Term(lo("g", (F, a / (b + s))), b + s), Term(G, -s)],
        "B8": lambda: [Term(lo("f", (G, b / (a - s))), a - s), Term(F, s)],
        "B9": lambda: [Term(up("f", (G, b / (a - s))), a - s), Term(F, s)],
        "B10": lambda: [Term(up("g", (F, a / (b - s))), b - s), Term(G, s)],
        "B11": lambda: [Term(lo("g", (F, a / (b - s))), b - s), Term(G, s)],
        "B12": lambda: [Term(up("f", (hb, (b - s) / a)), a), Term(Base(h, "G"), s)],
        "B13": lambda: [Term(lo("g", (hb, (a - s) / b)), b), Term(Base(h, "F"), s)],
        "B14": lambda: [Term(lo("f", (Base(h, "G"), (b + s) / a)), a), Term(hb, -s)],
        "B15": lambda: [Term(up("g", (Base(h, "F"), (a + s) / b)), b), Term(hb, -s)],
    }
    return table[cid]()


class LinearContext(Context):
    """Weights ``f`` and ``g`` with ``F`` (upper tail of f) and ``G`` (lower tail of g)."""

    def __init__(self, f: Weight, g: Weight, settings: QuadratureSettings = DEFAULT_SETTINGS,
                 force_quadrature: bool = False, interval: Interval | None = None):
        super().__init__({"f": f, "g": g}, settings, force_quadrature, interval)

    @classmethod
    def hardy(cls, u: Weight, v: Weight, p: float, settings: QuadratureSettings = DEFAULT_SETTINGS,
              force_quadrature: bool = False) -> "LinearContext":
        """``f = u`` and ``g = v^(1-p')``, so that ``F = U`` and ``G = V``."""
        pc = conjugate(p).p_conj
        return cls(u, power_transform(v, 1.0 - pc), settings, force_quadrature)


def eval_linear_pointwise(cid: str, x, params: LinearParams, ctx: Context, h: AuxFunctionSpec | None = None):
    """Value of the condition function at ``x`` (scalar or array)."""
    terms = linear_terms(cid, params, h)
    vals = ctx.evaluate(terms, x)
    return float(vals[0]) if vals.size == 1 and not hasattr(x, "__len__") else vals


def _sup_settings(ctx: Context, sup_settings: SupSettings | None) -> SupSettings:
    return sup_settings or default_sup_settings(ctx.settings)


def sup_linear(
    cid: str,
    params: LinearParams,
    ctx: Context,
    sub: Interval | None = None,
    h: AuxFunctionSpec | None = None,
    sup_settings: SupSettings | None = None,
) -> ConditionValue:
    """Supremum of the condition function over ``sub`` (default: the whole interval)."""
    terms = linear_terms(cid, params, h)
    sub = sub or ctx.interval
    est = sup_of_terms(ctx, terms, sub, _sup_settings(ctx, sup_settings))
    cv = condition_from_sup(cid, est, params.to_dict(), ctx)
    cv.params["sub"] = sub.to_json()
    if h is not None:
        cv.params["h"] = h.label()
    return cv


def canonical_linear_candidates(cid: str, scales=CANDIDATE_SCALES) -> list[AuxFunctionSpec]:
    base = "G" if cid in ("B12", "B14") else "F"
    scales = sorted(set(scales) | {1.0})
    return [AuxFunctionSpec(base, c) for c in scales]


def inf_linear(
    cid: str,
    params: LinearParams,
    ctx: Context,
    sub: Interval | None = None,
    candidates: list[AuxFunctionSpec] | None = None,
    sup_settings: SupSettings | None = None,
) -> ConditionValue:
    """Minimum over candidate aux functions of the sup; an upper bound of the infimum."""
    if cid not in INF_TYPE_LINEAR:
        raise ConfigInvalid(f"{cid} is not an inf-type condition")
    if candidates is None:
        candidates = canonical_linear_candidates(cid)
    if not candidates:
        raise ConfigInvalid("candidate list must not be empty")
    canonical = AuxFunctionSpec("G" if cid in ("B12", "B14") else "F", 1.0)
    if canonical not in candidates:
        candidates = [canonical, *candidates]
    best = None
    all_converged = True
    for h in candidates:
        cv = sup_linear(cid, params, ctx, sub, h, sup_settings)
        all_converged &= cv.converged
        if best is None or cv.value < best.value:
            best = cv
    best.upper_bound = True
    best.best_aux = (best.params.get("h"),)
    best.converged = all_converged
    best.diagnostics["candidates"] = len(candidates)
    return best


def evaluate_linear(
    cid: str,
    params: LinearParams,
    ctx: Context,
    sub: Interval | None = None,
    h: AuxFunctionSpec | None = None,
    candidates: list[AuxFunctionSpec] | None = None,
    sup_settings: SupSettings | None = None,
) -> ConditionValue:
    """Sup-type value, or the candidate infimum for B12..B15 when no ``h`` is given."""
    if cid in INF_TYPE_LINEAR and h is None:
        return inf_linear(cid, params, ctx, sub, candidates, sup_settings)
    return sup_linear(cid, params, ctx, sub, h, sup_settings)


def hardy_params(p: float, q: float, s: float | None = None) -> LinearParams:
    if not (1 < p <= q < math.inf):
        raise ExponentOutOfRange(f"the linear Hardy conditions need 1 < p <= q < inf (p={p}, q={q})")
    return LinearParams(1.0 / q, 1.0 / conjugate(p).p_conj, s)


def muckenhoupt_AM(
    u: Weight,
    v: Weight,
    p: float,
    q: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    sub: Interval | None = None,
    sup_settings: SupSettings | None = None,
) -> ConditionValue:
    """``sup U^(1/q) V^(1/p')``; the same code path as B1 with alpha=1/q, beta=1/p'."""
    params = hardy_params(p, q)
    ctx = LinearContext.hardy(u, v, p, settings)
    cv = sup_linear("B1", params, ctx, sub, None, sup_settings)
    cv.id = "AM"
    cv.params.update({"p": p, "q": q})
    return cv


# -- truncated suprema ---------------------------------------------------

# item -> (side, functional, extra side condition)
TRUNCATED_ITEMS = {
    "i": ("right", "B2"),
    "ii": ("right", "B4"),
    "iii": ("right", "B6"),
    "iv": ("right", "B8"),
    "v": ("right", "B9"),
    "vi": ("right", "B12"),
    "vii": ("right", "B14"),
    "viii": ("left", "B3"),
    "ix": ("left", "B5"),
    "x": ("left", "B7"),
    "xi": ("left", "B10"),
    "xii": ("left", "B11"),
    "xiii": ("left", "B13"),
    "xiv": ("left", "B15"),
}


def truncated_pair(
    item: str,
    params: LinearParams,
    ctx: LinearContext,
    x0: float,
    candidates: list[AuxFunctionSpec] | None = None,
    sup_settings: SupSettings | None = None,
) -> tuple[ConditionValue, ConditionValue]:
    """Both sides of a truncated equivalence at the truncation point ``x0``.

    Right items take sups over ``(x0, b)`` with ``f`` replaced by ``f 1_(x0,b)``;
    left items take sups over ``(a, x0)`` with ``g`` replaced by ``g 1_(a,x0)``.
    On the truncated range this turns ``int_a^y`` into ``int_x0^y`` (and
    ``int_y^b`` into ``int_y^x0``) while leaving every other factor unchanged.
    """
    try:
        side, cid = TRUNCATED_ITEMS[item]
    except KeyError:
        raise ConfigInvalid(f"unknown truncation item {item!r}") from None
    check_linear(cid, params)
    a, b = ctx.interval
    if not (a < x0 < b):
        raise ConfigInvalid(f"truncation point {x0} must lie inside {tuple(ctx.interval)}")
    if side == "right":
        sub = Interval(x0, b)
        tctx = ctx.restricted("f", x0, b)
    else:
        sub = Interval(a, x0)
        tctx = ctx.restricted("g", a, x0)
    lhs = sup_linear("B1", params, tctx, sub, None, sup_settings)
    rhs = evaluate_linear(cid, params, tctx, sub, None, candidates, sup_settings)
    for cv in (lhs, rhs):
        cv.params["truncation"] = {"item": item, "x0": x0, "side": side}
    return lhs, rhs
