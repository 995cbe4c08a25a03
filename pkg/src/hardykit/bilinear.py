"""The bilinear condition D and the bilinear scales Bt1..Bt23 and At1..At22.

With ``F(x) = int_x^b f``, ``G(x) = int_a^x g`` and ``H(x) = int_a^x h`` the
reference function is ``Bt1(x) = F^alpha G^beta H^gamma``.  For the bilinear
Hardy inequality one takes ``f = u``, ``g = v1^(1-p1')``, ``h = v2^(1-p2')``
with ``alpha = 1/q``, ``beta = 1/p1'``, ``gamma = 1/p2'``; the ``At`` scale is
the ``Bt`` scale shifted by one index under that substitution.
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
    NestedSup,
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

BT_IDS = tuple(f"Bt{i}" for i in range(1, 24))
AT_IDS = tuple(f"At{i}" for i in range(1, 23))
BILINEAR_IDS = BT_IDS + AT_IDS + ("D",)
USES_S = {f"Bt{i}" for i in range(11, 18)}
USES_S1S2 = {f"Bt{i}" for i in range(2, 11)} | {f"Bt{i}" for i in range(18, 24)}
INF_TYPE_BILINEAR = tuple(f"Bt{i}" for i in range(16, 24))
ONE_AUX = ("Bt16", "Bt17")


@dataclass(frozen=True)
class BilinearParams:
    alpha: float
    beta: float
    gamma: float
    s: float | None = None
    s1: float | None = None
    s2: float | None = None

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ConfigInvalid(f"{name} must be a positive real, got {v!r}")
        for name in ("s", "s1", "s2"):
            v = getattr(self, name)
            if v is not None and not (v > 0 and math.isfinite(v)):
                raise ConfigInvalid(f"{name} must be a positive real, got {v!r}")

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


_SIDE = {
    "Bt6": ("alpha > s1", lambda p: p.alpha > p.s1),
    "Bt7": ("alpha > s1", lambda p: p.alpha > p.s1),
    "Bt8": ("alpha < s1", lambda p: p.alpha < p.s1),
    "Bt9": ("alpha < s1", lambda p: p.alpha < p.s1),
    "Bt14": ("alpha > s", lambda p: p.alpha > p.s),
    "Bt15": ("alpha < s", lambda p: p.alpha < p.s),
    "Bt16": ("gamma < s", lambda p: p.gamma < p.s),
    "Bt17": ("beta < s", lambda p: p.beta < p.s),
    "Bt18": ("beta < s1 and gamma < s2", lambda p: p.beta < p.s1 and p.gamma < p.s2),
    "Bt19": ("beta < s1 and gamma < s2", lambda p: p.beta < p.s1 and p.gamma < p.s2),
    "Bt20": ("beta < s1 and gamma < s2", lambda p: p.beta < p.s1 and p.gamma < p.s2),
}


def _missing(cid: str, params: BilinearParams) -> str | None:
    if cid in USES_S and params.s is None:
        return "s"
    if cid in USES_S1S2 and (params.s1 is None or params.s2 is None):
        return "s1 and s2"
    return None


def side_condition_holds(cid: str, params: BilinearParams) -> bool:
    cid = bt_id(cid)
    if _missing(cid, params):
        return False
    rule = _SIDE.get(cid)
    return rule is None or rule[1](params)


def bt_id(cid: str) -> str:
    """Map ``At<i>`` to ``Bt<i+1>`` and ``D`` to ``Bt1``."""
    if cid == "D":
        return "Bt1"
    if cid in AT_IDS:
        return f"Bt{int(cid[2:]) + 1}"
    if cid in BT_IDS:
        return cid
    raise ConfigInvalid(f"unknown bilinear condition {cid!r}")


def check_bilinear(cid: str, params: BilinearParams) -> None:
    b = bt_id(cid)
    miss = _missing(b, params)
    if miss:
        raise ConfigInvalid(f"{cid} needs the parameter(s) {miss}")
    rule = _SIDE.get(b)
    if rule is not None and not rule[1](params):
        raise SideConditionViolated(f"{cid} requires {rule[0]} ({params.to_dict()})")


def bilinear_terms(
    cid: str,
    params: BilinearParams,
    h1: AuxFunctionSpec | None = None,
    h2: AuxFunctionSpec | None = None,
) -> list[Term]:
    check_bilinear(cid, params)
    b_id = bt_id(cid)
    al, be, ga = params.alpha, params.beta, params.gamma
    s, s1, s2 = params.s, params.s1, params.s2
    F, G, H = cum("F"), cum("G"), cum("H")
    up = lambda w, *fac: Integral(UPPER_TAIL, w, tuple(fac))  # noqa: E731
    lo = lambda w, *fac: Integral(LOWER_TAIL, w, tuple(fac))  # noqa: E731
    if b_id in INF_TYPE_BILINEAR:
        require_aux(cid, 1 if b_id in ONE_AUX else 2, h1, h2)
    A1 = Base(aux=h1)
    A2 = Base(aux=h2)
    h1G, h2H = Base(h1, "G"), Base(h2, "H")
    table = {
        "Bt1": lambda: [Term(F, al), Term(G, be), Term(H, ga)],
        "Bt2": lambda: [Term(up("f", (G, (be - s1) / al), (H, (ga - s2) / al)), al), Term(G, s1), Term(H, s2)],
        "Bt3": lambda: [Term(lo("f", (G, (be + s1) / al), (H, (ga + s2) / al)), al), Term(G, -s1), Term(H, -s2)],
        # the inner integrals of Bt4 and Bt5 run over (x, b); see the notes in the README
        "Bt4": lambda: [Term(up("f", (G, be / (al + s1)), (H, (ga - s2) / (al + s1))), al + s1),
                        Term(F, -s1), Term(H, s2)],
        "Bt5": lambda: [Term(up("f", (G, (be - s2) / (al + s1)), (H, ga / (al + s1))), al + s1),
                        Term(F, -s1), Term(G, s2)],
        "Bt6": lambda: [Term(lo("f", (G, be / (al - s1)), (H, (ga + s2) / (al - s1))), al - s1),
                        Term(F, s1), Term(H, -s2)],
        "Bt7": lambda: [Term(lo("f", (G, (be + s2) / (al - s1)), (H, ga / (al - s1))), al - s1),
                        Term(F, s1), Term(G, -s2)],
        "Bt8": lambda: [Term(up("f", (G, be / (al - s1))), al - s1), Term(H, s2),
                        Term(up("f", (H, (ga - s2) / s1)), s1)],
        "Bt9": lambda: [Term(up("f", (H, ga / (al - s1))), al - s1), Term(G, s2),
                        Term(up("f", (G, (be - s2) / s1)), s1)],
        "Bt10": lambda: [Term(lo("g", (F, (al / 2) / (be + s1))), be + s1),
                         Term(lo("h", (F, (al / 2) / (ga + s2))), ga + s2), Term(G, -s1), Term(H, -s2)],
        "Bt11": lambda: [Term(up("f", (G, be * (1 - s) / al), (H, ga * (1 - s) / al)), al),
                         Term(G, be * s), Term(H, ga * s)],
        "Bt12": lambda: [Term(lo("f", (G, be * (1 + s) / al), (H, ga * (1 + s) / al)), al),
                         Term(G, -be * s), Term(H, -ga * s)],
        "Bt13": lambda: [Term(up("f", (G, be / (al + s)), (H, ga / (al + s))), al + s), Term(F, -s)],
        "Bt14": lambda: [Term(lo("f", (G, be / (al - s)), (H, ga / (al - s))), al - s), Term(F, s)],
        "Bt15": lambda: [Term(up("f", (G, be / (al - s)), (H, ga / (al - s))), al - s), Term(F, s)],
        "Bt16": lambda: [Term(up("f", (A1, (ga - s) / al)), al), Term(G, be), Term(Base(h1, "H"), s)],
        "Bt17": lambda: [Term(up("f", (A1, (be - s) / al)), al), Term(H, ga), Term(h1G, s)],
        "Bt18": lambda: [Term(up("f", (A1, (be - s1) / al), (A2, (ga - s2) / al)), al),
                         Term(NestedSup(h1G, s1, "below"), 1.0), Term(h2H, s2)],
        "Bt19": lambda: [Term(up("f", (A1, (be - s1) / al), (A2, (ga - s2) / al)), al),
                         Term(h1G, s1), Term(NestedSup(h2H, s2, "below"), 1.0)],
        "Bt20": lambda: [Term(up("f", (A1, (be - s1) / al), (A2, (ga - s2) / al)), al),
                         Term(NestedSup(h1G, s1, "below"), 1.0), Term(NestedSup(h2H, s2, "below"), 1.0)],
        "Bt21": lambda: [Term(lo("f", (h1G, (be + s1) / al), (h2H, (ga + s2) / al)), al),
                         Term(NestedSup(A1, -s1, "above"), 1.0), Term(A2, -s2)],
        "Bt22": lambda: [Term(lo("f", (h1G, (be + s1) / al), (h2H, (ga + s2) / al)), al),
                         Term(A1, -s1), Term(NestedSup(A2, -s2, "above"), 1.0)],
        "Bt23": lambda: [Term(lo("f", (h1G, (be + s1) / al), (h2H, (ga + s2) / al)), al),
                         Term(NestedSup(A1, -s1, "above"), 1.0), Term(NestedSup(A2, -s2, "above"), 1.0)],
    }
    return table[b_id]()


class BilinearContext(Context):
    """Weights ``f``, ``g``, ``h`` with ``F`` (upper tail) and ``G``, ``H`` (lower tails)."""

    def __init__(self, f: Weight, g: Weight, h: Weight, settings: QuadratureSettings = DEFAULT_SETTINGS,
                 force_quadrature: bool = False, interval: Interval | None = None):
        super().__init__({"f": f, "g": g, "h": h}, settings, force_quadrature, interval)

    @classmethod
    def hardy(cls, u: Weight, v1: Weight, v2: Weight, p1: float, p2: float,
              settings: QuadratureSettings = DEFAULT_SETTINGS, force_quadrature: bool = False):
        """``F = U``, ``G = V1``, ``H = V2`` with ``V_i`` built from ``v_i^(1-p_i')``."""
        c1, c2 = conjugate(p1).p_conj, conjugate(p2).p_conj
        return cls(u, power_transform(v1, 1.0 - c1), power_transform(v2, 1.0 - c2), settings, force_quadrature)


def eval_bilinear_pointwise(cid: str, x, params: BilinearParams, ctx: Context,
                            h1: AuxFunctionSpec | None = None, h2: AuxFunctionSpec | None = None):
    terms = bilinear_terms(cid, params, h1, h2)
    vals = ctx.evaluate(terms, x)
    return float(vals[0]) if vals.size == 1 and not hasattr(x, "__len__") else vals


def sup_bilinear(
    cid: str,
    params: BilinearParams,
    ctx: Context,
    sub: Interval | None = None,
    h1: AuxFunctionSpec | None = None,
    h2: AuxFunctionSpec | None = None,
    sup_settings: SupSettings | None = None,
) -> ConditionValue:
    terms = bilinear_terms(cid, params, h1, h2)
    sub = sub or ctx.interval
    est = sup_of_terms(ctx, terms, sub, sup_settings or default_sup_settings(ctx.settings))
    cv = condition_from_sup(cid, est, params.to_dict(), ctx)
    cv.params["sub"] = sub.to_json()
    if h1 is not None:
        cv.params["h1"] = h1.label()
    if h2 is not None:
        cv.params["h2"] = h2.label()
    return cv


def canonical_bilinear_candidates(cid: str, scales=(1.0,)):
    """Candidate lists ``(h1 list, h2 list)`` built from the canonical choices G and H."""
    b = bt_id(cid)
    if b == "Bt16":
        return [AuxFunctionSpec("H", c) for c in scales], [None]
    if b == "Bt17":
        return [AuxFunctionSpec("G", c) for c in scales], [None]
    return [AuxFunctionSpec("G", c) for c in scales], [AuxFunctionSpec("H", c) for c in scales]


def inf_bilinear(
    cid: str,
    params: BilinearParams,
    ctx: Context,
    sub: Interval | None = None,
    candidates1: list | None = None,
    candidates2: list | None = None,
    sup_settings: SupSettings | None = None,
) -> ConditionValue:
    """Minimum over candidate pairs of the sup; an upper bound of the double infimum."""
    b = bt_id(cid)
    if b not in INF_TYPE_BILINEAR:
        raise ConfigInvalid(f"{cid} is not an inf-type condition")
    d1, d2 = canonical_bilinear_candidates(b)
    c1 = list(candidates1) if candidates1 is not None else d1
    c2 = list(candidates2) if candidates2 is not None else d2
    if b in ONE_AUX:
        c2 = [None]
    if not c1 or not c2:
        raise ConfigInvalid("candidate lists must not be empty")
    for canon, lst in ((d1[0], c1), (d2[0], c2)):
        if canon not in lst:
            lst.insert(0, canon)
    best = None
    all_converged = True
    for a1 in c1:
        for a2 in c2:
            cv = sup_bilinear(cid, params, ctx, sub, a1, a2, sup_settings)
            all_converged &= cv.converged
            if best is None or cv.value < best.value:
                best = cv
    best.upper_bound = True
    best.best_aux = (best.params.get("h1"), best.params.get("h2"))
    best.converged = all_converged
    best.diagnostics["candidates"] = len(c1) * len(c2)
    return best


def evaluate_bilinear(
    cid: str,
    params: BilinearParams,
    ctx: Context,
    sub: Interval | None = None,
    h1: AuxFunctionSpec | None = None,
    h2: AuxFunctionSpec | None = None,
    sup_settings: SupSettings | None = None,
) -> ConditionValue:
    b = bt_id(cid)
    if b in INF_TYPE_BILINEAR and h1 is None:
        cv = inf_bilinear(cid, params, ctx, sub, None, None, sup_settings)
        cv.id = cid
        return cv
    cv = sup_bilinear(cid, params, ctx, sub, h1, h2, sup_settings)
    cv.id = cid
    return cv


def check_bilinear_exponents(p1: float, p2: float, q: float) -> None:
    if not (p1 > 1 and p2 > 1 and q > 1 and math.isfinite(q)):
        raise ExponentOutOfRange(f"need 1 < p1, p2, q < inf (p1={p1}, p2={p2}, q={q})")
    if q < max(p1, p2):
        raise ExponentOutOfRange(f"need q >= max(p1, p2) (p1={p1}, p2={p2}, q={q})")


def hardy_bilinear_params(p1: float, p2: float, q: float, s=None, s1=None, s2=None) -> BilinearParams:
    check_bilinear_exponents(p1, p2, q)
    return BilinearParams(1.0 / q, 1.0 / conjugate(p1).p_conj, 1.0 / conjugate(p2).p_conj, s, s1, s2)


def bilinear_D(
    u: Weight,
    v1: Weight,
    v2: Weight,
    p1: float,
    p2: float,
    q: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    sup_settings: SupSettings | None = None,
) -> ConditionValue:
    """``sup U^(1/q) V1^(1/p1') V2^(1/p2')``."""
    params = hardy_bilinear_params(p1, p2, q)
    ctx = BilinearContext.hardy(u, v1, v2, p1, p2, settings)
    cv = sup_bilinear("D", params, ctx, None, None, None, sup_settings)
    cv.id = "D"
    cv.params.update({"p1": p1, "p2": p2, "q": q})
    return cv


def eval_A_tilde(
    i: int,
    u: Weight,
    v1: Weight,
    v2: Weight,
    p1: float,
    p2: float,
    q: float,
    s: float | None = None,
    s1: float | None = None,
    s2: float | None = None,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    ctx: BilinearContext | None = None,
    h1: AuxFunctionSpec | None = None,
    h2: AuxFunctionSpec | None = None,
    sup_settings: SupSettings | None = None,
) -> ConditionValue:
    """``At_i``: the ``Bt_{i+1}`` evaluator with ``alpha=1/q, beta=1/p1', gamma=1/p2'``."""
    if not 1 <= int(i) <= 22:
        raise ConfigInvalid(f"At index must be in 1..22, got {i}")
    params = hardy_bilinear_params(p1, p2, q, s, s1, s2)
    if ctx is None:
        ctx = BilinearContext.hardy(u, v1, v2, p1, p2, settings)
    cv = evaluate_bilinear(f"At{int(i)}", params, ctx, None, h1, h2, sup_settings)
    cv.params.update({"p1": p1, "p2": p2, "q": q})
    return cv
