"""Shared machinery for condition functionals built from cumulative integrals.

A condition function is a product of powers of *terms*.  A term is one of

* a cumulative integral of the context (``F``, ``G``, ``H``),
* a composite inner integral such as ``int_x^b f(t) G(t)^e dt``,
* an auxiliary function ``h`` or a sum ``h + G``,
* a nested supremum of such a base over ``(a, x)`` or ``(x, b)``.

Products are evaluated in log space: ``0 * inf`` becomes NaN, which the sup
engine skips.  Inside integrands ``0 * inf`` is taken to be ``0``.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigInvalid, DivergentTail, MissingAuxFunction
from .quadrature import (
    DEFAULT_SETTINGS,
    LOWER_TAIL,
    UPPER_TAIL,
    CumulativeIntegral,
    QuadratureSettings,
    lower_tail,
    upper_tail,
)
from .supremum import SupEstimate, SupSettings, sup_function
from .weights import Indicator, Interval, Product, Weight

INF = math.inf
# cumulative values outside this range make pointwise overflow ambiguous
REPRESENTABLE = (1e-100, 1e100)

# which weight each cumulative integrates, and in which direction
CUMULATIVES = {"F": ("f", UPPER_TAIL), "G": ("g", LOWER_TAIL), "H": ("h", LOWER_TAIL)}
_DIRECTION = {"F": -1, "G": 1, "H": 1}


@dataclass(frozen=True)
class AuxFunctionSpec:
    """Auxiliary function ``h = scale * base`` or a custom nonnegative weight."""

    base: str = "G"
    scale: float = 1.0
    custom: Weight | None = None

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ConfigInvalid("aux function scale must be positive and finite")
        if self.custom is None and self.base not in _DIRECTION:
            raise ConfigInvalid(f"aux base must be one of F, G, H or custom, got {self.base!r}")

    @classmethod
    def parse(cls, text: str) -> "AuxFunctionSpec":
        """Parse ``"G"``, ``"0.5*G"`` or ``"4H"``."""
        m = re.fullmatch(r"\s*(?:([0-9.eE+-]+)\s*\*?\s*)?([FGH])\s*", str(text))
        if not m:
            raise ConfigInvalid(f"cannot parse aux function {text!r}; use e.g. G, 2*H")
        return cls(m.group(2), float(m.group(1)) if m.group(1) else 1.0)

    @property
    def direction(self) -> int | None:
        """+1 nondecreasing, -1 nonincreasing, None unknown."""
        return None if self.custom is not None else _DIRECTION[self.base]

    def label(self) -> str:
        if self.custom is not None:
            return "custom"
        return self.base if self.scale == 1.0 else f"{self.scale!r}*{self.base}"

    def values(self, ctx: "Context", x: np.ndarray) -> np.ndarray:
        if self.custom is not None:
            return np.asarray(self.custom(x), dtype=float)
        return self.scale * ctx.cumulative(self.base)(x)


@dataclass(frozen=True)
class Base:
    """``aux(x) + cum(x)`` with either part optional."""

    aux: AuxFunctionSpec | None = None
    cum: str | None = None

    @property
    def direction(self) -> int | None:
        dirs = set()
        if self.aux is not None:
            dirs.add(self.aux.direction)
        if self.cum is not None:
            dirs.add(_DIRECTION[self.cum])
        return dirs.pop() if len(dirs) == 1 else None

    def values(self, ctx: "Context", x: np.ndarray) -> np.ndarray:
        out = 0.0
        if self.aux is not None:
            out = out + self.aux.values(ctx, x)
        if self.cum is not None:
            out = out + ctx.cumulative(self.cum)(x)
        return np.asarray(out, dtype=float)


def cum(name: str) -> Base:
    return Base(cum=name)


@dataclass(frozen=True)
class Integral:
    """``int f(t) prod base_i(t)^e_i dt`` over ``(x, b)`` (upper) or ``(a, x)`` (lower)."""

    kind: str
    weight: str
    factors: tuple = ()


@dataclass(frozen=True)
class NestedSup:
    """``sup base(y)^exponent`` over ``(a, x)`` (``below``) or ``(x, b)`` (``above``)."""

    base: Base
    exponent: float
    side: str


@dataclass(frozen=True)
class Term:
    source: object  # Base | Integral | NestedSup
    power: float


def _pow_log(values: np.ndarray, power: float) -> np.ndarray:
    if power == 0:
        return np.zeros_like(values)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return power * np.log(values)


class _Divergent:
    """Stand-in for a cumulative integral that is infinite everywhere."""

    def __call__(self, x):
        return np.full(np.shape(x), INF)


class _Scaled:
    """A cumulative integral times a positive constant."""

    def __init__(self, inner, factor: float):
        self.inner = inner
        self.factor = factor

    def __call__(self, x):
        with np.errstate(over="ignore", invalid="ignore"):
            return self.factor * np.asarray(self.inner(x), dtype=float)


def _normalize(spec: Integral) -> tuple[Integral, float]:
    """Pull constant multiples ``(c*K + K)^e = (c+1)^e K^e`` out of the factors."""
    const = 1.0
    factors = []
    for b, e in spec.factors:
        aux = b.aux
        if aux is not None and aux.custom is None and b.cum in (None, aux.base) and e != 0:
            k = aux.scale + (1.0 if b.cum is not None else 0.0)
            if k != 1.0:
                const *= k**e
            factors.append((Base(cum=aux.base), e))
        else:
            factors.append((b, e))
    if const == 1.0 and tuple(factors) == tuple(spec.factors):
        return spec, 1.0
    return Integral(spec.kind, spec.weight, tuple(factors)), const


class Context:
    """Weights ``f``, ``g`` (and ``h``) with their cumulative integrals on one interval."""

    def __init__(
        self,
        weights: dict[str, Weight],
        settings: QuadratureSettings = DEFAULT_SETTINGS,
        force_quadrature: bool = False,
        interval: Interval | None = None,
    ):
        if interval is None:
            ivs = {w.interval for w in weights.values()}
            if len(ivs) != 1:
                raise ConfigInvalid("all weights of a condition must live on the same interval")
            interval = ivs.pop()
        self.interval = interval
        self.weights = dict(weights)
        self.settings = settings
        self.force_quadrature = force_quadrature
        self._cums: dict[str, object] = {}
        self._composites: dict[Integral, object] = {}
        self._lock = threading.RLock()
        self.divergent: list[str] = []
        self.heuristic_divergence = False
        for name, (wname, kind) in CUMULATIVES.items():
            if wname not in self.weights:
                continue
            w = self.weights[wname]
            try:
                c = (upper_tail if kind == UPPER_TAIL else lower_tail)(w, settings, force_quadrature)
                self.heuristic_divergence |= c.diagnostics.get("heuristic_divergence", False)
            except DivergentTail:
                c = _Divergent()
                self.divergent.append(name)
            self._cums[name] = c
        bps = set()
        for w in self.weights.values():
            bps.update(w.breakpoints)
            bps.update(w.singularities)
        self.breakpoints = tuple(sorted(p for p in bps if interval.a < p < interval.b))

    def cumulative(self, name: str):
        try:
            return self._cums[name]
        except KeyError:
            raise ConfigInvalid(f"this context has no cumulative integral {name!r}") from None

    def cumulatives_monotone(self) -> bool:
        """True when every cached cumulative table built so far is monotone."""
        with self._lock:
            objs = list(self._cums.values()) + list(self._composites.values())
        objs = [o.inner if isinstance(o, _Scaled) else o for o in objs]
        return all(o.monotone() for o in objs if isinstance(o, CumulativeIntegral))

    def weight(self, name: str) -> Weight:
        return self.weights[name]

    def restricted(self, weight_name: str, lo: float, hi: float) -> "Context":
        """Same context with one weight multiplied by the indicator of ``(lo, hi)``."""
        w = self.weights[weight_name]
        new = dict(self.weights)
        new[weight_name] = Product((w, Indicator(lo, hi, w.interval)))
        return Context(new, self.settings, self.force_quadrature, self.interval)

    def composite(self, spec: Integral):
        with self._lock:
            if spec in self._composites:
                return self._composites[spec]
        norm, const = _normalize(spec)
        if const != 1.0:
            obj = _Scaled(self.composite(norm), const)
            with self._lock:
                self._composites.setdefault(spec, obj)
                return self._composites[spec]
        factors = tuple((b, e) for b, e in spec.factors if e != 0)
        # plain weight: reuse the context's own cumulative when it matches
        if not factors:
            for name, (wname, kind) in CUMULATIVES.items():
                if wname == spec.weight and kind == spec.kind and name in self._cums:
                    with self._lock:
                        self._composites[spec] = self._cums[name]
                    return self._cums[name]
        w = self.weights[spec.weight]
        if any(isinstance(self._cums.get(b.cum), _Divergent) for b, _ in factors):
            obj = _Divergent()
        else:
            obj = self._build_composite(spec, w, factors)
        with self._lock:
            self._composites.setdefault(spec, obj)
            return self._composites[spec]

    def _build_composite(self, spec: Integral, w: Weight, factors):
        if not factors:
            try:
                tail = upper_tail if spec.kind == UPPER_TAIL else lower_tail
                return tail(w, self.settings, self.force_quadrature)
            except DivergentTail:
                return _Divergent()
        ctx = self

        def integrand(t):
            t = np.asarray(t, dtype=float)
            wt = np.asarray(w(t), dtype=float)
            logs = np.zeros_like(t)
            for b, e in factors:
                logs = logs + _pow_log(b.values(ctx, t), e)
            with np.errstate(over="ignore", invalid="ignore"):
                val = wt * np.exp(logs)
            return np.where(wt == 0, 0.0, val)

        try:
            c = CumulativeIntegral(
                spec.kind,
                integrand,
                self.interval,
                self.settings,
                breakpoints=self.breakpoints,
                name=f"composite({spec.kind}, {spec.weight})",
            )
            self.heuristic_divergence |= c.diagnostics.get("heuristic_divergence", False)
            return c
        except DivergentTail:
            return _Divergent()

    # -- evaluation ------------------------------------------------------
    def term_values(self, term: Term, x: np.ndarray) -> np.ndarray:
        src = term.source
        if isinstance(src, Base):
            return src.values(self, x)
        if isinstance(src, Integral):
            return np.asarray(self.composite(src)(x), dtype=float)
        if isinstance(src, NestedSup):
            return self._nested_sup(src, x)
        raise TypeError(f"unknown term source {src!r}")

    def _nested_sup(self, ns: NestedSup, x: np.ndarray) -> np.ndarray:
        d = ns.base.direction
        if d is not None and ns.exponent != 0:
            d = d if ns.exponent > 0 else -d
            # sup of a monotone function over (a, x) or (x, b) is its limit at x
            # when it moves toward x; otherwise it is the limit at the far end
            toward_x = (d > 0) == (ns.side == "below")
            if toward_x:
                with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                    return ns.base.values(self, x) ** ns.exponent
        a, b = self.interval
        out = np.empty_like(x)
        settings = SupSettings(initial_points=65, rel_tol=1e-6, abs_tol=self.settings.abs_tol)

        def inner(y):
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                return ns.base.values(self, y) ** ns.exponent

        for i, xi in enumerate(x.tolist()):
            sub = Interval(a, xi) if ns.side == "below" else Interval(xi, b)
            out[i] = sup_function(inner, sub, settings).value
        return out

    def evaluate(self, terms: list[Term], x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        logs = np.zeros_like(x)
        for t in terms:
            if t.power == 0:
                continue
            with np.errstate(invalid="ignore"):
                logs = logs + _pow_log(self.term_values(t, x), t.power)
        with np.errstate(over="ignore"):
            out = np.exp(logs)
        return self._mask_unrepresentable(x, out)

    def _mask_unrepresentable(self, x: np.ndarray, out: np.ndarray) -> np.ndarray:
        """NaN (not a sample) where a non-finite value comes from cumulatives outside float range.

        Far out in an exponentially decaying tail a cumulative underflows, its
        negative powers overflow and the product of the two is meaningless.
        """
        bad = ~np.isfinite(out)
        if not np.any(bad):
            return out
        unrep = np.zeros(int(bad.sum()), dtype=bool)
        for c in self._cums.values():
            if isinstance(c, _Divergent):
                continue
            vals = np.asarray(c(x[bad]), dtype=float)
            unrep |= ~((vals >= REPRESENTABLE[0]) & (vals <= REPRESENTABLE[1]))
        idx = np.nonzero(bad)[0][unrep]
        out[idx] = math.nan
        return out


@dataclass
class ConditionValue:
    id: str
    value: float
    witness: float
    converged: bool
    params: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    upper_bound: bool = False
    best_aux: tuple | None = None

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "value": self.value,
            "witness": self.witness,
            "converged": self.converged,
            "params": dict(self.params),
            "diagnostics": dict(self.diagnostics),
        }
        if self.upper_bound:
            d["upper_bound"] = "upper bound via candidate aux functions"
            d["best_aux"] = list(self.best_aux) if self.best_aux else None
        return d


def condition_from_sup(cid: str, est: SupEstimate, params: dict, ctx: Context) -> ConditionValue:
    diag = dict(est.diagnostics)
    diag["grid_size"] = est.grid_size
    diag["refined_passes"] = est.refined_passes
    if ctx.divergent:
        diag["divergent_tail"] = list(ctx.divergent)
    if ctx.heuristic_divergence:
        diag["heuristic_divergence"] = True
    return ConditionValue(cid, est.value, est.witness, est.converged, dict(params), diag)


def sup_of_terms(ctx: Context, terms: list[Term], sub: Interval, sup_settings: SupSettings) -> SupEstimate:
    if not ctx.interval.contains_interval(sub):
        raise ConfigInvalid(f"sub-interval {tuple(sub)} is not inside {tuple(ctx.interval)}")
    if ctx.divergent:
        # a cumulative integral is infinite everywhere: every condition is +inf
        return SupEstimate(INF, math.nan, 0, 0, True, {"divergence": "tail"})
    return sup_function(lambda x: ctx.evaluate(terms, x), sub, sup_settings)


def default_sup_settings(settings: QuadratureSettings) -> SupSettings:
    return SupSettings(abs_tol=settings.abs_tol, value_rel_tol=settings.rel_tol, endpoint_map=settings.endpoint_map)


def require_aux(cid: str, needed: int, *aux) -> None:
    given = sum(a is not None for a in aux[:needed])
    if given < needed:
        raise MissingAuxFunction(f"{cid} needs {needed} auxiliary function(s)")
