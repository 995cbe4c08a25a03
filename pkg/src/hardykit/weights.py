"""Nonnegative weights on an interval with possibly infinite endpoints.

Every weight is an immutable object that evaluates vectorised over numpy
arrays and, where the family allows it, knows its own antiderivative.  A
weight is extended by zero outside its own interval, so a weight declared on
``(0, 1)`` can be used as an integrand on ``(0, inf)``.

Families
--------
``Power(lam)``           ``|t|**lam``
``Exponential(rate)``    ``exp(rate * t)``
``LogPower(lam, mu)``    ``t**lam * |ln t|**mu`` on a subset of ``(0, inf)``
``Constant(c)``          ``c``
``Indicator(lo, hi)``    ``1`` on ``(lo, hi)``, ``0`` elsewhere
``Piecewise(pieces)``    a different weight on each sub-interval
``Product(factors)``     pointwise product
``Tabulated(xs, ys)``    log-linear interpolation (positive samples) or
                         linear interpolation (samples with zeros)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import (
    ConfigInvalid,
    ExponentOutOfRange,
    NonpositiveBase,
    PointOutsideDomain,
    SingularPoint,
)

INF = math.inf


def _parse_endpoint(token: Any) -> float:
    if isinstance(token, str):
        t = token.strip().lower()
        if t in ("inf", "+inf", "infinity"):
            return INF
        if t in ("-inf", "-infinity"):
            return -INF
        raise ConfigInvalid(f"bad interval endpoint {token!r}")
    if isinstance(token, bool) or not isinstance(token, (int, float)):
        raise ConfigInvalid(f"bad interval endpoint {token!r}")
    return float(token)


def format_endpoint(v: float) -> float | str:
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return float(v)


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if math.isnan(a) or math.isnan(b):
            raise ConfigInvalid("interval endpoints must not be NaN")
        if not a < b or a == INF or b == -INF:
            raise ConfigInvalid(f"invalid interval ({a}, {b}); need a < b")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def parse(cls, value: Sequence[Any]) -> "Interval":
        if isinstance(value, Interval):
            return value
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            raise ConfigInvalid(f"interval must be a pair, got {value!r}")
        return cls(_parse_endpoint(value[0]), _parse_endpoint(value[1]))

    def to_json(self) -> list:
        return [format_endpoint(self.a), format_endpoint(self.b)]

    def __iter__(self):
        yield self.a
        yield self.b

    def __contains__(self, x: float) -> bool:
        return self.a < x < self.b

    @property
    def finite(self) -> bool:
        return math.isfinite(self.a) and math.isfinite(self.b)

    def intersect(self, other: "Interval") -> "Interval | None":
        a, b = max(self.a, other.a), min(self.b, other.b)
        return Interval(a, b) if a < b else None

    def contains_interval(self, other: "Interval") -> bool:
        return self.a <= other.a and other.b <= self.b


POSITIVE_HALF_LINE = Interval(0.0, INF)


@dataclass(frozen=True)
class ConjugateExponent:
    p: float
    p_conj: float


def conjugate(p: float) -> ConjugateExponent:
    """Return ``(p, p / (p - 1))``."""
    p = float(p)
    if not p > 1 or math.isnan(p):
        raise ExponentOutOfRange(f"conjugate exponent needs p > 1, got p={p}")
    if p == INF:
        return ConjugateExponent(p, 1.0)
    return ConjugateExponent(p, p / (p - 1.0))


# ---------------------------------------------------------------------------
# closed-form helpers on raw ranges


def _power_integral(lo: float, hi: float, lam: float) -> float:
    """Integral of ``|t|**lam`` over ``(lo, hi)``."""
    if lo >= hi:
        return 0.0
    if lo < 0 < hi:
        return _power_integral(lo, 0.0, lam) + _power_integral(0.0, hi, lam)
    if hi <= 0:
        lo, hi = -hi, -lo
    e = lam + 1.0
    if e == 0.0:
        if lo == 0.0 or hi == INF:
            return INF
        return math.log(hi / lo) if hi / lo < 2 else math.log(hi) - math.log(lo)
    if lo == 0.0:
        if e < 0:
            return INF
        return INF if hi == INF else hi**e / e
    if hi == INF:
        return INF if e > 0 else lo**e / (-e)
    try:
        return lo**e * math.expm1(e * math.log(hi / lo)) / e
    except OverflowError:
        return INF


def _exp_integral(lo: float, hi: float, rate: float) -> float:
    """Integral of ``exp(rate * t)`` over ``(lo, hi)``."""
    if lo >= hi:
        return 0.0
    if rate == 0.0:
        return hi - lo
    if lo == -INF:
        if rate < 0:
            return INF
        try:
            return math.exp(rate * hi) / rate
        except OverflowError:
            return INF
    if hi == INF:
        if rate > 0:
            return INF
        try:
            return math.exp(rate * lo) / (-rate)
        except OverflowError:
            return INF
    try:
        return math.exp(rate * lo) * math.expm1(rate * (hi - lo)) / rate
    except OverflowError:
        return INF


def _power_integral_array(lo: np.ndarray, hi: np.ndarray, lam: float) -> np.ndarray:
    """Vectorised :func:`_power_integral` for ``0 <= lo``."""
    e = lam + 1.0
    # the two shapes used by cumulative integrals on (0, b) and (a, inf)
    if np.ndim(lo) == 0 and lo == 0.0 and e > 0:
        hi = np.asarray(hi, dtype=float)
        with np.errstate(over="ignore"):
            return np.where(hi > 0, hi**e / e, 0.0)
    if np.ndim(hi) == 0 and hi == INF and e < 0 and np.all(np.asarray(lo) > 0):
        lo = np.asarray(lo, dtype=float)
        with np.errstate(over="ignore"):
            return lo**e / (-e)
    lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    out = np.zeros(lo.shape)
    live = lo < hi
    e = lam + 1.0
    with np.errstate(all="ignore"):
        if e == 0.0:
            val = np.where((lo == 0.0) | (hi == INF), INF, np.log(hi) - np.log(lo))
            near = hi / np.where(lo == 0.0, 1.0, lo) < 2
            val = np.where(near & (lo > 0) & np.isfinite(hi), np.log(hi / np.where(lo == 0.0, 1.0, lo)), val)
        else:
            safe_lo = np.where(lo == 0.0, 1.0, lo)
            mid = safe_lo**e * np.expm1(e * np.log(hi / safe_lo)) / e
            mid = np.where(np.isnan(mid), INF, mid)
            at_zero = INF if e < 0 else np.where(hi == INF, INF, hi**e / e)
            at_inf = INF if e > 0 else lo**e / (-e)
            val = np.where(lo == 0.0, at_zero, np.where(hi == INF, at_inf, mid))
    out[live] = np.asarray(val, dtype=float)[live] if np.ndim(val) else val
    return out


def _exp_integral_array(lo: np.ndarray, hi: np.ndarray, rate: float) -> np.ndarray:
    """Vectorised :func:`_exp_integral`."""
    lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    out = np.zeros(lo.shape)
    live = lo < hi
    if rate == 0.0:
        out[live] = (hi - lo)[live]
        return out
    with np.errstate(all="ignore"):
        mid = np.exp(rate * lo) * np.expm1(rate * (hi - lo)) / rate
        from_minus_inf = INF if rate < 0 else np.exp(rate * hi) / rate
        to_inf = INF if rate > 0 else np.exp(rate * lo) / (-rate)
        val = np.where(lo == -INF, from_minus_inf, np.where(hi == INF, to_inf, mid))
        val = np.where(np.isnan(val), INF, val)
    out[live] = np.asarray(val, dtype=float)[live]
    return out


def _xlogx_minus_x(t: float) -> float:
    if t == 0.0:
        return 0.0
    return t * math.log(t) - t


def _log_abs_integral(lo: float, hi: float) -> float:
    """Integral of ``ln|t|`` over ``(lo, hi)``."""
    if lo >= hi:
        return 0.0
    if lo < 0 < hi:
        return _log_abs_integral(lo, 0.0) + _log_abs_integral(0.0, hi)
    if hi <= 0:
        lo, hi = -hi, -lo
    if hi == INF:
        return INF
    return _xlogx_minus_x(hi) - _xlogx_minus_x(lo)


def _scaled_infinite(coef: float, value: float) -> float:
    if coef == 0.0:
        return 0.0
    return coef * value


# ---------------------------------------------------------------------------
# weight families


class Weight:
    """Base class; concrete families are frozen dataclasses."""

    interval: Interval

    # -- evaluation --------------------------------------------------------
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = (x > self.interval.a) & (x < self.interval.b)
        if np.any(inside):
            out[inside] = self._values(x[inside])
        return out

    def _values(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    # -- structure ---------------------------------------------------------
    @property
    def singularities(self) -> tuple[float, ...]:
        return ()

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Points where the weight may jump, including finite interval ends."""
        return tuple(v for v in self.interval if math.isfinite(v))

    def integral(self, lo: float, hi: float) -> float | None:
        """Closed-form integral over ``(lo, hi)`` or ``None``."""
        return None

    def integral_array(self, lo, hi) -> np.ndarray | None:
        """Vectorised closed-form integrals over ``(lo[i], hi[i])``, or ``None``."""
        return None

    def log_integral(self, lo: float, hi: float) -> float | None:
        """Closed-form integral of ``ln w`` over ``(lo, hi)`` or ``None``."""
        return None

    def _clip_array(self, lo, hi):
        return np.maximum(lo, self.interval.a), np.minimum(hi, self.interval.b)

    def power(self, r: float) -> "Weight":
        return PowerOf(self, float(r), self.interval)

    def positive_until(self) -> float:
        """Largest ``x`` such that the weight is positive a.e. on ``(a, x)``."""
        return self.interval.b

    def to_json(self) -> dict:
        raise NotImplementedError

    def _clip(self, lo: float, hi: float) -> tuple[float, float]:
        return max(lo, self.interval.a), min(hi, self.interval.b)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Product((Constant(float(other), self.interval), self), self.interval)
        if isinstance(other, Weight):
            return Product((self, other))
        return NotImplemented

    __rmul__ = __mul__


@dataclass(frozen=True)
class Power(Weight):
    lam: float
    interval: Interval = POSITIVE_HALF_LINE

    def _values(self, x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.power(np.abs(x), self.lam)

    @property
    def singularities(self):
        a, b = self.interval
        if self.lam < 0 and a <= 0.0 <= b:
            return (0.0,)
        return ()

    def integral(self, lo, hi):
        lo, hi = self._clip(lo, hi)
        return _power_integral(lo, hi, self.lam)

    def integral_array(self, lo, hi):
        if self.interval.a < 0:
            return None
        return _power_integral_array(*self._clip_array(lo, hi), self.lam)

    def log_integral(self, lo, hi):
        lo, hi = self._clip(lo, hi)
        if lo >= hi:
            return 0.0
        return _scaled_infinite(self.lam, _log_abs_integral(lo, hi))

    def power(self, r):
        return Power(self.lam * r, self.interval)

    def to_json(self):
        return {"family": "power", "lambda": self.lam, "interval": self.interval.to_json()}


@dataclass(frozen=True)
class Exponential(Weight):
    rate: float
    interval: Interval = POSITIVE_HALF_LINE

    def _values(self, x):
        with np.errstate(over="ignore"):
            return np.exp(self.rate * x)

    def integral(self, lo, hi):
        lo, hi = self._clip(lo, hi)
        return _exp_integral(lo, hi, self.rate)

    def integral_array(self, lo, hi):
        return _exp_integral_array(*self._clip_array(lo, hi), self.rate)

    def log_integral(self, lo, hi):
        lo, hi = self._clip(lo, hi)
        if lo >= hi:
            return 0.0
        if self.rate == 0.0:
            return 0.0
        if math.isinf(lo) or math.isinf(hi):
            return _scaled_infinite(self.rate, INF if hi == INF else -INF)
        return self.rate * (hi - lo) * (hi + lo) / 2.0

    def power(self, r):
        return Exponential(self.rate * r, self.interval)

    def to_json(self):
        return {"family": "exponential", "rate": self.rate, "interval": self.interval.to_json()}


@dataclass(frozen=True)
class LogPower(Weight):
    lam: float
    mu: float
    interval: Interval = POSITIVE_HALF_LINE

    def __post_init__(self):
        if self.interval.a < 0:
            raise ConfigInvalid("logpower weights live on a subset of (0, inf)")

    def _values(self, x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.power(x, self.lam) * np.power(np.abs(np.log(x)), self.mu)

    @property
    def singularities(self):
        a, b = self.interval
        pts = []
        if a == 0.0 and (self.lam < 0 or self.mu != 0):
            pts.append(0.0)
        if self.mu < 0 and a <= 1.0 <= b:
            pts.append(1.0)
        return tuple(pts)

    @property
    def breakpoints(self):
        extra = (1.0,) if self.interval.a < 1.0 < self.interval.b else ()
        return super().breakpoints + extra

    def power(self, r):
        return LogPower(self.lam * r, self.mu * r, self.interval)

    def to_json(self):
        return {
            "family": "logpower",
            "lambda": self.lam,
            "mu": self.mu,
            "interval": self.interval.to_json(),
        }


@dataclass(frozen=True)
class Constant(Weight):
    c: float
    interval: Interval = POSITIVE_HALF_LINE

    def __post_init__(self):
        if not self.c >= 0 or math.isinf(self.c):
            raise ConfigInvalid(f"constant weight must be finite and >= 0, got {self.c}")

    def _values(self, x):
        return np.full_like(x, self.c)

    def integral(self, lo, hi):
        lo, hi = self._clip(lo, hi)
        if lo >= hi or self.c == 0.0:
            return 0.0
        return self.c * (hi - lo)

    def integral_array(self, lo, hi):
        if self.c == 0.0:
            return np.zeros(np.broadcast(lo, hi).shape)
        lo, hi = self._clip_array(lo, hi)
        return np.where(lo < hi, self.c * (hi - lo), 0.0)

    def log_integral(self, lo, hi):
        lo, hi = self._clip(lo, hi)
        if lo >= hi:
            return 0.0
        if self.c == 0.0:
            return -INF
        return _scaled_infinite(math.log(self.c), hi - lo)

    def power(self, r):
        if r == 0:
            return Constant(1.0, self.interval)
        if self.c == 0.0 and r < 0:
            raise NonpositiveBase("negative power of the zero weight")
        return Constant(self.c**r, self.interval)

    def positive_until(self):
        return self.interval.b if self.c > 0 else self.interval.a

    def to_json(self):
        return {"family": "constant", "value": self.c, "interval": self.interval.to_json()}


@dataclass(frozen=True)
class Indicator(Weight):
    lo: float
    hi: float
    interval: Interval = POSITIVE_HALF_LINE

    def __post_init__(self):
        Interval(self.lo, self.hi)

    @property
    def support(self) -> Interval:
        return Interval(self.lo, self.hi)

    def _covers_interval(self) -> bool:
        return self.support.contains_interval(self.interval)

    def _values(self, x):
        return ((x > self.lo) & (x < self.hi)).astype(float)

    @property
    def breakpoints(self):
        pts = [v for v in (self.lo, self.hi) if math.isfinite(v)]
        return super().breakpoints + tuple(pts)

    def integral(self, lo, hi):
        lo, hi = self._clip(lo, hi)
        lo, hi = max(lo, self.lo), min(hi, self.hi)
        return hi - lo if lo < hi else 0.0

    def integral_array(self, lo, hi):
        lo, hi = self._clip_array(lo, hi)
        lo, hi = np.maximum(lo, self.lo), np.minimum(hi, self.hi)
        return np.where(lo < hi, hi - lo, 0.0)

    def log_integral(self, lo, hi):
        lo, hi = self._clip(lo, hi)
        if lo >= hi:
            return 0.0
        if self.lo <= lo and hi <= self.hi:
            return 0.0
        return -INF

    def power(self, r):
        if r == 0:
            return Constant(1.0, self.interval)
        if r < 0 and not self._covers_interval():
            raise NonpositiveBase("indicator vanishes on a set of positive measure")
        return self

    def positive_until(self):
        a = self.interval.a
        if self.lo > a:
            return a
        return min(self.hi, self.interval.b)

    def to_json(self):
        return {
            "family": "indicator",
            "support": [format_endpoint(self.lo), format_endpoint(self.hi)],
            "interval": self.interval.to_json(),
        }


@dataclass(frozen=True)
class Piecewise(Weight):
    pieces: tuple  # of (Interval, Weight), sorted and disjoint
    interval: Interval = POSITIVE_HALF_LINE

    def __post_init__(self):
        prev = -INF
        for sub, w in self.pieces:
            if not isinstance(sub, Interval) or not isinstance(w, Weight):
                raise ConfigInvalid("piecewise pieces must be (Interval, Weight) pairs")
            if sub.a < prev:
                raise ConfigInvalid("piecewise sub-intervals must be sorted and disjoint")
            prev = sub.b

    def _values(self, x):
        out = np.zeros_like(x)
        for sub, w in self.pieces:
            m = (x > sub.a) & (x < sub.b)
            if np.any(m):
                out[m] = w(x[m])
        return out

    def _has_gaps(self) -> bool:
        pos = self.interval.a
        for sub, w in self.pieces:
            if sub.a > pos or w.positive_until() < min(sub.b, w.interval.b):
                return True
            pos = sub.b
        return pos < self.interval.b

    @property
    def singularities(self):
        pts = set()
        for sub, w in self.pieces:
            pts.update(s for s in w.singularities if sub.a <= s <= sub.b)
        return tuple(sorted(pts))

    @property
    def breakpoints(self):
        pts = set(super().breakpoints)
        for sub, w in self.pieces:
            pts.update(v for v in sub if math.isfinite(v))
            pts.update(v for v in w.breakpoints if sub.a < v < sub.b)
        return tuple(sorted(pts))

    def integral(self, lo, hi):
        lo, hi = self._clip(lo, hi)
        total = 0.0
        for sub, w in self.pieces:
            l, h = max(lo, sub.a), min(hi, sub.b)
            if l >= h:
                continue
            v = w.integral(l, h)
            if v is None:
                return None
            total += v
        return total

    def log_integral(self, lo, hi):
        lo, hi = self._clip(lo, hi)
        if lo >= hi:
            return 0.0
        total, pos = 0.0, lo
        for sub, w in self.pieces:
            l, h = max(lo, sub.a), min(hi, sub.b)
            if l >= h:
                continue
            if l > pos:
                return -INF
            v = w.log_integral(l, h)
            if v is None:
                return None
            total += v
            pos = h
        return total if pos >= hi else -INF

    def power(self, r):
        if r < 0 and self._has_gaps():
            raise NonpositiveBase("piecewise weight vanishes on a set of positive measure")
        return Piecewise(tuple((sub, w.power(r)) for sub, w in self.pieces), self.interval)

    def positive_until(self):
        pos = self.interval.a
        for sub, w in self.pieces:
            if sub.a > pos:
                return pos
            end = min(sub.b, w.positive_until())
            if end < sub.b:
                return max(pos, end)
            pos = sub.b
        return min(pos, self.interval.b)

    def to_json(self):
        return {
            "family": "piecewise",
            "pieces": [{"interval": sub.to_json(), "weight": w.to_json()} for sub, w in self.pieces],
            "interval": self.interval.to_json(),
        }


def _intersect_all(weights: Iterable[Weight]) -> Interval:
    a, b = -INF, INF
    for w in weights:
        a, b = max(a, w.interval.a), min(b, w.interval.b)
    if not a < b:
        raise ConfigInvalid("product factors have disjoint intervals")
    return Interval(a, b)


@dataclass(frozen=True)
class Product(Weight):
    factors: tuple
    interval: Interval = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ConfigInvalid("product needs at least one factor")
        object.__setattr__(self, "factors", factors)
        if self.interval is None:
            object.__setattr__(self, "interval", _intersect_all(factors))

    def _values(self, x):
        out = np.ones_like(x)
        with np.errstate(invalid="ignore", over="ignore"):
            for w in self.factors:
                out = out * w(x)
        # a zero factor wins over a singular one (0 * inf := 0)
        return np.where(np.isnan(out), 0.0, out)

    def _flat(self) -> list[Weight]:
        out = []
        for w in self.factors:
            out.extend(w._flat() if isinstance(w, Product) else [w])
        return out

    @property
    def singularities(self):
        return tuple(sorted({s for w in self.factors for s in w.singularities}))

    @property
    def breakpoints(self):
        pts = set(super().breakpoints)
        for w in self.factors:
            pts.update(w.breakpoints)
        return tuple(sorted(pts))

    def integral(self, lo, hi):
        lo, hi = self._clip(lo, hi)
        const, lam, rate, has_power = 1.0, 0.0, 0.0, False
        kernels = []
        for w in self._flat():
            lo, hi = max(lo, w.interval.a), min(hi, w.interval.b)
            if isinstance(w, Constant):
                const *= w.c
            elif isinstance(w, Indicator):
                lo, hi = max(lo, w.lo), min(hi, w.hi)
            elif isinstance(w, Power):
                lam += w.lam
                has_power = True
            elif isinstance(w, Exponential):
                rate += w.rate
            else:
                kernels.append(w)
        if const == 0.0 or lo >= hi:
            return 0.0
        if kernels:
            if len(kernels) > 1 or has_power or rate != 0.0:
                return None
            v = kernels[0].integral(lo, hi)
            return None if v is None else _scaled_infinite(const, v)
        if has_power and lam != 0.0 and rate != 0.0:
            return None
        if rate != 0.0:
            return _scaled_infinite(const, _exp_integral(lo, hi, rate))
        return _scaled_infinite(const, _power_integral(lo, hi, lam))

    def integral_array(self, lo, hi):
        lo, hi = self._clip_array(lo, hi)
        const, lam, rate, has_power = 1.0, 0.0, 0.0, False
        for w in self._flat():
            lo, hi = w._clip_array(lo, hi)
            if isinstance(w, Constant):
                const *= w.c
            elif isinstance(w, Indicator):
                lo, hi = np.maximum(lo, w.lo), np.minimum(hi, w.hi)
            elif isinstance(w, Power):
                lam += w.lam
                has_power = True
            elif isinstance(w, Exponential):
                rate += w.rate
            else:
                return None
        if has_power and lam != 0.0 and rate != 0.0:
            return None
        if const == 0.0:
            return np.zeros(np.broadcast(lo, hi).shape)
        if rate != 0.0:
            val = _exp_integral_array(lo, hi, rate)
        elif has_power and lam != 0.0:
            if np.any(lo < 0):
                return None
            val = _power_integral_array(lo, hi, lam)
        else:
            val = np.where(lo < hi, hi - lo, 0.0)
        return const * val

    def log_integral(self, lo, hi):
        lo, hi = self._clip(lo, hi)
        if lo >= hi:
            return 0.0
        total = 0.0
        for w in self.factors:
            v = w.log_integral(lo, hi)
            if v is None:
                return None
            total += v
        return total

    def power(self, r):
        return Product(tuple(w.power(r) for w in self.factors), self.interval)

    def positive_until(self):
        return min(min(w.positive_until() for w in self.factors), self.interval.b)

    def to_json(self):
        return {
            "family": "product",
            "factors": [w.to_json() for w in self.factors],
            "interval": self.interval.to_json(),
        }


@dataclass(frozen=True)
class PowerOf(Weight):
    """``base(x) ** r`` for bases without a closed-form power rule."""

    base: Weight
    r: float
    interval: Interval = POSITIVE_HALF_LINE

    def _values(self, x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.power(self.base(x), self.r)

    @property
    def singularities(self):
        return self.base.singularities

    @property
    def breakpoints(self):
        return self.base.breakpoints

    def log_integral(self, lo, hi):
        v = self.base.log_integral(lo, hi)
        return None if v is None else _scaled_infinite(self.r, v)

    def power(self, r):
        return PowerOf(self.base, self.r * r, self.interval)

    def positive_until(self):
        return self.base.positive_until()

    def to_json(self):
        return {"family": "power_of", "base": self.base.to_json(), "r": self.r}


@dataclass(frozen=True)
class Tabulated(Weight):
    xs: tuple
    ys: tuple
    interval: Interval = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        xs = tuple(float(v) for v in self.xs)
        ys = tuple(float(v) for v in self.ys)
        if len(xs) < 2 or len(xs) != len(ys):
            raise ConfigInvalid("tabulated weight needs >= 2 matching samples")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ConfigInvalid("tabulated sample points must be strictly increasing")
        if any(not (y >= 0) or math.isinf(y) for y in ys):
            raise ConfigInvalid("tabulated values must be finite and >= 0")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        if self.interval is None:
            object.__setattr__(self, "interval", Interval(xs[0], xs[-1]))

    @property
    def positive(self) -> bool:
        return min(self.ys) > 0

    def _values(self, x):
        xs, ys = np.asarray(self.xs), np.asarray(self.ys)
        inside = (x >= xs[0]) & (x <= xs[-1])
        out = np.zeros_like(x)
        if self.positive:
            out[inside] = np.exp(np.interp(x[inside], xs, np.log(ys)))
        else:
            out[inside] = np.interp(x[inside], xs, ys)
        return out

    @property
    def breakpoints(self):
        return tuple(sorted(set(super().breakpoints) | set(self.xs)))

    @property
    def singularities(self):
        return ()

    def _segment_integral(self, x0, y0, x1, y1):
        if self.positive:
            if y0 == y1 or abs(math.log(y1 / y0)) < 1e-12:
                return 0.5 * (y0 + y1) * (x1 - x0)
            return (x1 - x0) * (y1 - y0) / math.log(y1 / y0)
        return 0.5 * (y0 + y1) * (x1 - x0)

    def integral(self, lo, hi):
        lo, hi = self._clip(lo, hi)
        lo, hi = max(lo, self.xs[0]), min(hi, self.xs[-1])
        if lo >= hi:
            return 0.0
        pts = [lo] + [v for v in self.xs if lo < v < hi] + [hi]
        vals = self._values(np.asarray(pts))
        return float(
            sum(self._segment_integral(pts[i], vals[i], pts[i + 1], vals[i + 1]) for i in range(len(pts) - 1))
        )

    def log_integral(self, lo, hi):
        if not self.positive:
            return None
        lo, hi = self._clip(lo, hi)
        if lo >= hi:
            return 0.0
        pts = [lo] + [v for v in self.xs if lo < v < hi] + [hi]
        logs = np.log(self._values(np.asarray(pts)))
        return float(sum(0.5 * (logs[i] + logs[i + 1]) * (pts[i + 1] - pts[i]) for i in range(len(pts) - 1)))

    def power(self, r):
        if self.positive:
            return Tabulated(self.xs, tuple(y**r for y in self.ys), self.interval)
        if r < 0:
            zeros = [y == 0 for y in self.ys]
            if any(z0 and z1 for z0, z1 in zip(zeros, zeros[1:])):
                raise NonpositiveBase("tabulated weight vanishes on a set of positive measure")
        return PowerOf(self, float(r), self.interval)

    def positive_until(self):
        for i in range(len(self.ys) - 1):
            if self.ys[i] == 0 and self.ys[i + 1] == 0:
                return self.xs[i] if i > 0 else self.interval.a
        return self.interval.b

    def to_json(self):
        return {
            "family": "tabulated",
            "x": list(self.xs),
            "y": list(self.ys),
            "interval": self.interval.to_json(),
        }


# ---------------------------------------------------------------------------
# operations


def eval_weight(w: Weight, x: float) -> float:
    x = float(x)
    if x not in w.interval:
        raise PointOutsideDomain(f"x={x} is not inside {tuple(w.interval)}")
    if x in w.singularities:
        raise SingularPoint(f"x={x} is a declared singularity")
    return float(w(np.array([x]))[0])


def power_transform(w: Weight, r: float) -> Weight:
    """Return a weight representing ``w(x) ** r``."""
    return w.power(float(r))


def scale(w: Weight, c: float) -> Weight:
    return Product((Constant(float(c), w.interval), w), w.interval)


_FAMILY_KEYS = {
    "power": {"lambda"},
    "exponential": {"rate"},
    "logpower": {"lambda", "mu"},
    "constant": {"value"},
    "indicator": {"support"},
    "piecewise": {"pieces"},
    "product": {"factors"},
    "tabulated": {"x", "y"},
}


def parse_weight(doc: dict, default_interval: Interval | None = None) -> Weight:
    """Build a weight from its declarative JSON form.

    >>> parse_weight({"family": "power", "lambda": -2.0, "interval": [1.0, "inf"]})
    Power(lam=-2.0, interval=Interval(a=1.0, b=inf))
    """
    if not isinstance(doc, dict):
        raise ConfigInvalid(f"weight must be an object, got {doc!r}")
    family = doc.get("family")
    if family not in _FAMILY_KEYS:
        raise ConfigInvalid(f"unknown weight family {family!r}")
    allowed = _FAMILY_KEYS[family] | {"family", "interval", "scale"}
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigInvalid(f"unknown keys for {family} weight: {sorted(unknown)}")
    missing = _FAMILY_KEYS[family] - set(doc)
    if missing:
        raise ConfigInvalid(f"missing keys for {family} weight: {sorted(missing)}")
    if "interval" in doc:
        interval = Interval.parse(doc["interval"])
    elif default_interval is not None:
        interval = default_interval
    elif family == "tabulated":
        interval = None
    else:
        interval = POSITIVE_HALF_LINE

    def num(key):
        v = doc[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigInvalid(f"{family}.{key} must be a number")
        return float(v)

    if family == "power":
        w: Weight = Power(num("lambda"), interval)
    elif family == "exponential":
        w = Exponential(num("rate"), interval)
    elif family == "logpower":
        w = LogPower(num("lambda"), num("mu"), interval)
    elif family == "constant":
        w = Constant(num("value"), interval)
    elif family == "indicator":
        sup = Interval.parse(doc["support"])
        w = Indicator(sup.a, sup.b, interval)
    elif family == "piecewise":
        pieces = []
        for item in doc["pieces"]:
            if set(item) != {"interval", "weight"}:
                raise ConfigInvalid("piecewise pieces need exactly 'interval' and 'weight'")
            sub = Interval.parse(item["interval"])
            pieces.append((sub, parse_weight(item["weight"], sub)))
        w = Piecewise(tuple(pieces), interval)
    elif family == "product":
        w = Product(tuple(parse_weight(f, interval) for f in doc["factors"]))
    else:
        w = Tabulated(tuple(doc["x"]), tuple(doc["y"]), interval)
    if "scale" in doc:
        w = scale(w, num("scale"))
    return w
