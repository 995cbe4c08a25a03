"""Adaptive quadrature on possibly unbounded intervals and cumulative integrals.

The workhorse is :func:`gk_batch`, a vectorised adaptive 21-point
Gauss-Kronrod rule that integrates many finite panels at once.  Endpoints are
approached with geometric shells (halving toward a finite endpoint, doubling
toward infinity); the remaining tail is extrapolated from the shell ratio and
divergence is declared when 30 successive shells fail to shrink.

:class:`CumulativeIntegral` represents ``x -> int_x^b w`` (upper tail) or
``x -> int_a^x w`` (lower tail).  Values are assembled from a fixed table of
knot-to-knot panel integrals plus one partial panel, so the value at ``x``
depends on ``x`` only and never on the order of earlier queries.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from sortedcontainers import SortedDict

from .errors import (
    ConfigInvalid,
    DivergentTail,
    MonotonicityViolation,
    PointOutsideDomain,
    ToleranceNotReached,
)
from .maps import ENDPOINT_MAPS, IntervalMap
from .weights import Interval, Weight

INF = math.inf

# QUADPACK qk21 abscissae (positive half) and weights
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525452314,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[:-1][::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[:-1][::-1]])
_wg_half = np.zeros(10)
_wg_half[1::2] = _WG
GAUSS_WEIGHTS = np.concatenate([_wg_half, [0.0], _wg_half[::-1]])

_EPMACH = np.finfo(float).eps
_BAD_DEPTH = 12
_UFLOW = np.finfo(float).tiny


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    endpoint_map: str = "none"

    def __post_init__(self):
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            raise ConfigInvalid("quadrature tolerances must be positive")
        if int(self.max_subdivisions) < 1:
            raise ConfigInvalid("max_subdivisions must be >= 1")
        if self.endpoint_map not in ENDPOINT_MAPS:
            raise ConfigInvalid(f"endpoint_map must be one of {ENDPOINT_MAPS}")

    @classmethod
    def from_dict(cls, doc: dict | None) -> "QuadratureSettings":
        doc = dict(doc or {})
        unknown = set(doc) - {"rel_tol", "abs_tol", "max_subdivisions", "endpoint_map"}
        if unknown:
            raise ConfigInvalid(f"unknown quadrature keys: {sorted(unknown)}")
        return cls(**doc)

    def to_dict(self) -> dict:
        return {
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "max_subdivisions": self.max_subdivisions,
            "endpoint_map": self.endpoint_map,
        }


DEFAULT_SETTINGS = QuadratureSettings()


def _gk21(func, a: np.ndarray, b: np.ndarray):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = center[:, None] + half[:, None] * NODES[None, :]
    with np.errstate(all="ignore"):
        fx = np.asarray(func(x.ravel()), dtype=float).reshape(x.shape)
        resk = np.sum(fx * KRONROD_WEIGHTS, axis=1)
        resg = np.sum(fx * GAUSS_WEIGHTS, axis=1)
        resabs = np.sum(np.abs(fx) * KRONROD_WEIGHTS, axis=1) * np.abs(half)
        resasc = np.sum(np.abs(fx - 0.5 * resk[:, None]) * KRONROD_WEIGHTS, axis=1) * np.abs(half)
        value = resk * half
        err = np.abs((resk - resg) * half)
        scaled = np.where(
            (resasc != 0) & (err != 0),
            resasc * np.minimum(1.0, (200.0 * err / np.where(resasc == 0, 1.0, resasc)) ** 1.5),
            err,
        )
        scaled = np.where(resabs > _UFLOW / (50 * _EPMACH), np.maximum(50 * _EPMACH * resabs, scaled), scaled)
    bad = ~np.all(np.isfinite(fx), axis=1)
    scaled[bad] = INF
    value[bad] = np.where(np.isfinite(value[bad]), value[bad], np.nan)
    # +inf at an interior node: the panel integral is +inf (or beyond float range)
    overflow = np.any(fx == INF, axis=1)
    value[overflow] = INF
    return value, scaled, bad, overflow


def gk_batch(func, lo, hi, rel_tol=1e-10, abs_tol=1e-14, max_subdivisions=2000):
    """Integrate ``func`` over each finite ``(lo[i], hi[i])`` independently.

    Returns ``(values, errors, converged)``.  Refinement decisions for one
    interval depend on that interval alone, so a result does not depend on
    what else shares the batch.  A panel with an infinite node value counts
    as ``inf`` at once; panels with NaN node values are split at most
    ``_BAD_DEPTH`` times and then reported as ``inf``.
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    n = lo.size
    values = np.zeros(n)
    errors = np.zeros(n)
    converged = np.ones(n, dtype=bool)
    if n == 0:
        return values, errors, converged
    width = hi - lo
    live = width > 0
    a, b = lo[live], hi[live]
    owner = np.nonzero(live)[0]
    panels = np.ones(n, dtype=np.int64)
    acc_val = np.zeros(n)
    acc_err = np.zeros(n)
    depth = np.zeros(a.size, dtype=np.int64)
    while a.size:
        val, err, bad, overflow = _gk21(func, a, b)
        tot_val = acc_val + np.bincount(owner, np.where(np.isfinite(val), val, 0.0), minlength=n)
        tot_err = acc_err + np.bincount(owner, err, minlength=n)
        tol = np.maximum(abs_tol, rel_tol * np.abs(tot_val))
        owner_done = tot_err <= tol
        exhausted = panels >= max_subdivisions
        finish = owner_done[owner] | exhausted[owner]
        # per-panel acceptance: error share proportional to panel width
        share = tol[owner] * (b - a) / width[owner]
        keep = finish | (err <= 0.5 * share) | overflow | (bad & (depth >= _BAD_DEPTH))
        if np.any(keep):
            np.add.at(acc_val, owner[keep], val[keep])
            np.add.at(acc_err, owner[keep], err[keep])
        split = ~keep
        if not np.any(split):
            break
        sa, sb, so, sd = a[split], b[split], owner[split], depth[split] + 1
        mid = 0.5 * (sa + sb)
        degenerate = (mid <= sa) | (mid >= sb)
        if np.any(degenerate):
            # cannot bisect further; accept what we have
            np.add.at(acc_val, so[degenerate], val[split][degenerate])
            np.add.at(acc_err, so[degenerate], err[split][degenerate])
            keep_d = ~degenerate
            sa, sb, so, sd, mid = sa[keep_d], sb[keep_d], so[keep_d], sd[keep_d], mid[keep_d]
        np.add.at(panels, so, 1)
        a = np.concatenate([sa, mid])
        b = np.concatenate([mid, sb])
        owner = np.concatenate([so, so])
        depth = np.concatenate([sd, sd])
        order = np.argsort(owner, kind="stable")
        a, b, owner, depth = a[order], b[order], owner[order], depth[order]
    values[:] = acc_val
    errors[:] = acc_err
    tol = np.maximum(abs_tol, rel_tol * np.abs(values))
    converged = errors <= tol
    nonfinite = ~np.isfinite(errors)
    values[nonfinite] = INF
    converged[nonfinite] = True
    return values, errors, converged


@dataclass
class QuadResult:
    value: float
    error: float
    converged: bool = True
    diagnostics: dict = field(default_factory=dict)


DIVERGENCE_SHELLS = 30
DIVERGENCE_RATIO = 0.99
_MIN_SHELLS = 6
_MAX_SHELLS = 400
_BATCH = 16


def _shell_edges(inner: float, end: float, start: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(start, start + count, dtype=float)
    if math.isinf(end):
        sgn = 1.0 if end > 0 else -1.0
        w = max(1.0, abs(inner))
        p = inner + sgn * w * (np.exp2(k) - 1.0)
        q = inner + sgn * w * (np.exp2(k + 1.0) - 1.0)
    else:
        d = inner - end
        p = end + d * np.exp2(-k)
        q = end + d * np.exp2(-(k + 1.0))
    lo, hi = np.minimum(p, q), np.maximum(p, q)
    return lo, hi


def _toward_endpoint(func, inner: float, end: float, s: QuadratureSettings, singular: bool = True) -> QuadResult:
    """Integrate from ``inner`` to ``end`` (either order) with geometric shells.

    Divergence is only declared when ``singular`` is set; toward an ordinary
    interior point the shells may grow for a long time before they shrink.
    """
    shells: list[float] = []
    errs: list[float] = []
    diag = {"shells": 0, "divergence": None, "tail_extrapolation": 0.0}
    prev_total = None
    grow_run = 0
    k = 0
    converged = True
    while k < _MAX_SHELLS:
        lo, hi = _shell_edges(inner, end, k, _BATCH)
        valid = (hi > lo) & np.isfinite(lo) & np.isfinite(hi)
        vals, e, conv = gk_batch(func, lo[valid], hi[valid], s.rel_tol, s.abs_tol, s.max_subdivisions)
        if not np.all(conv):
            converged = False
        if not np.any(valid):
            break
        stop = False
        for v, ev in zip(vals, e):
            if not math.isfinite(v):
                diag["shells"] = len(shells) + 1
                diag["divergence"] = "nonfinite"
                return QuadResult(INF if not v < 0 else -INF, INF, True, diag)
            if shells and abs(v) >= DIVERGENCE_RATIO * abs(shells[-1]) and abs(v) > 0:
                grow_run += 1
            else:
                grow_run = 0
            shells.append(float(v))
            errs.append(float(ev))
            if singular and grow_run >= DIVERGENCE_SHELLS:
                diag["shells"] = len(shells)
                diag["divergence"] = "heuristic"
                sign = -1.0 if sum(shells) < 0 else 1.0
                return QuadResult(sign * INF, INF, True, diag)
            n = len(shells)
            if n < _MIN_SHELLS:
                continue
            partial = math.fsum(shells)
            last, before = abs(shells[-1]), abs(shells[-2])
            scale = max(s.abs_tol, s.rel_tol * abs(partial))
            if last <= 1e-3 * scale and before <= 1e-3 * scale:
                diag["tail_extrapolation"] = 0.0
                stop = True
                break
            if before > 0 and last < DIVERGENCE_RATIO * before:
                rho = last / before
                tail = shells[-1] * rho / (1.0 - rho)
                total = partial + tail
                if prev_total is not None and abs(total - prev_total) <= scale:
                    diag["tail_extrapolation"] = tail
                    shells.append(tail)
                    errs.append(abs(total - prev_total))
                    stop = True
                    break
                prev_total = total
            else:
                prev_total = None
        k += _BATCH
        if stop or not np.all(valid):
            break
    else:
        converged = False
    diag["shells"] = len(shells)
    value = math.fsum(shells)
    return QuadResult(value, math.fsum(errs), converged, diag)


def _pick_inner(lo: float, hi: float) -> float:
    if math.isfinite(lo) and math.isfinite(hi):
        return 0.5 * (lo + hi)
    if math.isfinite(lo):
        return lo + max(1.0, abs(lo))
    if math.isfinite(hi):
        return hi - max(1.0, abs(hi))
    return 0.0


def integrate_function(
    func: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    breakpoints=(),
    singular_ends: tuple[bool, bool] = (True, True),
) -> QuadResult:
    """Integrate a vectorised callable over ``(lo, hi)``; either end may be infinite.

    ``singular_ends`` says whether the integrand may blow up at ``lo`` and
    ``hi``; only such ends (and infinite ones) can be declared divergent.
    """
    lo, hi = float(lo), float(hi)
    if lo >= hi:
        return QuadResult(0.0, 0.0)
    cuts = sorted({float(p) for p in breakpoints if lo < p < hi})
    edges = [lo] + cuts + [hi]
    pieces = []
    diag = {"segments": len(edges) - 1, "shells": 0, "divergence": None, "heuristic": False}
    converged = True
    for l, h in zip(edges[:-1], edges[1:]):
        c = _pick_inner(l, h)
        for end in (l, h):
            sing = math.isinf(end) or (end == lo and singular_ends[0]) or (end == hi and singular_ends[1]) or end in cuts
            r = _toward_endpoint(func, c, end, settings, sing)
            converged &= r.converged
            diag["shells"] += r.diagnostics["shells"]
            if r.diagnostics["divergence"]:
                diag["divergence"] = r.diagnostics["divergence"]
                diag["heuristic"] = True
            pieces.append((r.value if end == h else r.value, r.error))
    vals = [v for v, _ in pieces]
    if any(math.isinf(v) for v in vals):
        pos = any(v == INF for v in vals)
        neg = any(v == -INF for v in vals)
        value = math.nan if pos and neg else (INF if pos else -INF)
        return QuadResult(value, INF, True, diag)
    return QuadResult(math.fsum(vals), math.fsum(e for _, e in pieces), converged, diag)


def _check_inside(w: Weight, lo: float, hi: float):
    a, b = w.interval
    if lo < a or hi > b:
        raise PointOutsideDomain(f"({lo}, {hi}) is not inside the weight interval ({a}, {b})")


def integrate_weight(
    w: Weight,
    lo: float,
    hi: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    force_quadrature: bool = False,
) -> QuadResult:
    lo, hi = float(lo), float(hi)
    _check_inside(w, lo, hi)
    if not force_quadrature:
        v = w.integral(lo, hi)
        if v is not None:
            return QuadResult(v, 0.0, True, {"closed_form": True})
    sing = set(w.singularities)
    a, b = w.interval
    ends = (lo == a or lo in sing, hi == b or hi in sing)
    r = integrate_function(w, lo, hi, settings, w.breakpoints + w.singularities, ends)
    r.diagnostics["closed_form"] = False
    return r


def integrate(
    w: Weight,
    lo: float,
    hi: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    force_quadrature: bool = False,
) -> float:
    """Integral of ``w`` over ``(lo, hi)``; ``inf`` when it diverges."""
    r = integrate_weight(w, lo, hi, settings, force_quadrature)
    if not r.converged:
        raise ToleranceNotReached(
            f"integral over ({lo}, {hi}) did not reach rel_tol={settings.rel_tol}",
            r.value,
            r.error,
        )
    return r.value


# ---------------------------------------------------------------------------
# cumulative integrals

UPPER_TAIL = "upper_tail"
LOWER_TAIL = "lower_tail"

_TINY = 1e-300
_KNOT_SPAN = 32.0
_KNOT_STEP = 0.25
_CHUNK = 32


def _closed_form_vectorised(w: Weight, kind: str):
    a, b = w.interval

    if kind == UPPER_TAIL:
        def scalar(x):
            return w.integral(x, b)
    else:
        def scalar(x):
            return w.integral(a, x)

    mid = float(IntervalMap(w.interval).to_x(0.0))
    if w.integral_array(np.array([a]), np.array([mid])) is not None:
        if kind == UPPER_TAIL:
            return lambda x: w.integral_array(np.asarray(x, dtype=float), b)
        return lambda x: w.integral_array(a, np.asarray(x, dtype=float))

    vec = np.frompyfunc(scalar, 1, 1)

    def evaluate(x):
        return np.asarray(vec(np.asarray(x, dtype=float)), dtype=float)

    return evaluate


class CumulativeIntegral:
    """Monotone function ``x -> int_x^b w`` or ``x -> int_a^x w``.

    ``integrand`` is either a :class:`Weight` or a vectorised callable.
    With ``signed=True`` the integrand may change sign and the monotonicity
    and nonnegativity checks are skipped.
    """

    def __init__(
        self,
        kind: str,
        integrand,
        interval: Interval,
        settings: QuadratureSettings = DEFAULT_SETTINGS,
        closed_form: Callable | None = None,
        breakpoints=(),
        signed: bool = False,
        name: str | None = None,
    ):
        if kind not in (UPPER_TAIL, LOWER_TAIL):
            raise ConfigInvalid(f"unknown cumulative kind {kind!r}")
        self.kind = kind
        self.integrand = integrand
        self.interval = interval
        self.settings = settings
        # tail values can be tiny; panels and anchors are held to relative accuracy
        self._inner = replace(settings, abs_tol=_TINY)
        self.closed_form = closed_form
        self.signed = signed
        self.name = name or kind
        pts = [float(p) for p in breakpoints if interval.a < p < interval.b]
        self.breakpoints = tuple(sorted(set(pts)))
        self.cache: SortedDict = SortedDict()
        self._lock = threading.RLock()
        self._table = None
        self.diagnostics: dict = {"closed_form": closed_form is not None, "heuristic_divergence": False}
        self._check_not_divergent()

    @property
    def increasing(self) -> bool:
        return self.kind == LOWER_TAIL

    # -- construction ------------------------------------------------------
    def _check_not_divergent(self):
        if self.closed_form is not None:
            probe = float(IntervalMap(self.interval).to_x(0.0))
            v = float(self.closed_form(np.array([probe]))[0])
            if math.isinf(v):
                raise DivergentTail(f"{self.name}: the {self.kind.replace('_', ' ')} is infinite everywhere")
            return
        self._build_table()

    def _map(self):
        m = IntervalMap(self.interval, self.settings.endpoint_map)
        step = _KNOT_STEP if m.kind != "de" else 0.05
        span = _KNOT_SPAN if m.kind != "de" else 3.5
        return m, step, int(round(span / step))

    def _chunk_knots(self, i_from: int, i_to: int) -> np.ndarray:
        """Knots with u-indices in ``[i_from, i_to]`` plus breakpoints between them."""
        m, step, _ = self._map()
        u = np.arange(i_from, i_to + 1) * step
        u = u[u < m.u_max]
        x = m.to_x(u)
        x = x[m.strictly_inside(x)]
        if x.size:
            lo, hi = x.min(), x.max()
            bp = [p for p in self.breakpoints if lo < p < hi]
            x = np.concatenate([x, np.asarray(bp, dtype=float)])
        return np.unique(x)

    def _panels(self, lo: np.ndarray, hi: np.ndarray):
        s = self._inner
        vals, _, conv = gk_batch(self.integrand, lo, hi, s.rel_tol, s.abs_tol, s.max_subdivisions)
        if not np.all(conv):
            self.diagnostics["table_converged"] = False
        return vals

    def _anchor(self, knot: float) -> float:
        s = self._inner
        a, b = self.interval
        if self.kind == LOWER_TAIL:
            r = integrate_function(self.integrand, a, knot, s, (), (True, False))
        else:
            r = integrate_function(self.integrand, knot, b, s, (), (False, True))
        if r.diagnostics.get("heuristic"):
            self.diagnostics["heuristic_divergence"] = True
        if not r.converged:
            self.diagnostics["table_converged"] = False
        return r.value

    def _build_table(self):
        with self._lock:
            if self._table is not None:
                return self._table
            _, _, n = self._map()
            self.diagnostics["table_converged"] = True
            knots = np.unique(np.concatenate([self._chunk_knots(-n, n), np.asarray(self.breakpoints)]))
            vals = self._panels(knots[:-1], knots[1:])
            if self.kind == LOWER_TAIL:
                anchor = self._anchor(knots[0])
                if math.isinf(anchor) and anchor > 0:
                    raise DivergentTail(f"{self.name}: integral from the lower end diverges")
                prefix = anchor + np.concatenate([[0.0], np.cumsum(vals)])
            else:
                anchor = self._anchor(knots[-1])
                if math.isinf(anchor) and anchor > 0:
                    raise DivergentTail(f"{self.name}: integral to the upper end diverges")
                prefix = anchor + np.concatenate([np.cumsum(vals[::-1])[::-1], [0.0]])
            self.diagnostics["knots"] = int(knots.size)
            # u-index range covered by the grid part of the table; None once a side is exhausted
            self._span = [-n, n]
            self._table = (knots, prefix)
            return self._table

    def _extend(self, side: str) -> bool:
        """Add one chunk of knots below (``side="low"``) or above the table.

        Chunks depend only on their position, so values do not depend on the
        order in which points were requested.
        """
        knots, prefix = self._table
        lo_i, hi_i = self._span
        if (side == "low" and lo_i is None) or (side == "high" and hi_i is None):
            return False
        if side == "low":
            new = self._chunk_knots(lo_i - _CHUNK, lo_i - 1)
            new = new[new < knots[0]]
        else:
            new = self._chunk_knots(hi_i + 1, hi_i + _CHUNK)
            new = new[new > knots[-1]]
        if new.size == 0:
            self._span[0 if side == "low" else 1] = None
            return False
        toward_anchor = (side == "low") == (self.kind == LOWER_TAIL)
        if side == "low":
            vals = self._panels(new, np.append(new[1:], knots[0]))
            if toward_anchor:
                p = self._anchor(new[0]) + np.concatenate([[0.0], np.cumsum(vals[:-1])])
            else:
                p = prefix[0] + np.cumsum(vals[::-1])[::-1]
            knots, prefix = np.concatenate([new, knots]), np.concatenate([p, prefix])
            self._span[0] = lo_i - _CHUNK
        else:
            vals = self._panels(np.concatenate([[knots[-1]], new[:-1]]), new)
            if toward_anchor:
                p = self._anchor(new[-1]) + np.concatenate([np.cumsum(vals[:0:-1])[::-1], [0.0]])
            else:
                p = prefix[-1] + np.cumsum(vals)
            knots, prefix = np.concatenate([knots, new]), np.concatenate([prefix, p])
            self._span[1] = hi_i + _CHUNK
        self._table = (knots, prefix)
        self.diagnostics["knots"] = int(knots.size)
        return True

    def _cover(self, x: np.ndarray):
        with self._lock:
            self._build_table()
            while x.size and x.min() < self._table[0][0] and self._extend("low"):
                pass
            while x.size and x.max() > self._table[0][-1] and self._extend("high"):
                pass
            return self._table

    # -- evaluation --------------------------------------------------------
    def _compute(self, x: np.ndarray) -> np.ndarray:
        if self.closed_form is not None:
            return np.asarray(self.closed_form(x), dtype=float)
        knots, prefix = self._cover(x)
        s = self._inner
        out = np.empty_like(x)
        a, b = self.interval
        if self.kind == LOWER_TAIL:
            j = np.searchsorted(knots, x, side="right") - 1
            inside = (j >= 0) & (j < knots.size - 1)
            jj = np.clip(j, 0, knots.size - 1)
            v, _, _ = gk_batch(self.integrand, knots[jj[inside]], x[inside], s.rel_tol, s.abs_tol, s.max_subdivisions)
            out[inside] = prefix[jj[inside]] + v
            last = j == knots.size - 1
            out[last] = prefix[-1]
            # closer to an end than any representable knot
            for i in np.nonzero(~inside & ~last)[0]:
                out[i] = integrate_function(self.integrand, a, x[i], s, self.breakpoints, (True, False)).value
            for i in np.nonzero(last & (x > knots[-1]))[0]:
                out[i] = prefix[-1] + integrate_function(self.integrand, knots[-1], x[i], s, (), (False, False)).value
        else:
            j = np.searchsorted(knots, x, side="left")
            inside = (j > 0) & (j < knots.size)
            jj = np.clip(j, 0, knots.size - 1)
            v, _, _ = gk_batch(self.integrand, x[inside], knots[jj[inside]], s.rel_tol, s.abs_tol, s.max_subdivisions)
            out[inside] = prefix[jj[inside]] + v
            first = j == 0
            for i in np.nonzero(first)[0]:
                if x[i] == knots[0]:
                    out[i] = prefix[0]
                else:
                    out[i] = prefix[0] + integrate_function(self.integrand, x[i], knots[0], s, (), (False, False)).value
            for i in np.nonzero(j >= knots.size)[0]:
                out[i] = integrate_function(self.integrand, x[i], b, s, self.breakpoints, (False, True)).value
        return out

    def __call__(self, x):
        """Vectorised evaluation at interior points (no domain checks)."""
        arr = np.asarray(x, dtype=float)
        flat = arr.ravel()
        if self.closed_form is not None:
            return self._compute(flat).reshape(arr.shape)
        out = np.empty_like(flat)
        with self._lock:
            cached = np.array([self.cache.get(v, math.nan) for v in flat.tolist()]) if flat.size else flat
        missing = np.isnan(cached)
        out[~missing] = cached[~missing]
        if np.any(missing):
            xs, inv = np.unique(flat[missing], return_inverse=True)
            vals = self._compute(xs)
            self._insert(xs, vals)
            out[missing] = vals[inv]
        return out.reshape(arr.shape)

    def monotone(self) -> bool:
        """Audit every cached value against its neighbours (within the insertion tolerance)."""
        if self.signed:
            return True
        with self._lock:
            vals = np.array([v for v in self.cache.values() if math.isfinite(v)])
        if vals.size < 2:
            return bool(np.all(vals >= -self.settings.abs_tol))
        steps = np.diff(vals) if self.increasing else -np.diff(vals)
        slack = self.settings.abs_tol + 10 * self.settings.rel_tol * np.abs(vals[1:] if self.increasing else vals[:-1])
        return bool(np.all(steps >= -slack) and np.all(vals >= -self.settings.abs_tol))

    def _insert(self, xs: np.ndarray, vals: np.ndarray):
        s = self.settings
        with self._lock:
            for x, v in zip(xs.tolist(), vals.tolist()):
                if not self.signed:
                    if v < 0 and v > -s.abs_tol:
                        v = 0.0
                    self._check_monotone(x, v)
                self.cache[x] = v

    def _check_monotone(self, x: float, v: float):
        if math.isnan(v):
            return
        tol = lambda ref: self.settings.abs_tol + 10 * self.settings.rel_tol * abs(ref)  # noqa: E731
        if v < -self.settings.abs_tol:
            raise MonotonicityViolation(f"{self.name}: negative value {v} at x={x}")
        i = self.cache.bisect_left(x)
        left = self.cache.peekitem(i - 1) if i > 0 else None
        right = self.cache.peekitem(i) if i < len(self.cache) else None
        if right is not None and right[0] == x:
            right = self.cache.peekitem(i + 1) if i + 1 < len(self.cache) else None
        for nb, after in ((left, False), (right, True)):
            if nb is None or math.isnan(nb[1]) or math.isinf(nb[1]) or math.isinf(v):
                continue
            lo_v, hi_v = (v, nb[1]) if after else (nb[1], v)
            if self.increasing:
                bad = lo_v > hi_v + tol(hi_v)
            else:
                bad = hi_v > lo_v + tol(lo_v)
            if bad:
                raise MonotonicityViolation(
                    f"{self.name}: values {nb[1]!r} and {v!r} at {nb[0]!r}, {x!r} break monotonicity; "
                    "tighten the quadrature tolerance"
                )


def _tail(w: Weight, kind: str, settings: QuadratureSettings, force_quadrature: bool) -> CumulativeIntegral:
    a, b = w.interval
    closed = None
    if not force_quadrature:
        probe = float(IntervalMap(w.interval).to_x(0.0))
        test = w.integral(probe, b) if kind == UPPER_TAIL else w.integral(a, probe)
        if test is not None:
            closed = _closed_form_vectorised(w, kind)
    return CumulativeIntegral(
        kind,
        w,
        w.interval,
        settings,
        closed_form=closed,
        breakpoints=w.breakpoints + w.singularities,
        name=f"{kind}({type(w).__name__})",
    )


def upper_tail(w: Weight, settings: QuadratureSettings = DEFAULT_SETTINGS, force_quadrature: bool = False):
    """``x -> int_x^b w(t) dt``."""
    return _tail(w, UPPER_TAIL, settings, force_quadrature)


def lower_tail(w: Weight, settings: QuadratureSettings = DEFAULT_SETTINGS, force_quadrature: bool = False):
    """``x -> int_a^x w(t) dt``."""
    return _tail(w, LOWER_TAIL, settings, force_quadrature)


def cumulative_eval(c: CumulativeIntegral, x: float) -> float:
    x = float(x)
    if x not in c.interval:
        raise PointOutsideDomain(f"x={x} is not inside {tuple(c.interval)}")
    return float(c(np.array([x]))[0])
