"""Grid-refinement estimation of suprema of one-dimensional functions.

The function is sampled on a grid uniform in the transformed coordinate of
:class:`~hardykit.maps.IntervalMap`, the running argmax is bracketed and
bisected, and when the argmax sits at an end of the grid the grid is pushed
outward.  Growth toward an endpoint is judged from a straight-line fit of
``log(value)`` against ``u`` over the outermost samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .maps import IntervalMap
from .weights import Interval

INF = math.inf


@dataclass(frozen=True)
class SupSettings:
    initial_points: int = 129
    half_width: float = 16.0
    min_passes: int = 5
    max_passes: int = 60
    rel_tol: float = 1e-6
    end_extension: int = 8
    end_step: float = 2.0
    slope_tol: float = 1e-6
    abs_tol: float = 1e-14
    endpoint_map: str = "none"
    # accuracy of the sampled values; a sup cannot be certified more tightly
    value_rel_tol: float = 1e-10


@dataclass
class SupEstimate:
    value: float
    witness: float
    grid_size: int
    refined_passes: int
    converged: bool
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "witness": self.witness,
            "grid_size": self.grid_size,
            "refined_passes": self.refined_passes,
            "converged": self.converged,
            "diagnostics": dict(self.diagnostics),
        }


def _evaluate(func, m: IntervalMap, u: np.ndarray):
    x = m.to_x(u)
    ok = m.strictly_inside(x)
    u, x = u[ok], x[ok]
    if u.size == 0:
        return u, x, u
    vals = np.asarray(func(x), dtype=float).reshape(-1)
    vals = np.where(vals < 0, np.nan, vals)
    return u, x, vals


def _argmax(vals: np.ndarray) -> int:
    finite = np.where(np.isnan(vals), -INF, vals)
    return int(np.argmax(finite))  # first occurrence, i.e. smallest x


def _end_slope(u: np.ndarray, vals: np.ndarray, side: str, n: int) -> tuple[float, float]:
    """Slope of log(value) toward the endpoint, and the ratio of the outer half slope to the inner half."""
    if side == "left":
        uu, vv = u[:n][::-1], vals[:n][::-1]
        uu = -uu
    else:
        uu, vv = u[-n:], vals[-n:]
    ok = np.isfinite(vv) & (vv > 0)
    uu, lv = uu[ok], np.log(vv[ok])
    if uu.size < 4:
        return 0.0, 0.0
    slope = float(np.polyfit(uu, lv, 1)[0])
    h = uu.size // 2
    inner = np.polyfit(uu[:h + 1], lv[:h + 1], 1)[0]
    outer = np.polyfit(uu[h - 1:], lv[h - 1:], 1)[0]
    ratio = float(outer / inner) if inner > 0 else 0.0
    return slope, ratio


def sup_function(
    func: Callable[[np.ndarray], np.ndarray],
    sub: Interval,
    settings: SupSettings = SupSettings(),
) -> SupEstimate:
    """Estimate ``sup_{x in sub} func(x)`` for a vectorised nonnegative ``func``.

    NaN samples (undefined products such as ``0 * inf``) are skipped; any
    sampled ``+inf`` makes the supremum ``+inf``.
    """
    s = settings
    m = IntervalMap(sub, s.endpoint_map)
    half = s.half_width if m.kind != "de" else m.span
    u, x, vals = _evaluate(func, m, m.grid(s.initial_points, half))
    diag = {"endpoint": None, "nan_samples": 0, "tiny_value": False, "divergence": None}
    passes = 0
    history: list[float] = []
    end_streak = {"left": 0, "right": 0}
    settled = {"left": False, "right": False}
    converged = False

    def result(value, witness, conv):
        diag["nan_samples"] = int(np.isnan(vals).sum())
        if math.isfinite(value) and value < s.abs_tol:
            if value > 0:
                diag["tiny_value"] = True
            value = 0.0
        certified = conv and s.value_rel_tol <= s.rel_tol
        if conv and not certified:
            diag["reason"] = "sampled values are less accurate than the sup tolerance"
        return SupEstimate(float(value), float(witness), int(u.size), passes, bool(certified), diag)

    if u.size == 0:
        diag["reason"] = "no interior sample points"
        return result(math.nan, math.nan, False)

    while True:
        if np.any(vals == INF):
            i = int(np.argmax(vals == INF))
            diag["divergence"] = "sampled"
            return result(INF, x[i], True)
        if np.all(np.isnan(vals)):
            diag["reason"] = "all samples undefined"
            return result(math.nan, math.nan, False)
        i = _argmax(vals)
        best = float(vals[i])
        history.append(best)
        if passes >= s.max_passes:
            break
        passes += 1

        side = "left" if i == 0 else ("right" if i == u.size - 1 else None)
        for k in end_streak:
            end_streak[k] = end_streak[k] + 1 if k == side else 0

        new_u = []
        if side is not None and not settled[side]:
            if end_streak[side] >= 2:
                slope, ratio = _end_slope(u, vals, side, s.end_extension)
                if slope > s.slope_tol and ratio > 0.5:
                    diag["divergence"] = "endpoint_fit"
                    diag["endpoint"] = side
                    diag["endpoint_slope"] = slope
                    return result(INF, x[i], True)
            step = s.end_step
            if side == "left":
                cand = u[0] - step * np.arange(1, s.end_extension + 1)
            else:
                cand = u[-1] + step * np.arange(1, s.end_extension + 1)
            cx = m.to_x(cand)
            cand = cand[m.strictly_inside(cx)]
            if m.kind == "logit":
                # stop once the map can no longer separate points from the endpoint
                cx = m.to_x(cand)
                keep = np.concatenate([[True], np.diff(cx) != 0]) if cand.size else cand.astype(bool)
                cand = cand[keep]
            if cand.size == 0:
                settled[side] = True
                diag["endpoint"] = side
            new_u.extend(cand.tolist())
        # bisect around the argmax
        if i > 0:
            h = u[i] - u[i - 1]
            new_u.extend([u[i] - 0.5 * h, u[i] - 0.25 * h])
        if i < u.size - 1:
            h = u[i + 1] - u[i]
            new_u.extend([u[i] + 0.25 * h, u[i] + 0.5 * h])
        nu, nx, nv = _evaluate(func, m, np.array(new_u, dtype=float))
        fresh = ~np.isin(nu, u)
        nu, nx, nv = nu[fresh], nx[fresh], nv[fresh]
        if nu.size == 0 and (side is None or settled[side]):
            converged = True
            break
        u = np.concatenate([u, nu])
        x = np.concatenate([x, nx])
        vals = np.concatenate([vals, nv])
        order = np.argsort(u, kind="stable")
        u, x, vals = u[order], x[order], vals[order]

        at_open_end = side is not None and not settled[side]
        if at_open_end:
            slope, _ = _end_slope(u, vals, side, s.end_extension)
            at_open_end = end_streak[side] < 2 or slope > s.slope_tol
        if passes >= s.min_passes and len(history) >= 3 and not at_open_end:
            h0, h1, h2 = history[-3], history[-2], history[-1]
            scale = max(abs(h2), s.abs_tol)
            new_best = float(np.max(np.where(np.isnan(vals), -INF, vals)))
            if max(abs(h2 - h1), abs(h1 - h0), abs(new_best - h2)) <= s.rel_tol * scale:
                converged = True
                break
    i = _argmax(vals)
    if not converged:
        diag["reason"] = diag.get("reason", "refinement did not settle")
    return result(float(vals[i]), x[i], converged)


def point_limit(func, x0: float) -> float:
    """Value of ``func`` at a single interior point."""
    return float(np.asarray(func(np.array([float(x0)])), dtype=float)[0])
