"""Smooth bijections from the real line onto an interval.

Grids that are uniform in the transformed coordinate ``u`` become geometric
near finite endpoints and near infinity, which is where weighted conditions
tend to have their interesting behaviour.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigInvalid
from .weights import Interval

ENDPOINT_MAPS = ("none", "log_upper", "log_lower", "double_exponential")


class IntervalMap:
    """Map ``u -> x`` onto ``interval``; ``span`` is a sensible half-width in ``u``."""

    def __init__(self, interval: Interval, mode: str = "none"):
        if mode not in ENDPOINT_MAPS:
            raise ConfigInvalid(f"unknown endpoint map {mode!r}")
        self.interval = interval
        a, b = interval
        self.a, self.b = a, b
        if mode == "double_exponential":
            self.kind = "de"
            self.span = 3.5
        elif mode == "log_lower" and math.isfinite(a):
            self.kind = "exp_right"
        elif mode == "log_upper" and math.isfinite(b):
            self.kind = "exp_left"
        elif math.isfinite(a) and math.isfinite(b):
            self.kind = "logit"
        elif math.isfinite(a):
            self.kind = "exp_right"
        elif math.isfinite(b):
            self.kind = "exp_left"
        else:
            self.kind = "sinh"
        if self.kind != "de":
            self.span = 16.0
        if self.kind in ("exp_right", "exp_left") and math.isfinite(a) and math.isfinite(b):
            # one-sided log map on a finite interval: u ranges over (-inf, log(b - a))
            self.u_max = math.log(b - a)
        else:
            self.u_max = math.inf

    def to_x(self, u):
        u = np.asarray(u, dtype=float)
        a, b = self.a, self.b
        with np.errstate(over="ignore"):
            if self.kind == "logit":
                return a + (b - a) / (1.0 + np.exp(-u))
            if self.kind == "exp_right":
                return a + np.exp(u)
            if self.kind == "exp_left":
                return b - np.exp(-u)
            if self.kind == "sinh":
                return np.sinh(u)
            s = 0.5 * math.pi * np.sinh(u)
            if math.isfinite(a) and math.isfinite(b):
                return a + (b - a) * 0.5 * (1.0 + np.tanh(s))
            if math.isfinite(a):
                return a + np.exp(s)
            if math.isfinite(b):
                return b - np.exp(-s)
            return np.sinh(s)

    def to_u(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.a, self.b
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.kind == "logit":
                t = (x - a) / (b - a)
                return np.log(t) - np.log1p(-t)
            if self.kind == "exp_right":
                return np.log(x - a)
            if self.kind == "exp_left":
                return -np.log(b - x)
            if self.kind == "sinh":
                return np.arcsinh(x)
            if math.isfinite(a) and math.isfinite(b):
                s = np.arctanh(2.0 * (x - a) / (b - a) - 1.0)
            elif math.isfinite(a):
                s = np.log(x - a)
            elif math.isfinite(b):
                s = -np.log(b - x)
            else:
                s = np.arcsinh(x)
            return np.arcsinh(s / (0.5 * math.pi))

    def grid(self, n: int, half_width: float | None = None) -> np.ndarray:
        """``n`` points uniform in ``u`` and strictly inside the interval."""
        w = self.span if half_width is None else half_width
        hi = min(w, self.u_max - 1e-3) if math.isfinite(self.u_max) else w
        lo = -w
        if hi <= lo:
            lo = hi - 2 * w
        return np.linspace(lo, hi, n)

    def strictly_inside(self, x: np.ndarray) -> np.ndarray:
        return (x > self.a) & (x < self.b) & np.isfinite(x)
