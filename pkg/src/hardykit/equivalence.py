"""Equivalence-suite runs: evaluate a scale of conditions for one configuration,
compare everything against the reference condition and check the exact identities.
"""

from __future__ import annotations

import copy
import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bilinear import (
    AT_IDS,
    BT_IDS,
    BilinearContext,
    BilinearParams,
    bt_id,
    eval_bilinear_pointwise,
    evaluate_bilinear,
    hardy_bilinear_params,
    side_condition_holds as bilinear_side_ok,
    check_bilinear,
    canonical_bilinear_candidates,
)
from .config import RunConfig, canonical_json, parse_run_config
from .errors import ConfigInvalid, HardyKitError, NumericalError
from .estimator import EstimatorConfig, TestFunctionFamily, maximize_quotient
from .formula import AuxFunctionSpec, ConditionValue
from .geomean import condition_scriptB, condition_scriptB_bilinear
from .linear import (
    INF_TYPE_LINEAR,
    LINEAR_IDS,
    LinearContext,
    LinearParams,
    TRUNCATED_ITEMS,
    canonical_linear_candidates,
    check_linear,
    eval_linear_pointwise,
    evaluate_linear,
    side_condition_holds as linear_side_ok,
    truncated_pair,
)
from .maps import IntervalMap
from .quadrature import QuadratureSettings
from .weights import conjugate

INF = math.inf
IDENTITY_TOL = 1e-8
IDENTITY_POINTS = 50
STATUSES = ("PASS", "FAIL", "INCONCLUSIVE")


def worker_count(n_tasks: int) -> int:
    """Thread count, capped by the HARDYKIT_THREADS environment variable."""
    cap = os.environ.get("HARDYKIT_THREADS")
    try:
        limit = int(cap) if cap else (os.cpu_count() or 1)
    except ValueError:
        raise ConfigInvalid(f"HARDYKIT_THREADS must be an integer, got {cap!r}") from None
    return max(1, min(limit, n_tasks))


def jsonable(obj):
    """Plain-JSON form with infinities written as "+inf" / "-inf"."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "+inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, (np.floating, np.integer)):
        return jsonable(obj.item())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


@dataclass
class EquivalenceReport:
    name: str
    suite: str
    status: str
    reference: dict
    conditions: dict
    ratios: dict
    identities: dict
    invariants: dict
    errors: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    constant_bracket: dict | None = None
    seed: int = 0
    config_sha256: str = ""
    version: str = __version__

    def to_dict(self) -> dict:
        return jsonable({
            "version": self.version,
            "config_sha256": self.config_sha256,
            "seed": self.seed,
            "name": self.name,
            "suite": self.suite,
            "status": self.status,
            "reference": self.reference,
            "conditions": self.conditions,
            "ratios": self.ratios,
            "identities": self.identities,
            "invariants": self.invariants,
            "errors": self.errors,
            "skipped": self.skipped,
            "constant_bracket": self.constant_bracket,
        })

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    @property
    def finiteness(self) -> dict:
        return {k: math.isfinite(v["value"]) for k, v in self.conditions.items()}


# -- building blocks -----------------------------------------------------------


def _linear_params(cfg: RunConfig, pset: dict) -> LinearParams:
    p, q = cfg.exponents["p"], cfg.exponents["q"]
    return LinearParams(pset.get("alpha", 1.0 / q), pset.get("beta", 1.0 / conjugate(p).p_conj), pset.get("s"))


def _bilinear_params(cfg: RunConfig, pset: dict) -> BilinearParams:
    e = cfg.exponents
    base = hardy_bilinear_params(e["p1"], e["p2"], e["q"])
    return BilinearParams(
        pset.get("alpha", base.alpha), pset.get("beta", base.beta), pset.get("gamma", base.gamma),
        pset.get("s"), pset.get("s1"), pset.get("s2"),
    )


def build_context(cfg: RunConfig):
    w, e, s = cfg.weights, cfg.exponents, cfg.settings
    if cfg.suite == "linear":
        return LinearContext.hardy(w["u"], w["v"], e["p"], s)
    if cfg.suite == "bilinear":
        return BilinearContext.hardy(w["u"], w["v1"], w["v2"], e["p1"], e["p2"], s)
    return None


def _default_conditions(cfg: RunConfig) -> tuple[str, ...]:
    if cfg.suite == "linear":
        return tuple(f"B{i}" for i in range(2, 16))
    if cfg.suite == "bilinear":
        return AT_IDS
    return ()


def _reference_id(cfg: RunConfig) -> str:
    if cfg.suite == "linear":
        return "B1"
    if cfg.suite == "bilinear":
        return "D"
    return "scriptB2" if cfg.bilinear else "scriptB"


def _plan(cfg: RunConfig):
    """``(key, cid, param index, params)`` for every evaluation, plus skipped entries."""
    explicit = cfg.conditions is not None
    conds = cfg.conditions if explicit else _default_conditions(cfg)
    ref = _reference_id(cfg)
    tasks, skipped = [], []
    for k, pset in enumerate(cfg.parameters):
        if cfg.suite == "geomean":
            tasks.append((f"{ref}[{k}]", ref, k, None))
            continue
        if cfg.suite == "linear":
            params = _linear_params(cfg, pset)
            valid = LINEAR_IDS
            ok, check = linear_side_ok, check_linear
        else:
            params = _bilinear_params(cfg, pset)
            valid = BT_IDS + AT_IDS + ("D",)
            ok, check = bilinear_side_ok, check_bilinear
        tasks.append((f"{ref}[{k}]", ref, k, params))
        for cid in conds:
            if cid not in valid:
                raise ConfigInvalid(f"unknown {cfg.suite} condition {cid!r}")
            if cid == ref:
                continue
            if explicit:
                check(cid, params)
            elif not ok(cid, params):
                skipped.append({"key": f"{cid}[{k}]", "reason": "side condition or parameter missing"})
                continue
            tasks.append((f"{cid}[{k}]", cid, k, params))
    return tasks, skipped


def _evaluate(cfg: RunConfig, ctx, cid: str, params) -> ConditionValue:
    w, e, s = cfg.weights, cfg.exponents, cfg.settings
    if cfg.suite == "linear":
        return evaluate_linear(cid, params, ctx)
    if cfg.suite == "bilinear":
        cv = evaluate_bilinear(cid, params, ctx)
        if cid == "D":
            cv.id = "D"
        return cv
    if cfg.bilinear:
        return condition_scriptB_bilinear(w["u"], w["v1"], w["v2"], e["p1"], e["p2"], e["q"], s)
    return condition_scriptB(w["u"], w["v"], e["p"], e["q"], s)


def identity_residuals(ctx: BilinearContext, params: BilinearParams, n: int = IDENTITY_POINTS) -> dict:
    """Relative residuals of the two exact identities at ``n`` interior points.

    I1: Bt18(x; G, H) = 2^(s1+s2) Bt2(x);  I2: Bt21(x; G, H) = 2^(beta+gamma+s1+s2) Bt3(x).
    """
    if params.s1 is None or params.s2 is None:
        raise ConfigInvalid("the identity checks need s1 and s2")
    xs = IntervalMap(ctx.interval).to_x(np.linspace(-4.0, 4.0, n))
    G, H = AuxFunctionSpec("G"), AuxFunctionSpec("H")
    out = {}
    checks = (
        ("I1", "Bt18", "Bt2", params.s1 + params.s2),
        ("I2", "Bt21", "Bt3", params.beta + params.gamma + params.s1 + params.s2),
    )
    for name, lhs_id, rhs_id, power in checks:
        if not bilinear_side_ok(lhs_id, params):
            out[name] = {"skipped": "side condition of " + lhs_id}
            continue
        lhs = np.asarray(eval_bilinear_pointwise(lhs_id, xs, params, ctx, G, H), dtype=float)
        rhs = 2.0 ** power * np.asarray(eval_bilinear_pointwise(rhs_id, xs, params, ctx), dtype=float)
        out[name] = _residual(lhs, rhs)
    return out


def reduction_residual(ctx: LinearContext, params: LinearParams, n: int = IDENTITY_POINTS) -> dict:
    """B2 with ``s = beta`` coincides with B1 pointwise."""
    xs = IntervalMap(ctx.interval).to_x(np.linspace(-4.0, 4.0, n))
    p2 = LinearParams(params.alpha, params.beta, params.beta)
    lhs = np.asarray(eval_linear_pointwise("B2", xs, p2, ctx), dtype=float)
    rhs = np.asarray(eval_linear_pointwise("B1", xs, p2, ctx), dtype=float)
    return _residual(lhs, rhs)


def _residual(lhs: np.ndarray, rhs: np.ndarray) -> dict:
    both_inf = np.isinf(lhs) & np.isinf(rhs)
    fin = np.isfinite(lhs) & np.isfinite(rhs) & (rhs != 0)
    mismatch = int(np.sum(~(both_inf | fin | ((lhs == 0) & (rhs == 0)))))
    res = float(np.max(np.abs(lhs[fin] / rhs[fin] - 1.0))) if np.any(fin) else 0.0
    if mismatch:
        res = INF
    return {"residual": res, "points": int(lhs.size), "threshold": IDENTITY_TOL, "pass": res <= IDENTITY_TOL}


# -- suite -------------------------------------------------------------------


def run_suite(cfg: RunConfig) -> EquivalenceReport:
    """Evaluate every selected condition, ratios against the reference, identities and verdict."""
    tasks, skipped = _plan(cfg)
    ctx = build_context(cfg)
    errors = []

    def job(task):
        key, cid, _, params = task
        if key.split("[")[0] in cfg.inject or key in cfg.inject:
            v = cfg.inject.get(key, cfg.inject.get(cid))
            return key, ConditionValue(cid, v, math.nan, True, {"injected": True}, {})
        try:
            return key, _evaluate(cfg, ctx, cid, params)
        except NumericalError as exc:
            return key, exc

    with ThreadPoolExecutor(max_workers=worker_count(len(tasks))) as pool:
        results = list(pool.map(job, tasks))

    values: dict[str, ConditionValue] = {}
    for key, res in results:
        if isinstance(res, Exception):
            errors.append({"key": key, "error": type(res).__name__, "message": str(res)})
        else:
            values[key] = res

    ref = _reference_id(cfg)
    ratios = {}
    for key, cid, k, _ in tasks:
        rk = f"{ref}[{k}]"
        if key == rk or key not in values or rk not in values:
            continue
        a, b = values[key].value, values[rk].value
        if math.isfinite(a) and math.isfinite(b) and b > 0:
            ratios[key] = a / b
        elif math.isinf(a) != math.isinf(b):
            ratios[key] = INF if math.isinf(a) else 0.0
        # both infinite, or a zero reference: no meaningful ratio

    identities = {}
    if cfg.identities and ctx is not None:
        for k, pset in enumerate(cfg.parameters):
            try:
                if cfg.suite == "bilinear":
                    params = _bilinear_params(cfg, pset)
                    if params.s1 is not None and params.s2 is not None:
                        for name, r in identity_residuals(ctx, params).items():
                            identities[f"{name}[{k}]"] = r
                else:
                    identities[f"reduction[{k}]"] = reduction_residual(ctx, _linear_params(cfg, pset))
            except NumericalError as exc:
                errors.append({"key": f"identities[{k}]", "error": type(exc).__name__, "message": str(exc)})

    bracket = None
    if cfg.estimate is not None:
        bracket = _bracket(cfg, values.get(f"{ref}[0]"))

    status, invariants = _verdict(values, ratios, identities, errors)
    monotone = ctx.cumulatives_monotone() if ctx is not None else True
    invariants["cumulatives_monotone"] = {"pass": monotone}
    if not monotone and status == "PASS":
        status = "INCONCLUSIVE"
    return EquivalenceReport(
        name=cfg.name,
        suite=cfg.suite,
        status=status,
        reference={"id": ref, "values": {k: values[k].value for k in values if k.startswith(ref + "[")}},
        conditions={k: values[k].to_dict() for k in sorted(values, key=_key_order)},
        ratios={k: ratios[k] for k in sorted(ratios, key=_key_order)},
        identities=identities,
        invariants=invariants,
        errors=errors,
        skipped=skipped,
        constant_bracket=bracket,
        seed=cfg.seed,
        config_sha256=cfg.sha256,
    )


def _key_order(key: str):
    cid, rest = key.split("[")
    head = "".join(c for c in cid if not c.isdigit())
    digits = "".join(c for c in cid if c.isdigit())
    return int(rest.rstrip("]")), head, int(digits) if digits else -1


def _verdict(values, ratios, identities, errors):
    converged = {k: v for k, v in values.items() if v.converged}
    fin = {math.isfinite(v.value) for v in converged.values()}
    coherent = len(fin) <= 1
    all_fin = {math.isfinite(v.value) for v in values.values()}
    positive = all(r > 0 for r in ratios.values() if math.isfinite(r))
    ident_ok = all(r.get("pass", True) for r in identities.values())
    every_converged = len(converged) == len(values) and not errors
    invariants = {
        "finiteness_coherence": {"pass": coherent, "pattern_uniform": len(all_fin) <= 1},
        "ratios_positive": {"pass": positive},
        "identities": {"pass": ident_ok, "threshold": IDENTITY_TOL},
        "converged": {"pass": every_converged, "nonconverged": sorted(set(values) - set(converged), key=_key_order)},
    }
    if not coherent or not positive or (not ident_ok and every_converged):
        return "FAIL", invariants
    if not every_converged or len(all_fin) > 1 or not ident_ok:
        return "INCONCLUSIVE", invariants
    return "PASS", invariants


def _bracket(cfg: RunConfig, ref_value: ConditionValue | None) -> dict:
    est = dict(cfg.estimate)
    fam = TestFunctionFamily(est.get("family", "truncated_dual").replace("-", "_"), int(est.get("grid", 33)))
    e, w = cfg.exponents, cfg.weights
    if cfg.suite == "linear":
        ecfg = EstimatorConfig("H1", w["u"], e["q"], v=w["v"], p=e["p"], settings=cfg.settings)
    elif cfg.suite == "bilinear":
        ecfg = EstimatorConfig("H2", w["u"], e["q"], v1=w["v1"], v2=w["v2"], p1=e["p1"], p2=e["p2"],
                               settings=cfg.settings)
    elif cfg.bilinear:
        ecfg = EstimatorConfig("BGM", w["u"], e["q"], v1=w["v1"], v2=w["v2"], p1=e["p1"], p2=e["p2"],
                               settings=cfg.settings)
    else:
        ecfg = EstimatorConfig("GM", w["u"], e["q"], v=w["v"], p=e["p"], settings=cfg.settings)
    cond = ref_value.value if ref_value is not None else None
    try:
        return maximize_quotient(fam, ecfg, condition_value=cond).to_dict()
    except HardyKitError as exc:
        return {"error": type(exc).__name__, "message": str(exc)}


# -- sweeps ------------------------------------------------------------------

_EXPONENT_AXES = ("p", "q", "p1", "p2")
_PARAM_AXES = ("alpha", "beta", "gamma", "s", "s1", "s2")


def with_axis(doc: dict, axis: str, value) -> dict:
    """Copy of a config document with one scalar replaced.

    ``axis`` is an exponent name, a parameter name (applied to every parameter
    set), ``lambda`` (the exponent of a power weight u), ``seed`` or a dotted
    path such as ``weights.v1.lambda``.
    """
    doc = copy.deepcopy(doc)
    if axis in _EXPONENT_AXES:
        path = ["exponents", axis]
    elif axis in _PARAM_AXES:
        plist = doc.get("parameters", [{}])
        if isinstance(plist, dict):
            plist = [plist]
        for item in plist:
            item[axis] = value
        doc["parameters"] = plist
        return doc
    elif axis == "lambda":
        path = ["weights", "u", "lambda"]
    elif axis == "seed":
        path = ["seed"]
    else:
        path = axis.split(".")
    node = doc
    for part in path[:-1]:
        if not isinstance(node, dict) or part not in node:
            raise ConfigInvalid(f"sweep axis {axis!r} does not name a config scalar")
        node = node[part]
    if not isinstance(node, dict) or path[-1] not in node:
        raise ConfigInvalid(f"sweep axis {axis!r} does not name a config scalar")
    if isinstance(node[path[-1]], (dict, list)):
        raise ConfigInvalid(f"sweep axis {axis!r} is not a scalar")
    node[path[-1]] = value
    return doc


@dataclass
class SweepPoint:
    axis: str
    value: float
    report: EquivalenceReport | None = None
    error: dict | None = None

    def to_dict(self) -> dict:
        d = {"axis": self.axis, "value": self.value}
        if self.report is not None:
            d["report"] = self.report.to_dict()
        else:
            d["error"] = self.error
        return jsonable(d)


def sweep(base: RunConfig | dict, axis: str, values) -> list[SweepPoint]:
    """One report per value; configuration and numerical errors are collected per point."""
    doc = base.source if isinstance(base, RunConfig) else base
    with_axis(doc, axis, 0.0)  # validates the axis before any work
    points = []
    for val in values:
        try:
            rep = run_suite(parse_run_config(with_axis(doc, axis, val)))
            points.append(SweepPoint(axis, val, report=rep))
        except HardyKitError as exc:
            points.append(SweepPoint(axis, val, error={"error": type(exc).__name__, "message": str(exc)}))
    return points


SWEEP_COLUMNS = ("axis", "axis_value", "status", "condition", "value", "converged", "ratio", "error")


def sweep_csv(points: list[SweepPoint]) -> str:
    """One row per (sweep point, condition)."""
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(SWEEP_COLUMNS)
    for pt in points:
        if pt.report is None:
            wr.writerow([pt.axis, pt.value, "ERROR", "", "", "", "", f"{pt.error['error']}: {pt.error['message']}"])
            continue
        rep = pt.report.to_dict()
        for key, cv in rep["conditions"].items():
            wr.writerow([pt.axis, pt.value, rep["status"], key, cv["value"], cv["converged"],
                         rep["ratios"].get(key, ""), ""])
    return buf.getvalue()


# -- pointwise tables (plot data) ----------------------------------------------


def pointwise_table(cfg: RunConfig, n: int = 65) -> list[dict]:
    """Condition functions on an ``n``-point grid, for external plotting.

    Inf-type conditions use their canonical auxiliary functions.
    """
    tasks, _ = _plan(cfg)
    ctx = build_context(cfg)
    if ctx is None:
        raise ConfigInvalid("plot data is available for the linear and bilinear suites")
    xs = IntervalMap(ctx.interval).to_x(np.linspace(-8.0, 8.0, n))
    rows = []
    for key, cid, _, params in tasks:
        try:
            if cfg.suite == "linear":
                h = canonical_linear_candidates(cid, (1.0,))[0] if cid in INF_TYPE_LINEAR else None
                vals = eval_linear_pointwise(cid, xs, params, ctx, h)
            else:
                b = bt_id(cid)
                h1 = h2 = None
                if b in ("Bt16", "Bt17") or int(b[2:]) >= 18:
                    c1, c2 = canonical_bilinear_candidates(b)
                    h1, h2 = c1[0], c2[0]
                vals = eval_bilinear_pointwise(cid, xs, params, ctx, h1, h2)
        except NumericalError:
            continue
        for x, v in zip(xs, np.atleast_1d(vals)):
            rows.append({"condition": key, "x": float(x), "value": float(v)})
    return rows


# -- truncated suprema -----------------------------------------------------------


def truncation_ratios(u, v, p: float, q: float, s_small: float, s_large: float, x0s,
                      settings: QuadratureSettings | None = None) -> dict:
    """For each truncation item the ratios rhs/lhs at every truncation point and their spread."""
    settings = settings or QuadratureSettings()
    ctx = LinearContext.hardy(u, v, p, settings)
    base = LinearParams(1.0 / q, 1.0 / conjugate(p).p_conj)
    out = {}
    for item, (_, cid) in TRUNCATED_ITEMS.items():
        params = None
        for s in (s_small, s_large):
            cand = LinearParams(base.alpha, base.beta, s)
            if linear_side_ok(cid, cand):
                params = cand
                break
        if params is None:
            out[item] = {"skipped": "no admissible s"}
            continue
        ratios = []
        for x0 in x0s:
            lhs, rhs = truncated_pair(item, params, ctx, float(x0))
            ratios.append(rhs.value / lhs.value if lhs.value > 0 else math.nan)
        r = np.asarray(ratios)
        good = r[np.isfinite(r) & (r > 0)]
        spread = float(good.max() / good.min()) if good.size == r.size else INF
        out[item] = {"condition": cid, "s": params.s, "ratios": ratios, "spread": spread}
    return out


# -- randomized configurations ---------------------------------------------------

CONFIG_TYPES = ("power", "power_bounded", "exponential", "mixed")
DEFAULT_MIX = (("power", 8), ("power_bounded", 4), ("exponential", 4), ("mixed", 4))


def random_linear_weights(kind: str, p: float, q: float, rng: np.random.Generator) -> dict:
    """Weight documents ``u, v`` on which the reference condition is finite."""
    pc = conjugate(p).p_conj
    if kind == "power":
        # U ~ x^(lam+1), V ~ x^(mu(1-p')+1): finite iff the exponents balance
        lam = float(np.round(rng.uniform(-4.0, -1.25), 6))
        mu = ((lam + 1.0) / q * pc + 1.0) / (pc - 1.0)
        return {"u": {"family": "power", "lambda": lam}, "v": {"family": "power", "lambda": mu}}
    if kind == "power_bounded":
        lam = float(np.round(rng.uniform(-0.9, 2.0), 6))
        mu = float(np.round(rng.uniform(-0.5, 0.5), 6))
        iv = [0.0, 1.0]
        return {"u": {"family": "power", "lambda": lam, "interval": iv},
                "v": {"family": "power", "lambda": mu, "interval": iv}}
    if kind == "exponential":
        r = float(np.round(rng.uniform(0.25, 4.0), 6))
        rho = float(np.round(rng.uniform(0.0, 2.0), 6))
        return {"u": {"family": "exponential", "rate": -r}, "v": {"family": "exponential", "rate": rho}}
    if kind == "mixed":
        lam = float(np.round(rng.uniform(-0.75, 1.5), 6))
        r = float(np.round(rng.uniform(0.5, 2.0), 6))
        mu = float(np.round(rng.uniform(-0.5, 0.5), 6))
        return {"u": {"family": "product", "factors": [{"family": "power", "lambda": lam},
                                                       {"family": "exponential", "rate": -r}]},
                "v": {"family": "power", "lambda": mu, "scale": float(np.round(rng.uniform(0.5, 2.0), 6))}}
    raise ConfigInvalid(f"unknown config type {kind!r}")


def random_bilinear_weights(kind: str, p1: float, p2: float, q: float, rng: np.random.Generator) -> dict:
    """Weight documents ``u, v1, v2`` on which D is finite."""
    c1, c2 = conjugate(p1).p_conj, conjugate(p2).p_conj
    if kind == "power":
        # U ~ x^(lam+1), V_i ~ x^(mu_i(1-p_i')+1): finite iff the exponents balance
        m1 = float(np.round(rng.uniform(-0.5, 0.5), 6))
        m2 = float(np.round(rng.uniform(-0.5, 0.5), 6))
        e1 = m1 * (1 - c1) + 1.0
        e2 = m2 * (1 - c2) + 1.0
        lam = -1.0 - q * (e1 / c1 + e2 / c2)
        return {"u": {"family": "power", "lambda": lam},
                "v1": {"family": "power", "lambda": m1}, "v2": {"family": "power", "lambda": m2}}
    if kind == "power_bounded":
        iv = [0.0, 1.0]
        lam = float(np.round(rng.uniform(-0.9, 2.0), 6))
        return {"u": {"family": "power", "lambda": lam, "interval": iv},
                "v1": {"family": "power", "lambda": float(np.round(rng.uniform(-0.5, 0.5), 6)), "interval": iv},
                "v2": {"family": "power", "lambda": float(np.round(rng.uniform(-0.5, 0.5), 6)), "interval": iv}}
    if kind == "exponential":
        return {"u": {"family": "exponential", "rate": -float(np.round(rng.uniform(0.25, 4.0), 6))},
                "v1": {"family": "exponential", "rate": float(np.round(rng.uniform(0.0, 2.0), 6))},
                "v2": {"family": "exponential", "rate": float(np.round(rng.uniform(0.0, 2.0), 6))}}
    if kind == "mixed":
        lam = float(np.round(rng.uniform(-0.75, 1.5), 6))
        r = float(np.round(rng.uniform(0.5, 2.0), 6))
        return {"u": {"family": "product", "factors": [{"family": "power", "lambda": lam},
                                                       {"family": "exponential", "rate": -r}]},
                "v1": {"family": "power", "lambda": float(np.round(rng.uniform(-0.5, 0.5), 6))},
                "v2": {"family": "constant", "value": float(np.round(rng.uniform(0.5, 2.0), 6))}}
    raise ConfigInvalid(f"unknown config type {kind!r}")


def random_configs(suite: str, exponents: dict, parameters: list[dict], seed: int = 0,
                   mix=DEFAULT_MIX, conditions=None, quadrature: dict | None = None) -> list[dict]:
    """Config documents drawn from the given mix of weight types with a seeded generator."""
    rng = np.random.default_rng(seed)
    docs = []
    for kind, count in mix:
        for i in range(count):
            if suite == "linear":
                weights = random_linear_weights(kind, exponents["p"], exponents["q"], rng)
            elif suite == "bilinear":
                weights = random_bilinear_weights(kind, exponents["p1"], exponents["p2"], exponents["q"], rng)
            else:
                raise ConfigInvalid("random configs are generated for the linear and bilinear suites")
            doc = {"suite": suite, "name": f"{kind}-{i}", "weights": weights,
                   "exponents": dict(exponents), "parameters": copy.deepcopy(parameters), "seed": seed}
            if conditions is not None:
                doc["conditions"] = list(conditions)
            if quadrature:
                doc["quadrature"] = dict(quadrature)
            docs.append(doc)
    return docs
