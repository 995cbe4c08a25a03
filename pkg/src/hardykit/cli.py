"""Command-line interface.

Exit codes: 0 success (PASS for verify-equivalence), 1 FAIL, 2 configuration
error, 3 numerical error or non-convergence, 4 INCONCLUSIVE.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import __version__
from .bilinear import BILINEAR_IDS, BilinearContext, evaluate_bilinear
from .config import RunConfig, config_hash, load_run_config, read_document
from .equivalence import (
    _bilinear_params,
    _linear_params,
    jsonable,
    pointwise_table,
    run_suite,
    sweep,
    sweep_csv,
)
from .errors import ConfigError, ConfigInvalid, HardyKitError, LogNotIntegrable, NumericalError
from .estimator import FAMILY_KINDS, EstimatorConfig, TestFunctionFamily, maximize_quotient
from .geomean import condition_scriptB, condition_scriptB_bilinear, limit_check_LHA
from .linear import LINEAR_IDS, LinearContext, evaluate_linear, muckenhoupt_AM
from .quadrature import QuadratureSettings
from .weights import parse_weight

log = logging.getLogger("hardykit")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4
STATUS_EXIT = {"PASS": EXIT_OK, "FAIL": EXIT_FAIL, "INCONCLUSIVE": EXIT_INCONCLUSIVE}
DEFAULT_ALPHAS = (1.0, 0.1, 0.01, 0.001)
LIMIT_KEYS = {"f", "x", "alphas", "quadrature", "seed"}


def _header(sha: str, seed: int) -> dict:
    return {"version": __version__, "config_sha256": sha, "seed": seed}


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(record: dict, path: str | None) -> None:
    _emit(json.dumps(jsonable(record), indent=2, sort_keys=True), path)


def _csv_text(header: dict, columns, rows) -> str:
    buf = io.StringIO()
    for k, v in header.items():
        buf.write(f"# {k}={v}\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(columns)
    for row in rows:
        wr.writerow([jsonable(v) for v in row])
    return buf.getvalue()


def _load(args) -> RunConfig:
    cfg = load_run_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def _write_plot_data(cfg: RunConfig, path: str) -> None:
    rows = pointwise_table(cfg)
    text = _csv_text(_header(cfg.sha256, cfg.seed), ("condition", "x", "value"),
                     ([r["condition"], r["x"], r["value"]] for r in rows))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# -- subcommands -----------------------------------------------------------------


def cmd_evaluate(args) -> int:
    cfg = _load(args)
    cond = args.cond
    k = args.param_set
    if not 0 <= k < len(cfg.parameters):
        raise ConfigInvalid(f"--param-set {k} is out of range (config has {len(cfg.parameters)})")
    w, e, s = cfg.weights, cfg.exponents, cfg.settings
    if cfg.suite == "linear":
        if cond not in LINEAR_IDS:
            raise ConfigInvalid(f"unknown linear condition {cond!r}")
        if cond == "AM":
            cv = muckenhoupt_AM(w["u"], w["v"], e["p"], e["q"], s)
        else:
            ctx = LinearContext.hardy(w["u"], w["v"], e["p"], s)
            cv = evaluate_linear(cond, _linear_params(cfg, cfg.parameters[k]), ctx)
    elif cfg.suite == "bilinear":
        if cond not in BILINEAR_IDS:
            raise ConfigInvalid(f"unknown bilinear condition {cond!r}")
        ctx = BilinearContext.hardy(w["u"], w["v1"], w["v2"], e["p1"], e["p2"], s)
        cv = evaluate_bilinear(cond, _bilinear_params(cfg, cfg.parameters[k]), ctx)
    else:
        if cond not in ("scriptB", "scriptB2"):
            raise ConfigInvalid("the geomean suite evaluates scriptB or scriptB2")
        if (cond == "scriptB2") != cfg.bilinear:
            raise ConfigInvalid(f"{cond} does not match the config's 'bilinear' flag")
        if cfg.bilinear:
            cv = condition_scriptB_bilinear(w["u"], w["v1"], w["v2"], e["p1"], e["p2"], e["q"], s)
        else:
            cv = condition_scriptB(w["u"], w["v"], e["p"], e["q"], s)
    record = _header(cfg.sha256, cfg.seed)
    record["result"] = cv.to_dict()
    _emit_json(record, args.output)
    if args.plot_data:
        _write_plot_data(cfg, args.plot_data)
    if not cv.converged:
        log.error("%s did not converge to the requested tolerance", cond)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load(args)
    report = run_suite(cfg)
    _emit(json.dumps(report.to_dict(), indent=2, sort_keys=True), args.output)
    if args.plot_data:
        _write_plot_data(cfg, args.plot_data)
    log.info("status %s", report.status)
    return STATUS_EXIT[report.status]


_SUITE_INEQ = {"linear": ("H1",), "bilinear": ("H2",), "geomean": ("GM", "BGM")}


def cmd_estimate(args) -> int:
    cfg = _load(args)
    ineq = args.ineq or ("BGM" if cfg.bilinear else _SUITE_INEQ[cfg.suite][0])
    if ineq not in _SUITE_INEQ[cfg.suite] or (cfg.suite == "geomean" and (ineq == "BGM") != cfg.bilinear):
        raise ConfigInvalid(f"--ineq {ineq} does not match the {cfg.suite} config")
    w, e = cfg.weights, cfg.exponents
    if ineq in ("H1", "GM"):
        ecfg = EstimatorConfig(ineq, w["u"], e["q"], v=w["v"], p=e["p"], settings=cfg.settings)
    else:
        ecfg = EstimatorConfig(ineq, w["u"], e["q"], v1=w["v1"], v2=w["v2"], p1=e["p1"], p2=e["p2"],
                               settings=cfg.settings)
    family = TestFunctionFamily(args.family.replace("-", "_"), args.grid)
    bracket = maximize_quotient(family, ecfg)
    record = _header(cfg.sha256, cfg.seed)
    record["ineq"] = ineq
    record["family"] = {"kind": family.kind, "grid": family.grid}
    record["bracket"] = bracket.to_dict()
    _emit_json(record, args.output)
    return EXIT_OK


def _parse_values(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigInvalid(f"--values must be a comma-separated list of numbers, got {text!r}") from None


def cmd_sweep(args) -> int:
    cfg = _load(args)
    values = _parse_values(args.values)
    if not values:
        raise ConfigInvalid("--values must not be empty")
    points = sweep(cfg, args.axis, values)
    header = _header(cfg.sha256, cfg.seed)
    if args.format == "csv":
        text = "".join(f"# {k}={v}\n" for k, v in header.items()) + sweep_csv(points)
        _emit(text, args.output)
    else:
        header["points"] = [p.to_dict() for p in points]
        _emit_json(header, args.output)
    return EXIT_OK


def _limit_doc(args) -> dict:
    if args.config:
        doc = read_document(args.config)
    else:
        doc = {}
    if args.f:
        try:
            doc["f"] = json.loads(args.f)
        except ValueError as exc:
            raise ConfigInvalid(f"--f must be a JSON weight: {exc}") from None
    if args.x is not None:
        doc["x"] = args.x
    if args.alphas:
        doc["alphas"] = _parse_values(args.alphas)
    unknown = set(doc) - LIMIT_KEYS
    if unknown:
        raise ConfigInvalid(f"unknown limit-check keys: {sorted(unknown)}")
    if "f" not in doc:
        raise ConfigInvalid("limit-check needs a weight f (--f or a config with 'f')")
    return doc


def cmd_limit_check(args) -> int:
    doc = _limit_doc(args)
    f = parse_weight(doc["f"])
    x = float(doc.get("x", 1.0))
    alphas = [float(a) for a in doc.get("alphas", DEFAULT_ALPHAS)]
    settings = QuadratureSettings.from_dict(doc.get("quadrature", {}))
    seed = args.seed if args.seed is not None else int(doc.get("seed", 0))
    rows = []
    for a in alphas:
        r = limit_check_LHA(f, x, a, settings)
        rows.append((r.alpha, r.lhs, r.rhs, r.gap))
    _emit(_csv_text(_header(config_hash(doc), seed), ("alpha", "lhs", "rhs", "gap"), rows), args.output)
    return EXIT_OK


# -- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardykit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hardykit {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more log output on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        if config_required:
            p.add_argument("config", help="run config (JSON, or TOML by suffix)")
        p.add_argument("-o", "--output", help="write the result here instead of stdout")
        p.add_argument("--seed", type=int, help="override the config seed")

    p = sub.add_parser("evaluate", help="evaluate one condition")
    common(p)
    p.add_argument("--cond", required=True, help="condition id, e.g. AM, B7, D, Bt12, At3, scriptB")
    p.add_argument("--param-set", type=int, default=0, help="index into the config's parameter sets")
    p.add_argument("--plot-data", help="write pointwise condition values (CSV) for plotting")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("verify-equivalence", help="run the equivalence suite for a config")
    common(p)
    p.add_argument("--plot-data", help="write pointwise condition values (CSV) for plotting")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("estimate-constant", help="lower bound for the inequality constant")
    common(p)
    p.add_argument("--ineq", choices=("H1", "H2", "GM", "BGM"))
    p.add_argument("--family", default="truncated-dual",
                   choices=[k.replace("_", "-") for k in FAMILY_KINDS if k != "custom"])
    p.add_argument("--grid", type=int, default=33)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("sweep", help="run the suite along one config axis")
    common(p)
    p.add_argument("--axis", required=True, help="p, q, p1, p2, s, s1, s2, lambda or a dotted path")
    p.add_argument("--values", required=True, help="comma-separated axis values")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("limit-check", help="power means of the averaging operator against the geometric mean")
    common(p, config_required=False)
    p.add_argument("config", nargs="?", help="config with keys f, x, alphas, quadrature")
    p.add_argument("--f", help="weight as JSON, e.g. '{\"family\": \"power\", \"lambda\": 1}'")
    p.add_argument("--x", type=float)
    p.add_argument("--alphas", help="comma-separated alpha grid")
    p.set_defaults(func=cmd_limit_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="hardykit: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except LogNotIntegrable as exc:
        log.error("log not integrable: %s", exc)
        return EXIT_NUMERIC
    except NumericalError as exc:
        log.error("numerical error: %s", exc)
        return EXIT_NUMERIC
    except HardyKitError as exc:  # pragma: no cover
        log.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
