"""Run-configuration documents (JSON, or TOML) and their validation."""

from __future__ import annotations

import copy
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigInvalid, ExponentOutOfRange
from .quadrature import QuadratureSettings
from .weights import Interval, Weight, parse_weight

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

SUITES = ("linear", "bilinear", "geomean")
WEIGHT_NAMES = {"linear": ("u", "v"), "bilinear": ("u", "v1", "v2"), "geomean": ("u", "v")}
EXPONENT_NAMES = {"linear": ("p", "q"), "bilinear": ("p1", "p2", "q"), "geomean": ("p", "q")}
PARAM_KEYS = ("alpha", "beta", "gamma", "s", "s1", "s2")
TOP_KEYS = {
    "suite", "name", "interval", "weights", "exponents", "parameters", "conditions",
    "quadrature", "seed", "identities", "estimate", "inject", "bilinear",
}
ESTIMATE_KEYS = {"family", "grid"}


def read_document(path: str | Path) -> dict:
    """Parse a JSON or TOML file into a dict (TOML when the suffix is .toml)."""
    path = Path(path)
    try:
        text = path.read_bytes()
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc}") from None
    try:
        if path.suffix.lower() == ".toml":
            doc = tomllib.loads(text.decode("utf-8"))
        else:
            doc = json.loads(text)
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigInvalid(f"cannot parse config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigInvalid("a config document must be an object")
    return doc


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)


def config_hash(doc: dict) -> str:
    return hashlib.sha256(canonical_json(doc).encode("utf-8")).hexdigest()


def _number(doc, key, where):
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigInvalid(f"{where}.{key} must be a number")
    return float(v)


@dataclass
class RunConfig:
    suite: str
    weights: dict[str, Weight]
    exponents: dict[str, float]
    parameters: list[dict] = field(default_factory=lambda: [{}])
    conditions: tuple[str, ...] | None = None
    settings: QuadratureSettings = field(default_factory=QuadratureSettings)
    seed: int = 0
    identities: bool = True
    estimate: dict | None = None
    inject: dict = field(default_factory=dict)
    name: str = ""
    bilinear: bool = False
    source: dict = field(default_factory=dict)

    @property
    def sha256(self) -> str:
        return config_hash(self.source)

    @property
    def interval(self) -> Interval:
        return self.weights["u"].interval


def parse_run_config(doc: dict) -> RunConfig:
    """Validate a config document; every unknown key is an error."""
    if not isinstance(doc, dict):
        raise ConfigInvalid("a config document must be an object")
    source = copy.deepcopy(doc)
    unknown = set(doc) - TOP_KEYS
    if unknown:
        raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
    suite = doc.get("suite", "bilinear")
    if suite not in SUITES:
        raise ConfigInvalid(f"suite must be one of {SUITES}, got {suite!r}")
    bil = bool(doc.get("bilinear", False))
    if bil and suite != "geomean":
        raise ConfigInvalid("the 'bilinear' flag only applies to the geomean suite")
    wnames = ("u", "v1", "v2") if bil else WEIGHT_NAMES[suite]
    enames = ("p1", "p2", "q") if bil else EXPONENT_NAMES[suite]

    interval = Interval.parse(doc["interval"]) if "interval" in doc else None
    wdoc = doc.get("weights")
    if not isinstance(wdoc, dict):
        raise ConfigInvalid("'weights' must be an object")
    if set(wdoc) != set(wnames):
        raise ConfigInvalid(f"the {suite} suite needs exactly the weights {list(wnames)}, got {sorted(wdoc)}")
    weights = {k: parse_weight(wdoc[k], interval) for k in wnames}
    ref = weights["u"].interval
    for k, w in weights.items():
        if tuple(w.interval) != tuple(ref):
            raise ConfigInvalid(f"weight {k} lives on {tuple(w.interval)}, u on {tuple(ref)}")

    edoc = doc.get("exponents")
    if not isinstance(edoc, dict) or set(edoc) != set(enames):
        raise ConfigInvalid(f"'exponents' must give exactly {list(enames)}")
    exponents = {k: _number(edoc, k, "exponents") for k in enames}
    _check_exponents(suite, bil, exponents)

    pdoc = doc.get("parameters", [{}])
    if isinstance(pdoc, dict):
        pdoc = [pdoc]
    if not isinstance(pdoc, list) or not pdoc:
        raise ConfigInvalid("'parameters' must be a nonempty list of objects")
    params = []
    for i, item in enumerate(pdoc):
        if not isinstance(item, dict):
            raise ConfigInvalid(f"parameters[{i}] must be an object")
        bad = set(item) - set(PARAM_KEYS)
        if bad:
            raise ConfigInvalid(f"unknown keys in parameters[{i}]: {sorted(bad)}")
        params.append({k: _number(item, k, f"parameters[{i}]") for k in PARAM_KEYS if k in item})

    conds = doc.get("conditions")
    if conds is not None:
        if not isinstance(conds, list) or not all(isinstance(c, str) for c in conds) or not conds:
            raise ConfigInvalid("'conditions' must be a nonempty list of condition ids")
        conds = tuple(conds)

    try:
        settings = QuadratureSettings.from_dict(doc.get("quadrature", {}))
    except TypeError as exc:
        raise ConfigInvalid(str(exc)) from None

    seed = doc.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigInvalid("'seed' must be an integer")

    est = doc.get("estimate")
    if est is not None:
        if not isinstance(est, dict) or set(est) - ESTIMATE_KEYS:
            raise ConfigInvalid(f"'estimate' accepts only {sorted(ESTIMATE_KEYS)}")

    inject = doc.get("inject", {})
    if not isinstance(inject, dict):
        raise ConfigInvalid("'inject' must map condition keys to values")
    inject = {k: _injected(v) for k, v in inject.items()}

    return RunConfig(
        suite=suite,
        weights=weights,
        exponents=exponents,
        parameters=params,
        conditions=conds,
        settings=settings,
        seed=seed,
        identities=bool(doc.get("identities", True)),
        estimate=est,
        inject=inject,
        name=str(doc.get("name", "")),
        bilinear=bil,
        source=source,
    )


def _injected(v) -> float:
    if v in ("+inf", "inf"):
        return math.inf
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    raise ConfigInvalid(f"injected values must be numbers or '+inf', got {v!r}")


def _check_exponents(suite: str, bil: bool, e: dict) -> None:
    if suite == "linear":
        if not (1 < e["p"] <= e["q"] < math.inf):
            raise ExponentOutOfRange(f"the linear suite needs 1 < p <= q < inf (p={e['p']}, q={e['q']})")
    elif suite == "bilinear":
        p1, p2, q = e["p1"], e["p2"], e["q"]
        if not (p1 > 1 and p2 > 1 and max(p1, p2) <= q < math.inf):
            raise ExponentOutOfRange(f"the bilinear suite needs 1 < p1, p2 <= q < inf (p1={p1}, p2={p2}, q={q})")
    elif bil:
        p1, p2, q = e["p1"], e["p2"], e["q"]
        if not (p1 > 0 and p2 > 0 and 1 < max(p1, p2) < q < math.inf):
            raise ExponentOutOfRange(f"need 1 < max(p1, p2) < q < inf (p1={p1}, p2={p2}, q={q})")
    elif not (0 < e["p"] <= e["q"] < math.inf):
        raise ExponentOutOfRange(f"need 0 < p <= q < inf (p={e['p']}, q={e['q']})")


def load_run_config(path: str | Path) -> RunConfig:
    return parse_run_config(read_document(path))
