import json

import pytest

from hardykit.config import config_hash, load_run_config, parse_run_config, read_document
from hardykit.errors import ConfigInvalid, ExponentOutOfRange

BASE = {
    "suite": "linear",
    "weights": {"u": {"family": "power", "lambda": -2}, "v": {"family": "constant", "value": 1}},
    "exponents": {"p": 2, "q": 2},
}


def doc(**changes):
    d = json.loads(json.dumps(BASE))
    d.update(changes)
    return d


def test_minimal_config():
    cfg = parse_run_config(doc())
    assert cfg.suite == "linear" and cfg.exponents == {"p": 2.0, "q": 2.0}
    assert cfg.parameters == [{}] and cfg.seed == 0 and cfg.conditions is None
    assert len(cfg.sha256) == 64


def test_hash_ignores_key_order():
    a = doc(seed=3)
    b = dict(reversed(list(a.items())))
    assert config_hash(a) == config_hash(b)
    assert config_hash(a) != config_hash(doc(seed=4))


@pytest.mark.parametrize("bad", [
    doc(colour="blue"),
    doc(suite="trilinear"),
    doc(exponents={"p": 2, "qq": 2}),
    doc(weights={"u": {"family": "power", "lambda": -2}}),
    doc(parameters=[{"sigma": 1}]),
    doc(seed=1.5),
    doc(inject={"B2[0]": "big"}),
    doc(quadrature={"rel": 1e-8}),
    doc(estimate={"family": "truncated_dual", "size": 3}),
    doc(bilinear=True),
])
def test_invalid_documents(bad):
    with pytest.raises(ConfigInvalid):
        parse_run_config(bad)


@pytest.mark.parametrize("suite, exponents", [
    ("linear", {"p": 3, "q": 2}),
    ("linear", {"p": 1, "q": 2}),
    ("bilinear", {"p1": 2, "p2": 2, "q": 1.5}),
])
def test_exponent_hypotheses(suite, exponents):
    d = doc(suite=suite, exponents=exponents)
    if suite == "bilinear":
        d["weights"] = {"u": BASE["weights"]["u"], "v1": BASE["weights"]["v"], "v2": BASE["weights"]["v"]}
    with pytest.raises(ExponentOutOfRange):
        parse_run_config(d)


def test_geomean_suite_allows_small_exponents_and_bilinear_flag():
    cfg = parse_run_config(doc(suite="geomean", exponents={"p": 0.5, "q": 1}))
    assert cfg.exponents["p"] == 0.5
    d = doc(suite="geomean", bilinear=True, exponents={"p1": 2, "p2": 2, "q": 4})
    d["weights"] = {"u": BASE["weights"]["u"], "v1": BASE["weights"]["v"], "v2": BASE["weights"]["v"]}
    assert parse_run_config(d).bilinear


def test_toml_and_json_files_agree(tmp_path):
    (tmp_path / "c.json").write_text(json.dumps(doc(seed=7)))
    (tmp_path / "c.toml").write_text(
        'suite = "linear"\nseed = 7\n'
        '[weights.u]\nfamily = "power"\nlambda = -2\n'
        '[weights.v]\nfamily = "constant"\nvalue = 1\n'
        '[exponents]\np = 2\nq = 2\n'
    )
    a, b = load_run_config(tmp_path / "c.json"), load_run_config(tmp_path / "c.toml")
    assert a.weights == b.weights and a.exponents == b.exponents and a.seed == b.seed == 7


def test_unreadable_documents(tmp_path):
    with pytest.raises(ConfigInvalid):
        read_document(tmp_path / "missing.json")
    (tmp_path / "bad.json").write_text("{not json")
    with pytest.raises(ConfigInvalid):
        read_document(tmp_path / "bad.json")
    (tmp_path / "list.json").write_text("[1, 2]")
    with pytest.raises(ConfigInvalid):
        read_document(tmp_path / "list.json")


def test_inject_accepts_infinity():
    cfg = parse_run_config(doc(inject={"B2": "+inf", "B3[0]": 2}))
    assert cfg.inject == {"B2": float("inf"), "B3[0]": 2.0}
