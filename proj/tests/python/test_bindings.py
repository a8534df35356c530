"""Smoke tests for the Python bindings."""

import json
import pathlib

import jsonschema
import pytest

import hybrid_wlp as hw

ROOT = pathlib.Path(__file__).resolve().parents[2]
MODELS = ROOT / "models"
VALIDATOR = jsonschema.Draft202012Validator(json.loads((ROOT / "schema" / "report.schema.json").read_text()))


def valid(doc):
    errors = list(VALIDATOR.iter_errors(doc))
    assert not errors, errors[0].message
    return doc


@pytest.mark.parametrize("name", ["bouncing_ball", "bouncing_ball_dinv", "pendulum", "pendulum_flow", "drift"])
def test_models_verify(name):
    r = valid(hw.verify(MODELS / f"{name}.hwl"))
    assert r["summary"]["exit_code"] == 0
    assert r["summary"]["proved"] == r["summary"]["total"]


def test_text_and_path_agree():
    path = MODELS / "pendulum.hwl"
    assert hw.verify(path.read_text()) == hw.verify(path)


def test_mutant_refuted_with_witness():
    r = valid(hw.verify(MODELS / "mutants" / "ball_no_guard.hwl", seed=3))
    assert r["summary"]["exit_code"] == 2
    assert any(o["verdict"] == "Refuted" and "witness" in o for o in r["obligations"])


def test_settings_reach_the_report():
    assert hw.verify(MODELS / "drift.hwl", seed=11)["seed"] == 11
    with pytest.raises(hw.Error):
        hw.verify(MODELS / "drift.hwl", no_such_setting=1)


def test_certify_flow_only():
    r = valid(hw.certify(MODELS / "pendulum_flow.hwl", only="flow"))
    assert r["obligations"]
    assert all(o["kind"] == "flow-certificate" and o["certificate"]["certified"] for o in r["obligations"])
    with pytest.raises(hw.Error):
        hw.certify(MODELS / "pendulum_flow.hwl", only="neither")


def test_falsify():
    found = valid(hw.falsify(MODELS / "mutants" / "ball_no_guard.hwl"))
    assert found["found"]
    assert not valid(hw.falsify(MODELS / "pendulum.hwl", trials=100))["found"]


def test_laws():
    r = valid(hw.laws("sta", 2, ["dioid", "box"]))
    assert r["all_pass"]
    assert not hw.laws("rel", 2, ["wrong.mul-comm"])["all_pass"]
    assert "dioid.add-assoc" in hw.law_ids()
    with pytest.raises(hw.Error):
        hw.laws("rel", 2, ["no.such-law"])


def test_wlp_of_assignment_and_loop():
    assert hw.wlp("x := x + 1", "x > 0")["pre"] == "x + 1 > 0"
    r = hw.wlp("loop x := x + 1 inv x >= 0", "x >= 0")
    assert r["pre"] == "x >= 0"
    assert len(r["obligations"]) == 2


def test_parse_errors():
    with pytest.raises(hw.ParseError, match="line"):
        hw.verify("problem p\nvars x\npre x = 0\npost x = 0\nprogram evolve x' =")
    assert issubclass(hw.ParseError, ValueError)


def test_format_round_trip():
    text = (MODELS / "bouncing_ball.hwl").read_text()
    once = hw.format_problem(text)
    assert hw.format_problem(once) == once
