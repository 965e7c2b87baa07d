import json
import math
import os
from pathlib import Path

import pytest

import lightfol

SCENARIOS = Path(os.environ.get("LIGHTFOL_SCENARIOS", Path(__file__).resolve().parents[2] / "scenarios"))


def test_evaluate_returns_value_gradient_and_hessian():
    value, grad, hess = lightfol.evaluate("x1*x2", [3.0, 4.0])
    assert value == 12.0
    assert grad == [4.0, 3.0]
    assert hess == [[0.0, 1.0], [1.0, 0.0]]


def test_null_gradient_of_the_flat_level_function():
    _, grad, _ = lightfol.evaluate("sqrt(2)*x1 + x2 + x3", [0.1, 0.2, 0.3])
    assert grad[0] == pytest.approx(math.sqrt(2.0))
    assert -grad[0] ** 2 + grad[1] ** 2 + grad[2] ** 2 == pytest.approx(0.0, abs=1e-15)


def test_expression_errors_are_lightfol_errors():
    with pytest.raises(lightfol.LightfolError, match="Syntax"):
        lightfol.evaluate("x1 + * x2", [0.0, 0.0])
    with pytest.raises(lightfol.LightfolError):
        lightfol.evaluate("x3", [0.0, 0.0])


def test_shipped_scenario_passes():
    scn = lightfol.Scenario.load(str(SCENARIOS / "fol45_n3_s1.scn"))
    assert scn.kind == "foliation"
    assert scn.dim == 3
    assert len(scn.registered_checks) == 12
    report = lightfol.run_checks(scn)
    assert report.passed
    assert all(c.max_residual <= c.tolerance for c in report.checks)


def test_broken_kappa_fails_only_rummler():
    report = lightfol.run_checks(lightfol.Scenario.load(str(SCENARIOS / "broken_kappa.scn")))
    assert not report.passed
    failing = [c.name for c in report.checks if not c.passed]
    assert failing == ["rummler"]


def test_jsonl_has_header_and_one_record_per_sample():
    scn = lightfol.Scenario.load(str(SCENARIOS / "warped_exp.scn"))
    report = lightfol.run_checks(scn, only=["rummler", "ltr"], samples=4)
    lines = report.to_jsonl().splitlines()
    assert len(lines) == 1 + 2 * 4
    records = [json.loads(line) for line in lines[1:]]
    assert {r["check"] for r in records} == {"rummler", "ltr"}
    assert all(r["pass"] for r in records)
    assert report.to_jsonl() == lightfol.run_checks(scn, only=["rummler", "ltr"], samples=4).to_jsonl()


def test_parse_errors_carry_the_line():
    with pytest.raises(lightfol.ScenarioParseError, match="line 2"):
        lightfol.Scenario.parse("[manifold]\ndim = three\n")


def test_generated_scenario_round_trips():
    scn = lightfol.Scenario.parse(lightfol.fol45_scenario_text(4, 2), "gen")
    assert scn.index == 2
    assert lightfol.run_checks(scn, samples=2).passed
    with pytest.raises(lightfol.LightfolError):
        lightfol.fol45_scenario_text(3, 3)
