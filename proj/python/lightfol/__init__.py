"""Python access to the lightfol engine.

Load or parse a scenario, run its checks and inspect the per-sample residuals::

    import lightfol
    scn = lightfol.Scenario.load("scenarios/fol45_n3_s1.scn")
    report = lightfol.run_checks(scn)
    assert report.passed
"""

from ._core import (
    CheckReport,
    LightfolError,
    Report,
    SampleOutcome,
    Scenario,
    ScenarioParseError,
    evaluate,
    fol45_scenario_text,
    run_checks,
)

__all__ = [
    "CheckReport",
    "LightfolError",
    "Report",
    "SampleOutcome",
    "Scenario",
    "ScenarioParseError",
    "evaluate",
    "fol45_scenario_text",
    "run_checks",
]
