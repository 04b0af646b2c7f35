import json
import math
import os
from pathlib import Path

import pytest

import tana

SCENARIOS = Path(os.environ.get("TANA_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))
MICS = [(0.05, 1.5, 0.5), (0.05, 1.5, 1.0), (0.05, 1.5, 1.5)]


def test_temperature_mappings():
    assert tana.celsius_to_fahrenheit(100.0) == pytest.approx(212.0, abs=1e-12)
    assert tana.fahrenheit_to_celsius(-40.0) == pytest.approx(-40.0, abs=1e-12)
    with pytest.raises(tana.TanaError) as err:
        tana.celsius_to_fahrenheit(math.nan)
    assert err.value.code == "NonFiniteInput"


def test_schedule_helpers():
    assert tana.expected_sample_count(7, 0, 10000) == 1429
    assert tana.next_fire_tick(10, 3, 4) == 13
    assert tana.period_for_rate(100.0) == 10
    with pytest.raises(tana.TanaError) as err:
        tana.period_for_rate(3.0)
    assert err.value.code == "NonIntegralPeriod"


def test_height_estimate_recovers_the_source():
    offsets = tana.predicted_offsets_us(MICS, (2.55, 1.5, 0.3))
    assert offsets[0] == 0.0
    height, residual = tana.estimate_source_height(MICS, offsets, (0, 0, 0), (5, 3, 2.5))
    assert abs(height - 0.3) <= 0.05
    assert residual >= 0.0


def test_run_and_evaluate_fall_scenario():
    scenario = json.loads((SCENARIOS / "fall1.json").read_text())
    records = tana.run_scenario(scenario, views=["native", "fahrenheit"], seed=42)
    assert [r["view"] for r in records if r.get("type") == "view"] == ["native", "fahrenheit"]
    assert records[-1]["type"] == "run_summary"
    alarms = [r for r in records if r.get("type") == "fall_alarm"]
    assert len(alarms) == 1 and alarms[0]["confidence"] == "corroborated"
    assert not any("sensor_id" in json.dumps(r) for r in records[:-1])
    report = tana.evaluate(alarms, scenario)
    assert report["precision"] == 1.0 and report["recall"] == 1.0
    assert tana.run_scenario(scenario, seed=42) == tana.run_scenario(scenario, seed=42)


def test_bad_input_raises():
    with pytest.raises(tana.TanaError) as err:
        tana.run_scenario("{not json")
    assert err.value.code == "SchemaError"
    scenario = (SCENARIOS / "fall1.json").read_text()
    with pytest.raises(tana.TanaError) as err:
        tana.run_scenario(scenario, views=["kelvin"])
    assert err.value.code == "UnknownView"
