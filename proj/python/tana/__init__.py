"""Python access to the tana sensor hub core.

The native module does the work; this wrapper turns its JSON text into Python objects.
"""

import json

from . import _tana
from ._tana import (
    TanaError,
    celsius_to_fahrenheit,
    estimate_source_height,
    expected_sample_count,
    fahrenheit_to_celsius,
    next_fire_tick,
    period_for_rate,
    predicted_offsets_us,
)

__all__ = [
    "TanaError",
    "celsius_to_fahrenheit",
    "estimate_source_height",
    "evaluate",
    "expected_sample_count",
    "fahrenheit_to_celsius",
    "next_fire_tick",
    "period_for_rate",
    "predicted_offsets_us",
    "run_scenario",
]


def _document(scenario):
    return scenario if isinstance(scenario, str) else json.dumps(scenario)


def run_scenario(scenario, views=("native",), seed=None):
    """Run a scenario (dict or JSON text) and return its output records as dicts."""
    text = _tana.run_scenario(_document(scenario), list(views), seed)
    return [json.loads(line) for line in text.splitlines()]


def evaluate(alarms, scenario):
    """Score alarm records (dicts) against a scenario's ground truth."""
    lines = "\n".join(json.dumps(a) for a in alarms)
    return json.loads(_tana.evaluate(lines, _document(scenario)))
