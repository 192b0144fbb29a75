"""Two-way fiber time transfer simulator and delay attack detector.

Scenarios are plain dicts in the JSON config schema: times in integer
picoseconds, skews in ps/s. Anything left out keeps its default.
"""

import json

from . import _twtt
from ._twtt import (
    DecodeError,
    correct,
    decode,
    encode,
    mtie,
    precision_recall,
    preset_names,
    stability_curve,
    tdev,
)

__all__ = [
    "DecodeError",
    "correct",
    "decode",
    "encode",
    "mtie",
    "precision_recall",
    "preset",
    "preset_names",
    "run_loopback",
    "run_scenario",
    "scenario",
    "stability_curve",
    "tdev",
    "trace_csv",
]


def preset(name):
    return json.loads(_twtt.preset_json(name))


def scenario(base=None, **overrides):
    """Full scenario dict: a preset name or dict, with top-level overrides."""
    doc = preset(base) if isinstance(base, str) else dict(base or {})
    doc.update(overrides)
    return json.loads(_twtt.normalize_scenario(json.dumps(doc)))


def _text(config):
    return json.dumps(scenario(config) if isinstance(config, str) else config)


def run_scenario(config):
    """Simulate in-process; returns the trace as a dict of columns."""
    return _twtt.run_scenario(_text(config))


def run_loopback(config):
    """Same scenario through proxy and both nodes over loopback UDP."""
    return _twtt.run_loopback(_text(config))


def trace_csv(config):
    return _twtt.trace_csv(_text(config))
