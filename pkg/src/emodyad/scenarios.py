"""Named parameter sets for the documented couples.

Presets are plain configuration documents; config.parse_config turns them
into a RunConfig. The attitude-switch presets use reconstructed parameters:
two enemies with strong mutual influence, one of whom turns friendly at
t = 6.
"""

from dataclasses import dataclass
from typing import Any

ATAN = {"kind": "atan", "saturation": 1.0}


@dataclass(frozen=True)
class Preset:
    """A named configuration document."""

    name: str
    description: str
    document: dict[str, Any]


def _model(m1: float, m2: float, b1: float, b2: float, c1: float, c2: float) -> dict[str, Any]:
    return {
        "m1": m1, "m2": m2, "b1": b1, "b2": b2, "c1": c1, "c2": c2,
        "f1": dict(ATAN), "f2": dict(ATAN),
    }


_ENEMIES = _model(2.5, 2.5, 0.0, 0.0, -3.0, -3.0)
_SWITCH_BASE = {
    "model": _ENEMIES,
    "initial_state": {"x": -0.5, "y": 0.5},
    "integrator": {"t_end": 20.0},
    "grid": {"x_range": [-2.0, 2.0], "y_range": [-2.0, 2.0], "nx": 41, "ny": 41},
}


def _switch(*times: tuple[float, float]) -> dict[str, Any]:
    doc = dict(_SWITCH_BASE)
    doc["schedule"] = [{"t": t, "overrides": {"c1": c1}} for t, c1 in times]
    return doc


PRESETS: dict[str, Preset] = {
    preset.name: preset
    for preset in (
        Preset(
            "fig3-left",
            "Two pessimistic enemies just past the fold in b2: one stable node",
            {
                "model": _model(1.0, 1.0, -5.0, -4.19, -5.0, -3.0),
                "initial_state": {"x": 1.0, "y": 1.0},
                "integrator": {"t_end": 20.0},
                "grid": {"x_range": [-8.0, 8.0], "y_range": [-10.0, 6.0], "nx": 81, "ny": 81},
                "scan": {"param": "b2", "lo": -6.0, "hi": -2.0, "n": 81},
            },
        ),
        Preset(
            "enemies-bistable",
            "Two pessimistic enemies before the fold in b2: a saddle between two nodes",
            {
                "model": _model(1.0, 1.0, -5.0, -4.1, -5.0, -3.0),
                "initial_state": {"x": 1.0, "y": 1.0},
                "integrator": {"t_end": 20.0},
                "grid": {"x_range": [-8.0, 8.0], "y_range": [-10.0, 6.0], "nx": 81, "ny": 81},
                "separatrix": {"arc_length": 5.0},
            },
        ),
        Preset(
            "fig3-right",
            "Enemies with different forgetting rates near a saddle-node fold in b2",
            {
                "model": _model(1.0, 2.0, -4.0, -2.0, -5.0, -4.0),
                "initial_state": {"x": 1.0, "y": 1.0},
                "integrator": {"t_end": 20.0},
                "grid": {"x_range": [-12.0, 6.0], "y_range": [-8.0, 8.0], "nx": 81, "ny": 81},
                "scan": {"param": "b2", "lo": -1.0, "hi": 1.0, "n": 201},
            },
        ),
        Preset(
            "switch-success",
            "Enemies; person 1 turns friendly at t=6 and both calm down",
            _switch((6.0, 3.0)),
        ),
        Preset(
            "switch-early",
            "Enemies; person 1 is friendly only on [6, 6.2)",
            _switch((6.0, 3.0), (6.2, -3.0)),
        ),
        Preset(
            "switch-revert",
            "Enemies; person 1 is friendly on [6, 7) and the moods end up reversed",
            _switch((6.0, 3.0), (7.0, -3.0)),
        ),
        Preset(
            "symmetric-separatrix",
            "Identical neutral friends with opposite initial moods on the line y=-x",
            {
                "model": _model(1.0, 1.0, 0.0, 0.0, 2.0, 2.0),
                "initial_state": {"x": 3.0, "y": -3.0},
                "integrator": {"t_end": 20.0},
                "grid": {"x_range": [-4.0, 4.0], "y_range": [-4.0, 4.0], "nx": 101, "ny": 101},
                "scan": {"param": "b1", "lo": -6.0, "hi": 0.0, "n": 121},
                "separatrix": {"arc_length": 5.0},
            },
        ),
        Preset(
            "enemies-focus",
            "Opposite attitudes, equal forgetting rates: spiral into neutral mood",
            {
                "model": _model(1.0, 1.0, 0.0, 0.0, 1.0, -1.0),
                "initial_state": {"x": 2.0, "y": 1.0},
                "integrator": {"t_end": 20.0},
            },
        ),
        Preset(
            "enemies-node",
            "Opposite attitudes, very different forgetting rates: monotone approach",
            {
                "model": _model(1.0, 5.0, 0.0, 0.0, 1.0, -1.0),
                "initial_state": {"x": 2.0, "y": 1.0},
                "integrator": {"t_end": 20.0},
            },
        ),
    )
}

ALIASES = {"stockholm": "switch-revert"}


def preset_names() -> list[str]:
    """Preset names and aliases, sorted."""
    return sorted([*PRESETS, *ALIASES])


def get_preset(name: str) -> Preset | None:
    """Look up a preset by name or alias."""
    return PRESETS.get(ALIASES.get(name, name))
