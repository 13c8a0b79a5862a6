"""Configuration file parsing for emodyad."""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .analysis import GridSpec
from .discrete import DiscreteParams
from .influence import InfluenceFunction
from .integrate import IntegratorConfig
from .model import PARAMETER_NAMES, Parameters, ParameterSchedule, State
from .scenarios import get_preset, preset_names

OUTPUT_FORMATS = ("csv", "json")


class ConfigError(Exception):
    """Exception raised for configuration errors."""


@dataclass(frozen=True)
class ScheduleEntry:
    """Parameter overrides that take effect at time t."""

    t: float
    overrides: dict[str, float]


@dataclass(frozen=True)
class GridSettings:
    """Basin grid and convergence settings."""

    grid: GridSpec = field(default_factory=GridSpec)
    tol: float = 1e-8
    t_max: float = 200.0
    match_radius: float = 1e-3


@dataclass(frozen=True)
class ScanSettings:
    """One-parameter sweep."""

    param: str = "b1"
    lo: float = -6.0
    hi: float = 0.0
    n: int = 121


@dataclass(frozen=True)
class SeparatrixSettings:
    """Stable-manifold tracing."""

    arc_length: float = 5.0


@dataclass(frozen=True)
class ValidateSettings:
    """Influence-function axiom check."""

    influence: InfluenceFunction = field(default_factory=InfluenceFunction)
    grid_half_width: float = 100.0
    grid_points: int = 10001
    tol: float = 1e-9


@dataclass(frozen=True)
class DiscreteSettings:
    """Round model and its starting scores."""

    params: DiscreteParams = field(default_factory=lambda: DiscreteParams(0.5, 0.5, 0.0, 0.0))
    w0: float = 1.0
    h0: float = 0.0
    steps: int = 50


@dataclass(frozen=True)
class CertifySettings:
    """Lyapunov sampling."""

    samples: int = 10000
    seed: int = 0


@dataclass(frozen=True)
class OutputSettings:
    """Where and how data is written."""

    path: str | None = None
    format: str | None = None


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs, validated."""

    model: Parameters | None = None
    schedule: tuple[ScheduleEntry, ...] = ()
    initial_state: State = field(default_factory=lambda: State(1.0, 0.0))
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    grid: GridSettings = field(default_factory=GridSettings)
    scan: ScanSettings = field(default_factory=ScanSettings)
    separatrix: SeparatrixSettings = field(default_factory=SeparatrixSettings)
    validate: ValidateSettings = field(default_factory=ValidateSettings)
    discrete: DiscreteSettings = field(default_factory=DiscreteSettings)
    certify: CertifySettings = field(default_factory=CertifySettings)
    scenario: str | None = None
    workers: int = 1
    output: OutputSettings = field(default_factory=OutputSettings)

    def require_model(self) -> Parameters:
        """Return the model parameters or fail with a usage message."""
        if self.model is None:
            raise ConfigError("No model parameters: give a model block or a scenario")
        return self.model

    def parameter_schedule(self) -> ParameterSchedule:
        """Build the schedule; overrides accumulate from one entry to the next."""
        initial = self.require_model()
        current = initial
        switches = []
        for entry in self.schedule:
            current = current.with_values(**entry.overrides)
            switches.append((entry.t, current))
        return ParameterSchedule(initial=initial, switches=tuple(switches))


TOP_LEVEL_KEYS = (
    "model",
    "schedule",
    "initial_state",
    "integrator",
    "grid",
    "scan",
    "separatrix",
    "validate",
    "discrete",
    "certify",
    "scenario",
    "workers",
    "output",
)


def _validate_keys(block: str, data: Any, allowed: tuple[str, ...]) -> dict[str, Any]:
    """Validate that a block is a mapping with only known keys."""
    if not isinstance(data, dict):
        raise ConfigError(f"{block} must be a mapping")
    unknown = sorted(str(k) for k in data if k not in allowed)
    if unknown:
        raise ConfigError(f"Unknown keys in {block}: {', '.join(unknown)}")
    return data


def _number(block: str, key: str, value: Any) -> float:
    """Validate a finite real value."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{block}.{key} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{block}.{key} must be finite, got {value!r}")
    return float(value)


def _integer(block: str, key: str, value: Any) -> int:
    """Validate an integer value."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{block}.{key} must be an integer, got {value!r}")
    return value


def _range(block: str, key: str, value: Any) -> tuple[float, float]:
    """Validate a [lo, hi] pair."""
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{block}.{key} must be a [lo, hi] pair")
    return (_number(block, key, value[0]), _number(block, key, value[1]))


def _parse_influence(block: str, data: Any) -> InfluenceFunction:
    data = _validate_keys(block, data, ("kind", "saturation"))
    return InfluenceFunction(
        kind=str(data.get("kind", "atan")),
        saturation=_number(block, "saturation", data.get("saturation", 1.0)),
    )


def _parse_model(data: Any) -> Parameters:
    data = _validate_keys("model", data, (*PARAMETER_NAMES, "f1", "f2"))
    missing = [name for name in PARAMETER_NAMES if data.get(name) is None]
    if missing:
        raise ConfigError(f"Missing required fields in model: {', '.join(missing)}")
    values = {name: _number("model", name, data[name]) for name in PARAMETER_NAMES}
    return Parameters(
        **values,
        f1=_parse_influence("model.f1", data.get("f1", {})),
        f2=_parse_influence("model.f2", data.get("f2", {})),
    )


def _parse_schedule(data: Any) -> tuple[ScheduleEntry, ...]:
    if not isinstance(data, list):
        raise ConfigError("schedule must be a list of {t, overrides} entries")
    entries = []
    for index, item in enumerate(data):
        block = f"schedule[{index}]"
        item = _validate_keys(block, item, ("t", "overrides"))
        if "t" not in item:
            raise ConfigError(f"Missing required fields in {block}: t")
        overrides = _validate_keys(f"{block}.overrides", item.get("overrides", {}), PARAMETER_NAMES)
        entries.append(
            ScheduleEntry(
                t=_number(block, "t", item["t"]),
                overrides={k: _number(block, k, v) for k, v in overrides.items()},
            )
        )
    return tuple(entries)


def _parse_state(data: Any) -> State:
    data = _validate_keys("initial_state", data, ("x", "y"))
    return State(
        _number("initial_state", "x", data.get("x", 1.0)),
        _number("initial_state", "y", data.get("y", 0.0)),
    )


def _parse_integrator(data: Any) -> IntegratorConfig:
    defaults = IntegratorConfig()
    keys = ("method", "step", "abs_tol", "rel_tol", "t_end", "sample_interval")
    data = _validate_keys("integrator", data, keys)
    values: dict[str, Any] = {"method": str(data.get("method", defaults.method))}
    for key in keys[1:]:
        values[key] = _number("integrator", key, data.get(key, getattr(defaults, key)))
    return IntegratorConfig(**values)


def _parse_grid(data: Any) -> GridSettings:
    defaults = GridSettings()
    keys = ("x_range", "y_range", "nx", "ny", "tol", "t_max", "match_radius")
    data = _validate_keys("grid", data, keys)
    spec = GridSpec(
        x_range=_range("grid", "x_range", data.get("x_range", defaults.grid.x_range)),
        y_range=_range("grid", "y_range", data.get("y_range", defaults.grid.y_range)),
        nx=_integer("grid", "nx", data.get("nx", defaults.grid.nx)),
        ny=_integer("grid", "ny", data.get("ny", defaults.grid.ny)),
    )
    settings = GridSettings(
        grid=spec,
        tol=_number("grid", "tol", data.get("tol", defaults.tol)),
        t_max=_number("grid", "t_max", data.get("t_max", defaults.t_max)),
        match_radius=_number("grid", "match_radius", data.get("match_radius", defaults.match_radius)),
    )
    if min(settings.tol, settings.t_max, settings.match_radius) <= 0:
        raise ConfigError("grid.tol, grid.t_max and grid.match_radius must be positive")
    return settings


def _parse_scan(data: Any) -> ScanSettings:
    defaults = ScanSettings()
    data = _validate_keys("scan", data, ("param", "lo", "hi", "n"))
    settings = ScanSettings(
        param=str(data.get("param", defaults.param)),
        lo=_number("scan", "lo", data.get("lo", defaults.lo)),
        hi=_number("scan", "hi", data.get("hi", defaults.hi)),
        n=_integer("scan", "n", data.get("n", defaults.n)),
    )
    if settings.param not in PARAMETER_NAMES:
        raise ConfigError(
            f"Invalid scan.param: {settings.param}. Must be one of {', '.join(PARAMETER_NAMES)}"
        )
    if not settings.lo < settings.hi or settings.n < 2:
        raise ConfigError("scan needs lo < hi and n >= 2")
    return settings


def _parse_separatrix(data: Any) -> SeparatrixSettings:
    data = _validate_keys("separatrix", data, ("arc_length",))
    arc_length = _number("separatrix", "arc_length", data.get("arc_length", 5.0))
    if arc_length <= 0:
        raise ConfigError(f"separatrix.arc_length must be positive, got {arc_length}")
    return SeparatrixSettings(arc_length=arc_length)


def _parse_validate(data: Any) -> ValidateSettings:
    defaults = ValidateSettings()
    keys = ("influence", "grid_half_width", "grid_points", "tol")
    data = _validate_keys("validate", data, keys)
    settings = ValidateSettings(
        influence=_parse_influence("validate.influence", data.get("influence", {})),
        grid_half_width=_number("validate", "grid_half_width", data.get("grid_half_width", defaults.grid_half_width)),
        grid_points=_integer("validate", "grid_points", data.get("grid_points", defaults.grid_points)),
        tol=_number("validate", "tol", data.get("tol", defaults.tol)),
    )
    if settings.grid_half_width <= 0 or settings.tol <= 0 or settings.grid_points < 3:
        raise ConfigError("validate needs positive grid_half_width and tol, and grid_points >= 3")
    return settings


def _parse_discrete(data: Any) -> DiscreteSettings:
    defaults = DiscreteSettings()
    keys = ("r1", "r2", "a", "b", "impact_hw", "impact_wh", "gain_hw", "gain_wh", "W0", "H0", "steps")
    data = _validate_keys("discrete", data, keys)
    base = defaults.params
    params = DiscreteParams(
        **{k: _number("discrete", k, data.get(k, getattr(base, k))) for k in ("r1", "r2", "a", "b")},
        impact_hw=_parse_influence("discrete.impact_hw", data.get("impact_hw", {})),
        impact_wh=_parse_influence("discrete.impact_wh", data.get("impact_wh", {})),
        gain_hw=_number("discrete", "gain_hw", data.get("gain_hw", base.gain_hw)),
        gain_wh=_number("discrete", "gain_wh", data.get("gain_wh", base.gain_wh)),
    )
    steps = _integer("discrete", "steps", data.get("steps", defaults.steps))
    if steps < 1:
        raise ConfigError(f"discrete.steps must be positive, got {steps}")
    return DiscreteSettings(
        params=params,
        w0=_number("discrete", "W0", data.get("W0", defaults.w0)),
        h0=_number("discrete", "H0", data.get("H0", defaults.h0)),
        steps=steps,
    )


def _parse_certify(data: Any) -> CertifySettings:
    data = _validate_keys("certify", data, ("samples", "seed"))
    settings = CertifySettings(
        samples=_integer("certify", "samples", data.get("samples", 10000)),
        seed=_integer("certify", "seed", data.get("seed", 0)),
    )
    if settings.samples < 1:
        raise ConfigError(f"certify.samples must be positive, got {settings.samples}")
    return settings


def _parse_output(data: Any) -> OutputSettings:
    data = _validate_keys("output", data, ("path", "format"))
    path = data.get("path")
    fmt = data.get("format")
    if fmt is not None and fmt not in OUTPUT_FORMATS:
        raise ConfigError(f"Invalid output.format: {fmt}. Must be one of {', '.join(OUTPUT_FORMATS)}")
    return OutputSettings(path=None if path is None else str(path), format=fmt)


def _merge_scenario(data: dict[str, Any]) -> dict[str, Any]:
    """Lay the document's blocks over the named preset."""
    name = data.get("scenario")
    if name is None:
        return data
    preset = get_preset(str(name))
    if preset is None:
        raise ConfigError(
            f"Unknown scenario: {name}. Available: {', '.join(preset_names())}"
        )
    return {**preset.document, **data}


def parse_config(data: Any) -> RunConfig:
    """Validate a configuration mapping.

    Args:
        data: Mapping as read from a JSON or YAML document.

    Returns:
        RunConfig with every nested invariant checked.

    Raises:
        ConfigError: If the configuration is invalid.
    """
    if data is None:
        data = {}
    data = _merge_scenario(_validate_keys("configuration", data, TOP_LEVEL_KEYS))
    try:
        model = _parse_model(data["model"]) if data.get("model") is not None else None
        workers = _integer("configuration", "workers", data.get("workers", 1))
        if workers < 1:
            raise ConfigError(f"workers must be at least 1, got {workers}")
        config = RunConfig(
            model=model,
            schedule=_parse_schedule(data.get("schedule", [])),
            initial_state=_parse_state(data.get("initial_state", {})),
            integrator=_parse_integrator(data.get("integrator", {})),
            grid=_parse_grid(data.get("grid", {})),
            scan=_parse_scan(data.get("scan", {})),
            separatrix=_parse_separatrix(data.get("separatrix", {})),
            validate=_parse_validate(data.get("validate", {})),
            discrete=_parse_discrete(data.get("discrete", {})),
            certify=_parse_certify(data.get("certify", {})),
            scenario=None if data.get("scenario") is None else str(data["scenario"]),
            workers=workers,
            output=_parse_output(data.get("output", {})),
        )
        if config.schedule:
            config.parameter_schedule()
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(str(e)) from e
    return config


def read_document(config_path: Path) -> dict[str, Any]:
    """Read a JSON or YAML configuration document without validating it.

    Raises:
        ConfigError: If the document cannot be parsed or is not a mapping.
        FileNotFoundError: If the configuration file doesn't exist.
    """
    if not config_path.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    try:
        content = config_path.read_text(encoding="utf-8")
        data = yaml.safe_load(content)
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid configuration document: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError("Configuration must be a mapping")
    return data


def load_config(config_path: Path) -> RunConfig:
    """Load and validate configuration from a JSON or YAML file.

    Args:
        config_path: Path to the configuration file.

    Returns:
        RunConfig object with validated configuration.

    Raises:
        ConfigError: If the configuration is invalid.
        FileNotFoundError: If the configuration file doesn't exist.
    """
    return parse_config(read_document(config_path))


def _dump_influence(f: Any) -> dict[str, Any]:
    return {"kind": f.kind, "saturation": f.saturation}


def dump_config(config: RunConfig) -> dict[str, Any]:
    """Return the normalized mapping; parse_config(dump_config(c)) == c."""
    data: dict[str, Any] = {}
    if config.scenario is not None:
        data["scenario"] = config.scenario
    if config.model is not None:
        p = config.model
        data["model"] = {
            **{name: getattr(p, name) for name in PARAMETER_NAMES},
            "f1": _dump_influence(p.f1),
            "f2": _dump_influence(p.f2),
        }
    data["schedule"] = [{"t": e.t, "overrides": dict(e.overrides)} for e in config.schedule]
    data["initial_state"] = {"x": config.initial_state.x, "y": config.initial_state.y}
    ic = config.integrator
    data["integrator"] = {
        "method": ic.method,
        "step": ic.step,
        "abs_tol": ic.abs_tol,
        "rel_tol": ic.rel_tol,
        "t_end": ic.t_end,
        "sample_interval": ic.sample_interval,
    }
    g = config.grid
    data["grid"] = {
        "x_range": list(g.grid.x_range),
        "y_range": list(g.grid.y_range),
        "nx": g.grid.nx,
        "ny": g.grid.ny,
        "tol": g.tol,
        "t_max": g.t_max,
        "match_radius": g.match_radius,
    }
    s = config.scan
    data["scan"] = {"param": s.param, "lo": s.lo, "hi": s.hi, "n": s.n}
    data["separatrix"] = {"arc_length": config.separatrix.arc_length}
    v = config.validate
    data["validate"] = {
        "influence": _dump_influence(v.influence),
        "grid_half_width": v.grid_half_width,
        "grid_points": v.grid_points,
        "tol": v.tol,
    }
    d = config.discrete
    data["discrete"] = {
        "r1": d.params.r1,
        "r2": d.params.r2,
        "a": d.params.a,
        "b": d.params.b,
        "impact_hw": _dump_influence(d.params.impact_hw),
        "impact_wh": _dump_influence(d.params.impact_wh),
        "gain_hw": d.params.gain_hw,
        "gain_wh": d.params.gain_wh,
        "W0": d.w0,
        "H0": d.h0,
        "steps": d.steps,
    }
    data["certify"] = {"samples": config.certify.samples, "seed": config.certify.seed}
    data["workers"] = config.workers
    data["output"] = {"path": config.output.path, "format": config.output.format}
    return data
