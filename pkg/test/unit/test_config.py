"""Unit tests for config module."""

from pathlib import Path
from test.conftest import BISTABLE_ENEMIES_MODEL, write_config

import pytest

from emodyad.config import (
    ConfigError,
    RunConfig,
    dump_config,
    load_config,
    parse_config,
    read_document,
)
from emodyad.model import Parameters, State


@pytest.fixture
def default_config() -> RunConfig:
    """Configuration with nothing but defaults."""
    return parse_config({})


@pytest.fixture
def model_config() -> RunConfig:
    """Configuration holding the bistable-enemies model."""
    return parse_config({"model": BISTABLE_ENEMIES_MODEL})


@pytest.mark.unit
class TestRunConfigDefaults:
    """Tests for RunConfig default values."""

    def test_model_default(self, default_config: RunConfig) -> None:
        """Test model defaults to None."""
        assert default_config.model is None

    def test_initial_state_default(self, default_config: RunConfig) -> None:
        """Test initial_state defaults to (1, 0)."""
        assert default_config.initial_state == State(1.0, 0.0)

    def test_method_default(self, default_config: RunConfig) -> None:
        """Test the integrator defaults to adaptive RK45."""
        assert default_config.integrator.method == "adaptive-rk45"

    def test_grid_default(self, default_config: RunConfig) -> None:
        """Test the grid defaults to 101x101."""
        assert (default_config.grid.grid.nx, default_config.grid.grid.ny) == (101, 101)

    def test_workers_default(self, default_config: RunConfig) -> None:
        """Test workers defaults to 1."""
        assert default_config.workers == 1

    def test_output_default(self, default_config: RunConfig) -> None:
        """Test output goes to stdout by default."""
        assert default_config.output.path is None

    def test_require_model_missing(self, default_config: RunConfig) -> None:
        """Test require_model fails without a model."""
        with pytest.raises(ConfigError, match="No model parameters"):
            default_config.require_model()

    def test_frozen(self, default_config: RunConfig) -> None:
        """Test that RunConfig is immutable."""
        with pytest.raises(AttributeError):
            default_config.workers = 4  # type: ignore[misc]


@pytest.mark.unit
class TestParseConfig:
    """Tests for parse_config."""

    def test_model(self, model_config: RunConfig) -> None:
        """Test the model block becomes Parameters."""
        assert model_config.require_model() == Parameters(
            m1=1.0, m2=1.0, b1=-5.0, b2=-4.1, c1=-5.0, c2=-3.0
        )

    def test_integer_parameters_accepted(self) -> None:
        """Test integer values are read as floats."""
        data = {"model": {"m1": 1, "m2": 1, "b1": 0, "b2": 0, "c1": 2, "c2": 2}}
        assert parse_config(data).require_model().c1 == 2.0

    def test_missing_parameter(self) -> None:
        """Test a missing parameter is reported."""
        with pytest.raises(ConfigError, match="Missing required fields in model: c2"):
            parse_config({"model": {"m1": 1, "m2": 1, "b1": 0, "b2": 0, "c1": 2}})

    def test_unknown_top_level_key(self) -> None:
        """Test unknown top-level keys are rejected."""
        with pytest.raises(ConfigError, match="Unknown keys in configuration: colour"):
            parse_config({"colour": "red"})

    def test_unknown_nested_key(self) -> None:
        """Test unknown nested keys are rejected."""
        with pytest.raises(ConfigError, match="Unknown keys in grid: size"):
            parse_config({"grid": {"size": 3}})

    def test_string_number(self) -> None:
        """Test numbers given as strings are rejected."""
        with pytest.raises(ConfigError, match="must be a number"):
            parse_config({"initial_state": {"x": "1.0"}})

    def test_boolean_integer(self) -> None:
        """Test booleans are not integers."""
        with pytest.raises(ConfigError, match="must be an integer"):
            parse_config({"grid": {"nx": True}})

    def test_invariant_violation_wrapped(self) -> None:
        """Test parameter invariants surface as ConfigError."""
        data = {"model": {**BISTABLE_ENEMIES_MODEL, "m1": -1.0}}
        with pytest.raises(ConfigError, match="Forgetting rates"):
            parse_config(data)

    def test_invalid_influence_kind(self) -> None:
        """Test an unknown influence kind surfaces as ConfigError."""
        data = {"model": {**BISTABLE_ENEMIES_MODEL, "f1": {"kind": "relu"}}}
        with pytest.raises(ConfigError, match="Invalid influence kind"):
            parse_config(data)

    def test_invalid_scan_param(self) -> None:
        """Test an unknown scan parameter is rejected."""
        with pytest.raises(ConfigError, match="Invalid scan.param"):
            parse_config({"scan": {"param": "k"}})

    def test_invalid_output_format(self) -> None:
        """Test unknown output formats are rejected."""
        with pytest.raises(ConfigError, match="Invalid output.format"):
            parse_config({"output": {"format": "xml"}})

    def test_zero_workers(self) -> None:
        """Test workers must be at least 1."""
        with pytest.raises(ConfigError, match="workers"):
            parse_config({"workers": 0})

    def test_discrete_block(self) -> None:
        """Test the round model keeps the W0/H0 spelling."""
        config = parse_config({"discrete": {"r1": 0.9, "r2": 0.9, "a": 1.0, "b": -1.0, "W0": 2.0, "steps": 10}})
        assert (config.discrete.params.r1, config.discrete.w0, config.discrete.steps) == (0.9, 2.0, 10)

    def test_discrete_inertia_rejected(self) -> None:
        """Test |r| >= 1 is rejected."""
        with pytest.raises(ConfigError, match="Inertia"):
            parse_config({"discrete": {"r1": 1.5}})


@pytest.mark.unit
class TestSchedule:
    """Tests for the schedule block."""

    def test_cumulative_overrides(self) -> None:
        """Test each switch starts from the previous segment's parameters."""
        data = {
            "model": BISTABLE_ENEMIES_MODEL,
            "schedule": [{"t": 6.0, "overrides": {"c1": 3.0}}, {"t": 7.0, "overrides": {"b1": 1.0}}],
        }
        last = parse_config(data).parameter_schedule().switches[-1][1]
        assert (last.c1, last.b1) == (3.0, 1.0)

    def test_missing_time(self) -> None:
        """Test entries need a time."""
        with pytest.raises(ConfigError, match="Missing required fields in schedule\\[0\\]: t"):
            parse_config({"model": BISTABLE_ENEMIES_MODEL, "schedule": [{"overrides": {"c1": 1.0}}]})

    def test_unknown_override(self) -> None:
        """Test overrides must name model parameters."""
        with pytest.raises(ConfigError, match="Unknown keys in schedule\\[0\\].overrides"):
            parse_config({"model": BISTABLE_ENEMIES_MODEL, "schedule": [{"t": 1.0, "overrides": {"k": 1.0}}]})

    def test_non_increasing_times(self) -> None:
        """Test switch times must increase."""
        schedule = [{"t": 2.0, "overrides": {}}, {"t": 1.0, "overrides": {}}]
        with pytest.raises(ConfigError, match="strictly increasing"):
            parse_config({"model": BISTABLE_ENEMIES_MODEL, "schedule": schedule})

    def test_not_a_list(self) -> None:
        """Test the schedule must be a list."""
        with pytest.raises(ConfigError, match="schedule must be a list"):
            parse_config({"schedule": {"t": 1.0}})


@pytest.mark.unit
class TestScenarioMerge:
    """Tests for selecting a scenario in the configuration."""

    def test_preset_model(self) -> None:
        """Test the preset supplies the model."""
        assert parse_config({"scenario": "symmetric-separatrix"}).require_model().c1 == 2.0

    def test_document_overrides_preset(self) -> None:
        """Test the document's blocks replace the preset's."""
        config = parse_config({"scenario": "symmetric-separatrix", "initial_state": {"x": 0.5, "y": 0.5}})
        assert config.initial_state == State(0.5, 0.5)

    def test_alias(self) -> None:
        """Test the stockholm alias selects the revert preset's schedule."""
        assert len(parse_config({"scenario": "stockholm"}).schedule) == 2

    def test_unknown_scenario(self) -> None:
        """Test an unknown name lists the presets."""
        with pytest.raises(ConfigError, match="Available: .*fig3-left"):
            parse_config({"scenario": "romeo"})


@pytest.mark.unit
class TestLoadConfig:
    """Tests for loading configuration documents."""

    def test_yaml(self, tmp_path: Path) -> None:
        """Test a YAML document loads."""
        config_file = tmp_path / "config.yml"
        config_file.write_text("""
model:
  m1: 1.0
  m2: 1.0
  b1: 0.0
  b2: 0.0
  c1: 2.0
  c2: 2.0
initial_state:
  x: 0.5
  y: -0.5
""")
        assert load_config(config_file).initial_state == State(0.5, -0.5)

    def test_json(self, bistable_config_file: Path) -> None:
        """Test a JSON document loads."""
        assert load_config(bistable_config_file).require_model().b2 == -4.1

    def test_file_not_found(self, tmp_path: Path) -> None:
        """Test missing files raise FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_config(tmp_path / "nonexistent.yml")

    def test_invalid_document(self, tmp_path: Path) -> None:
        """Test unparsable documents raise ConfigError."""
        config_file = tmp_path / "config.yml"
        config_file.write_text("invalid: yaml: syntax:")
        with pytest.raises(ConfigError, match="Invalid configuration document"):
            load_config(config_file)

    def test_not_a_mapping(self, tmp_path: Path) -> None:
        """Test a list document is rejected."""
        config_file = tmp_path / "config.yml"
        config_file.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError, match="must be a mapping"):
            read_document(config_file)


@pytest.mark.unit
class TestDumpConfig:
    """Tests for dump_config."""

    def test_round_trip(self, tmp_path: Path) -> None:
        """Test a dumped configuration parses back to the same value."""
        original = load_config(write_config(tmp_path, {
            "model": BISTABLE_ENEMIES_MODEL,
            "schedule": [{"t": 2.0, "overrides": {"c2": 1.0}}],
            "grid": {"nx": 11, "ny": 7},
            "workers": 2,
        }))
        assert parse_config(dump_config(original)) == original

    def test_scenario_round_trip(self) -> None:
        """Test a scenario configuration survives the round trip."""
        original = parse_config({"scenario": "switch-revert"})
        assert parse_config(dump_config(original)) == original

    def test_defaults_written(self, default_config: RunConfig) -> None:
        """Test every block is written out."""
        assert dump_config(default_config)["integrator"]["t_end"] == default_config.integrator.t_end
