"""E2E test configuration."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from test.conftest import BISTABLE_ENEMIES_MODEL


def run_cli(*args: str, cwd: Path | None = None) -> subprocess.CompletedProcess[str]:
    """Run the emodyad CLI with the given arguments."""
    return subprocess.run(
        [sys.executable, "-m", "emodyad", *args],
        capture_output=True,
        text=True,
        check=False,
        cwd=cwd,
    )


@pytest.fixture
def missing_config_result(tmp_path: Path) -> subprocess.CompletedProcess[str]:
    """Run CLI with missing config file."""
    return run_cli("equilibria", "--config", str(tmp_path / "nonexistent.json"))


@pytest.fixture
def invalid_document_result(tmp_path: Path) -> subprocess.CompletedProcess[str]:
    """Run CLI with an unparsable config document."""
    config_file = tmp_path / "config.json"
    config_file.write_text("invalid: yaml: :")
    return run_cli("equilibria", "--config", str(config_file))


@pytest.fixture
def equilibria_result(tmp_path: Path) -> subprocess.CompletedProcess[str]:
    """Run equilibria on the bistable-enemies model."""
    config_file = tmp_path / "config.json"
    config_file.write_text(json.dumps({"model": BISTABLE_ENEMIES_MODEL}))
    return run_cli("equilibria", "--config", str(config_file))


@pytest.fixture
def stockholm_result(tmp_path: Path) -> tuple[subprocess.CompletedProcess[str], Path]:
    """Run the stockholm scenario into a file."""
    out = tmp_path / "run.csv"
    return run_cli("scenario", "--name", "stockholm", "--out", str(out)), out


@pytest.fixture
def validate_result() -> subprocess.CompletedProcess[str]:
    """Run validate on the default arctangent."""
    return run_cli("validate", "--kind", "atan", "--saturation", "1")


@pytest.fixture
def help_result() -> subprocess.CompletedProcess[str]:
    """Run CLI with --help flag."""
    return run_cli("--help")
