"""Pytest configuration and shared fixtures."""

import json
from pathlib import Path
from typing import Any
from unittest.mock import patch

import pytest

from emodyad.cli import main
from emodyad.model import Parameters


BISTABLE_ENEMIES_MODEL = {
    "m1": 1.0, "m2": 1.0, "b1": -5.0, "b2": -4.1, "c1": -5.0, "c2": -3.0,
    "f1": {"kind": "atan", "saturation": 1.0},
    "f2": {"kind": "atan", "saturation": 1.0},
}


def pytest_configure(config: pytest.Config) -> None:
    """Register custom pytest markers."""
    config.addinivalue_line("markers", "unit: unit tests")
    config.addinivalue_line("markers", "integration: integration tests")
    config.addinivalue_line("markers", "e2e: end-to-end tests")


def run_main_with_args(args: list[str]) -> int:
    """Run main() with given args and return exit code."""
    with patch("sys.argv", ["emodyad", *args]):
        try:
            main()
            return 0
        except SystemExit as e:
            return int(e.code) if e.code is not None else 0


def write_config(tmp_path: Path, data: dict[str, Any], name: str = "config.json") -> Path:
    """Write a JSON configuration file and return its path."""
    config_file = tmp_path / name
    config_file.write_text(json.dumps(data))
    return config_file


@pytest.fixture
def symmetric_friends() -> Parameters:
    """Identical neutral friends with strong influence: three steady states."""
    return Parameters(m1=1.0, m2=1.0, b1=0.0, b2=0.0, c1=2.0, c2=2.0)


@pytest.fixture
def opposite_couple() -> Parameters:
    """One friendly and one hostile partner with equal forgetting rates."""
    return Parameters(m1=1.0, m2=1.0, b1=0.0, b2=0.0, c1=1.0, c2=-1.0)


@pytest.fixture
def weak_friends() -> Parameters:
    """Friends whose forgetting dominates their influence."""
    return Parameters(m1=2.0, m2=2.0, b1=0.0, b2=0.0, c1=1.0, c2=1.0)


@pytest.fixture
def bistable_enemies() -> Parameters:
    """Pessimistic enemies with two stable states and a saddle."""
    return Parameters(m1=1.0, m2=1.0, b1=-5.0, b2=-4.1, c1=-5.0, c2=-3.0)


@pytest.fixture
def fold_enemies() -> Parameters:
    """Enemies with unequal forgetting rates near a saddle-node fold in b2."""
    return Parameters(m1=1.0, m2=2.0, b1=-4.0, b2=-2.0, c1=-5.0, c2=-4.0)


@pytest.fixture
def bistable_config_file(tmp_path: Path) -> Path:
    """Config file holding the bistable-enemies model."""
    return write_config(tmp_path, {"model": BISTABLE_ENEMIES_MODEL})
