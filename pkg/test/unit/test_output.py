"""Unit tests for output module."""

import json
from pathlib import Path

import pytest

from emodyad.output import (
    OUTPUT_DIR_ENV,
    atomic_write_text,
    csv_to_json,
    resolve_output_path,
    to_json,
)


@pytest.mark.unit
class TestResolveOutputPath:
    """Tests for resolve_output_path."""

    def test_relative_without_env(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test relative paths are kept when the variable is unset."""
        monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
        assert resolve_output_path("out.csv") == Path("out.csv")

    def test_relative_with_env(self, monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
        """Test relative paths go under the output directory."""
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
        assert resolve_output_path("runs/out.csv") == tmp_path / "runs" / "out.csv"

    def test_absolute_ignores_env(self, monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
        """Test absolute paths are never moved."""
        monkeypatch.setenv(OUTPUT_DIR_ENV, "/elsewhere")
        assert resolve_output_path(tmp_path / "out.csv") == tmp_path / "out.csv"


@pytest.mark.unit
class TestAtomicWriteText:
    """Tests for atomic_write_text."""

    def test_writes_content(self, tmp_path: Path) -> None:
        """Test the file holds the content."""
        target = tmp_path / "out.csv"
        atomic_write_text(target, "t,x,y\n")
        assert target.read_text() == "t,x,y\n"

    def test_creates_parents(self, tmp_path: Path) -> None:
        """Test missing directories are created."""
        target = tmp_path / "a" / "b" / "out.csv"
        atomic_write_text(target, "x\n")
        assert target.exists()

    def test_replaces_existing(self, tmp_path: Path) -> None:
        """Test an existing file is replaced."""
        target = tmp_path / "out.csv"
        target.write_text("old")
        atomic_write_text(target, "new")
        assert target.read_text() == "new"

    def test_no_temporary_left(self, tmp_path: Path) -> None:
        """Test only the target remains after writing."""
        atomic_write_text(tmp_path / "out.csv", "x\n")
        assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]


@pytest.mark.unit
class TestJsonRendering:
    """Tests for to_json and csv_to_json."""

    def test_to_json_newline(self) -> None:
        """Test rendered JSON ends with a newline."""
        assert to_json({"a": 1}).endswith("}\n")

    def test_csv_to_json_types(self) -> None:
        """Test numeric cells become numbers and others stay text."""
        rows = json.loads(csv_to_json("param_value,n_states,classes\n0.5,3,stable-node;saddle\n"))
        assert rows == [{"param_value": 0.5, "n_states": 3, "classes": "stable-node;saddle"}]

    def test_csv_to_json_empty_table(self) -> None:
        """Test a header-only table becomes an empty array."""
        assert json.loads(csv_to_json("t,x,y\n")) == []
