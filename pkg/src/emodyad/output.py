"""Writing data files and rendering reports."""

import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "EMODYAD_OUTPUT_DIR"


def resolve_output_path(path: str | Path) -> Path:
    """Place relative paths under $EMODYAD_OUTPUT_DIR when it is set."""
    path = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        return Path(base) / path
    return path


def atomic_write_text(path: Path, content: str) -> None:
    """Write a file via a temporary sibling and os.replace.

    Readers see either the old file or the complete new one.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(content)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.info("Wrote %s", path)


def to_json(data: Any) -> str:
    """Render a report as indented JSON."""
    return json.dumps(data, indent=2) + "\n"


def _number_or_text(value: str) -> Any:
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    return value


def csv_to_json(text: str) -> str:
    """Turn a CSV table into a JSON array of row objects."""
    rows = [
        {key: _number_or_text(value) for key, value in row.items()}
        for row in csv.DictReader(io.StringIO(text))
    ]
    return to_json(rows)
