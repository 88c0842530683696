import csv
import io
import logging
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)


def format_value(value) -> str:
    """
    Shortest decimal string that reads back to the same float, integers as-is.
    """
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_text_atomic(path: Path, text: str) -> Path:
    """
    Write `text` to `path` through a temporary file in the same directory and a
    rename, so readers never observe a half-written file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise

    logger.debug(f"Wrote {path}")
    return path


def write_csv(
    path: Path, header: Sequence[str], rows: Iterable[Sequence]
) -> Path:
    """Write a header row and data rows as CSV, atomically."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(value) for value in row])

    return write_text_atomic(path, buffer.getvalue())


def write_columns(path: Path, columns: dict[str, Sequence]) -> Path:
    """Write equal-length columns as CSV, column names as header."""
    header = list(columns)
    lengths = {len(columns[name]) for name in header}
    if len(lengths) > 1:
        raise ValueError(f"Columns of unequal length for {path}: {sorted(lengths)}")

    return write_csv(path, header, zip(*(columns[name] for name in header)))


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    """Read a CSV written by `write_csv`; returns header and string rows."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        rows = [row for row in reader if row]
    return header, rows


def read_columns(path: Path) -> dict[str, np.ndarray]:
    """Read a numeric CSV into float arrays keyed by column name."""
    header, rows = read_csv(path)
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {name: data[:, i].copy() for i, name in enumerate(header)}
