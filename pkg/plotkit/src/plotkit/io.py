"""Reading the experiment CSV files the figure scripts consume.

The files are plain CSV with one optional leading ``# config_hash=...``
comment line and a header row.  Readers validate against the documented
headers and never transform values beyond float parsing: the statistics in
the files are the single source of truth and are rendered as emitted.
"""

import csv
from pathlib import Path

__all__ = ["SchemaError", "read_table", "require_columns", "column_floats"]


class SchemaError(ValueError):
    """An input file does not match the documented schema."""


def read_table(path) -> dict:
    """Parse a CSV file into a column mapping ``{name: [str, ...]}``.

    Leading ``#`` comment lines are skipped.  Raises SchemaError when the
    file has no header or no data rows.
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as handle:
        rows = [row for row in csv.reader(handle) if row and not row[0].startswith("#")]
    if not rows:
        raise SchemaError(f"{path}: no header row")
    header, data = rows[0], rows[1:]
    if not data:
        raise SchemaError(f"{path}: no data rows")
    columns = {name: [] for name in header}
    for line_number, row in enumerate(data, start=2):
        if len(row) != len(header):
            raise SchemaError(
                f"{path}: row {line_number} has {len(row)} cells, header has {len(header)}"
            )
        for name, cell in zip(header, row):
            columns[name].append(cell)
    return columns


def require_columns(columns: dict, required, path) -> None:
    """Check that every required column exists, naming the first missing one."""
    for name in required:
        if name not in columns:
            raise SchemaError(
                f"{path}: missing column {name!r} (found: {', '.join(columns)})"
            )


def column_floats(columns: dict, name: str, path):
    """One column parsed as floats, with the offending cell named on failure."""
    out = []
    for i, cell in enumerate(columns[name]):
        try:
            out.append(float(cell))
        except ValueError as exc:
            raise SchemaError(f"{path}: column {name!r} row {i + 2}: {cell!r} is not a number") from exc
    return out
