"""CSV emission for experiment tables."""

import csv
import math
from pathlib import Path

import numpy as np


def format_value(value):
    """Render one cell: floats with 9 significant digits, everything else via ``str``."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".9g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_table(table, directory):
    """Write ``table`` to ``directory/<name>.csv`` and return the path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{table.name}.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_value(v) for v in row])
    return path


def read_table(path):
    """Read a CSV written by :func:`write_table` as a list of dicts of strings."""
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def has_nan(table):
    return any(isinstance(v, (float, np.floating)) and math.isnan(v) for row in table.rows for v in row)
