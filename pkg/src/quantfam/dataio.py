"""CSV ingestion and sample output."""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .distributions import SamplePayload
from .errors import QuantFamError


class CsvError(QuantFamError, ValueError):
    """A CSV file is missing, malformed or has a non-numeric value."""


class ColumnData(NamedTuple):
    values: np.ndarray
    skipped: list[int]


def read_column(path: str | Path, column: str, skip_bad_rows: bool = False) -> ColumnData:
    """Read one numeric column from a CSV file with a header row.

    Parameters
    ----------
    path, column
        File and header name.
    skip_bad_rows : bool
        Drop rows whose value does not parse as a finite float and report
        their line numbers, instead of failing on the first one.

    Raises
    ------
    CsvError
        Naming the file and line of the first problem.
    """
    path = Path(path)
    try:
        fh = path.open(newline="")
    except OSError as exc:
        raise CsvError(f"{path}: cannot open ({exc.strerror})") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CsvError(f"{path}: empty file, a header row is required")
        header = [h.strip() for h in header]
        if column not in header:
            raise CsvError(f"{path}:1: no column {column!r} (have {', '.join(header)})")
        idx = header.index(column)
        values, skipped = [], []
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            cell = row[idx].strip() if idx < len(row) else ""
            try:
                v = float(cell)
                if not np.isfinite(v):
                    raise ValueError
            except ValueError:
                if skip_bad_rows:
                    skipped.append(line)
                    continue
                raise CsvError(f"{path}:{line}: column {column!r} has non-numeric value {cell!r}") from None
            values.append(v)
    return ColumnData(np.array(values, dtype=float), skipped)


def write_sample(payload: SamplePayload, path: str | Path, column: str = "x") -> Path:
    """Write one value per row (17 significant digits) and a JSON sidecar.

    The sidecar ``<path>.json`` records the seed, size and generating spec.
    """
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow((column,))
        for v in payload.x:
            w.writerow((format(float(v), ".17g"),))
    sidecar = path.with_name(path.name + ".json")
    sidecar.write_text(json.dumps(payload.metadata(), indent=2) + "\n")
    return sidecar
