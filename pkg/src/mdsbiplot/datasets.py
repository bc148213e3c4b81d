"""CSV ingestion and the bundled demo dataset."""

import csv
from dataclasses import dataclass
from importlib import resources

import numpy as np


@dataclass(frozen=True)
class Dataset:
    """A parsed numeric table with unique row ids and column names."""

    ids: tuple
    names: tuple
    X: np.ndarray
    scaling: str = "none"


def ingest_csv(path, has_header=True, id_column=None):
    """Parse a rectangular numeric CSV into a Dataset.

    Row order is preserved. Error messages cite 1-based file coordinates
    (the header row counts). When ``id_column`` names a column its cells
    become the row ids and it is excluded from the numeric block; without
    one, ids are 1-based row numbers.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if not rows:
        raise ValueError(f"{path}: file is empty")

    if has_header:
        header = [c.strip() for c in rows[0]]
        data_rows = rows[1:]
        first_data_line = 2
    else:
        header = [f"x{j + 1}" for j in range(len(rows[0]))]
        data_rows = rows
        first_data_line = 1
    if not data_rows:
        raise ValueError(f"{path}: no data rows")

    width = len(header)
    id_index = None
    if id_column is not None:
        if id_column not in header:
            raise ValueError(f"{path}: id column '{id_column}' not found in header {header}")
        id_index = header.index(id_column)

    ids = []
    values = []
    for i, row in enumerate(data_rows):
        line = first_data_line + i
        if len(row) != width:
            raise ValueError(
                f"{path}: ragged row at line {line} (expected {width} cells, got {len(row)})"
            )
        parsed = []
        for j, cell in enumerate(row):
            if j == id_index:
                ids.append(cell.strip())
                continue
            try:
                parsed.append(float(cell))
            except ValueError:
                raise ValueError(
                    f"{path}: non-numeric cell '{cell.strip()}' at row {line}, column {j + 1}"
                ) from None
        values.append(parsed)

    if id_index is None:
        ids = [str(i + 1) for i in range(len(values))]
    if len(set(ids)) != len(ids):
        seen = set()
        dup = next(x for x in ids if x in seen or seen.add(x))
        raise ValueError(f"{path}: duplicate id '{dup}'")

    names = tuple(h for j, h in enumerate(header) if j != id_index)
    if len(set(names)) != len(names):
        seen = set()
        dup = next(x for x in names if x in seen or seen.add(x))
        raise ValueError(f"{path}: duplicate column name '{dup}'")
    X = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{path}: non-finite value in table")
    return Dataset(ids=tuple(ids), names=names, X=X)


def sample_path():
    """Filesystem path of the bundled synthetic 15x8 university table."""
    return resources.files("mdsbiplot").joinpath("data/sample_universities.csv")


def load_sample():
    """The bundled synthetic dataset (15 schools, 8 enrollment/admissions attributes)."""
    return ingest_csv(str(sample_path()), has_header=True, id_column="id")
