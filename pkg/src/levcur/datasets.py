"""Real-data ingestion for the regression benchmarks.

Datasets are not vendored; callers must point at local CSV copies.

wine
    red wine quality CSV (semicolon-separated, header row, 11 numeric
    physicochemical features + ``quality``; 1599 rows).  Loads as a
    2048 x 12 design matrix (bias column first, then the 11 features),
    zero-padded and fully row-permuted, with the quality column as b.
housing
    California housing CSV (comma-separated, header row; 8 numeric
    features + the median house value target, 20640 rows).  Loads as
    16384 randomly selected rows with a trailing bias column: A is
    16384 x 9 and b is the median house value.

Canonical sources (download manually):
  wine:    https://archive.ics.uci.edu/dataset/186/wine+quality
           (file winequality-red.csv)
  housing: the 1990 California census block-group data, e.g.
           sklearn.datasets.fetch_california_housing or the classic
           CalTech/StatLib cadata export with a header row.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .lstsq import LlspInstance
from .random_matrices import as_rng

WINE_ROWS = 2048
HOUSING_ROWS = 16384

_WINE_TARGET = "quality"
_HOUSING_TARGETS = ("median_house_value", "medhouseval", "medv", "target")


class DatasetIOError(IOError):
    """Missing dataset file, with fetch instructions."""


class DatasetFormatError(ValueError):
    """Malformed dataset row; message carries the 1-based line number."""


@dataclass(frozen=True)
class DatasetSpec:
    """Which dataset to load and from where."""

    name: str
    path: str

    def __post_init__(self):
        if self.name not in ("wine", "housing"):
            raise ValueError(f"unknown dataset {self.name!r}")


def _read_csv(path, name):
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DatasetIOError(
            f"cannot open {name} dataset at {path!r}: {exc}. "
            "Download it locally first (see levcur.datasets docstring for sources)."
        ) from exc
    with fh:
        sample = fh.read(4096)
        fh.seek(0)
        delim = ";" if sample.count(";") > sample.count(",") else ","
        reader = csv.reader(fh, delimiter=delim)
        rows = list(reader)
    if not rows:
        raise DatasetFormatError(f"{path}: empty file")
    return rows


def _parse_numeric(rows, path, columns):
    """Parse selected columns as floats; skip rows with missing values."""
    out = []
    for lineno, row in rows:
        vals = []
        ok = True
        for c in columns:
            cell = row[c].strip()
            if not cell:
                ok = False
                break
            try:
                vals.append(float(cell))
            except ValueError:
                raise DatasetFormatError(
                    f"{path}: line {lineno}: cannot parse {row[c]!r} as a number"
                ) from None
        if ok:
            out.append(vals)
    return np.asarray(out, dtype=np.float64)


def _load_wine(path, rng):
    rows = _read_csv(path, "wine")
    header = [h.strip().strip('"').lower().replace(" ", "_") for h in rows[0]]
    if _WINE_TARGET not in header:
        raise DatasetFormatError(
            f"{path}: expected a '{_WINE_TARGET}' column, got {header}"
        )
    target_col = header.index(_WINE_TARGET)
    feature_cols = [c for c in range(len(header)) if c != target_col]
    if len(feature_cols) != 11:
        raise DatasetFormatError(
            f"{path}: expected 11 feature columns, got {len(feature_cols)}"
        )
    body = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise DatasetFormatError(
                f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}"
            )
        body.append((lineno, row))
    data = _parse_numeric(body, path, feature_cols + [target_col])
    n_data = data.shape[0]
    if n_data > WINE_ROWS:
        raise DatasetFormatError(
            f"{path}: {n_data} rows exceed the {WINE_ROWS}-row design"
        )
    A = np.zeros((WINE_ROWS, 12))
    b = np.zeros(WINE_ROWS)
    A[:n_data, 0] = 1.0
    A[:n_data, 1:] = data[:, :-1]
    b[:n_data] = data[:, -1]
    perm = as_rng(rng).permutation(WINE_ROWS)
    return LlspInstance(A=A[perm], b=b[perm])


def _load_housing(path, rng):
    rows = _read_csv(path, "housing")
    header = [h.strip().strip('"').lower().replace(" ", "_") for h in rows[0]]
    target_col = next(
        (header.index(t) for t in _HOUSING_TARGETS if t in header), None
    )
    if target_col is None:
        raise DatasetFormatError(
            f"{path}: no target column among {_HOUSING_TARGETS}, got {header}"
        )
    body = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise DatasetFormatError(
                f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}"
            )
        body.append((lineno, row))
    # Keep the numeric non-target columns (drops e.g. ocean_proximity).
    numeric_cols = []
    for c in range(len(header)):
        if c == target_col:
            continue
        probe = next((r[c] for _, r in body if r[c].strip()), "")
        try:
            float(probe)
            numeric_cols.append(c)
        except ValueError:
            continue
    if len(numeric_cols) != 8:
        raise DatasetFormatError(
            f"{path}: expected 8 numeric feature columns, got {len(numeric_cols)}"
        )
    data = _parse_numeric(body, path, numeric_cols + [target_col])
    if data.shape[0] < HOUSING_ROWS:
        raise DatasetFormatError(
            f"{path}: need at least {HOUSING_ROWS} complete rows, got {data.shape[0]}"
        )
    pick = as_rng(rng).choice(data.shape[0], size=HOUSING_ROWS, replace=False)
    sel = data[pick]
    A = np.hstack([sel[:, :-1], np.ones((HOUSING_ROWS, 1))])
    return LlspInstance(A=A, b=sel[:, -1])


def load_dataset(spec, rng):
    """Load a dataset per its spec; see the module docstring for schemas."""
    if spec.name == "wine":
        return _load_wine(spec.path, rng)
    return _load_housing(spec.path, rng)
