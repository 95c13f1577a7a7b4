"""CSV ingestion and export of datasets, code matrices and graph edge lists."""

from __future__ import annotations

import csv

import numpy as np

from .core import DataError


def _is_float(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_csv(path, label_column=None):
    """Read a rows-as-samples CSV.

    A first line containing any non-numeric feature cell is taken as a header.
    ``label_column`` is a column index (negative allowed) or, when a header
    is present, a column name. Labels may be arbitrary strings and are
    remapped to contiguous ids in sorted order.

    Returns
    -------
    X : ndarray, shape (d, n)
        Features with samples as columns.
    labels : ndarray of int, shape (n,), or None
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [(lineno, row) for lineno, row in enumerate(csv.reader(fh), start=1) if any(c.strip() for c in row)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path}: empty file")

    header = None
    first = rows[0][1]
    width = len(first)
    label_idx = None
    if label_column is not None:
        if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
            if not all(_is_float(c) for c in first):
                header = [c.strip() for c in first]
                if label_column not in header:
                    raise DataError(f"{path}: no column named {label_column!r}")
                label_idx = header.index(label_column)
            else:
                raise DataError(f"{path}: label column {label_column!r} given by name but file has no header")
        else:
            label_idx = int(label_column)
            if not -width <= label_idx < width:
                raise DataError(f"{path}: label column {label_idx} out of range for {width} columns")
            label_idx %= width
    if header is None:
        feats = [c for j, c in enumerate(first) if j != label_idx]
        if not all(_is_float(c) for c in feats):
            header = [c.strip() for c in first]
    if header is not None:
        rows = rows[1:]
        if not rows:
            raise DataError(f"{path}: header but no data rows")

    values, labels = [], []
    for lineno, row in rows:
        if len(row) != width:
            raise DataError(f"{path}:{lineno}: expected {width} fields, got {len(row)}")
        feat = []
        for j, cell in enumerate(row):
            if j == label_idx:
                labels.append(cell.strip())
                continue
            try:
                feat.append(float(cell))
            except ValueError:
                raise DataError(f"{path}:{lineno}: non-numeric value {cell!r} in column {j}") from None
        values.append(feat)
    X = np.array(values, dtype=np.float64).T
    if X.shape[0] == 0:
        raise DataError(f"{path}: no feature columns")
    if not np.all(np.isfinite(X)):
        raise DataError(f"{path}: non-finite feature values")
    y = None
    if label_idx is not None:
        keys = labels
        if all(_is_float(v) for v in labels):
            keys = [float(v) for v in labels]
        _, y = np.unique(np.array(keys), return_inverse=True)
        y = y.astype(np.int64)
    return X, y


def write_dataset_csv(path, X, labels=None):
    """Write ``X`` (d x n) as rows-as-samples, with labels as the last column."""
    X = np.asarray(X)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([f"f{j}" for j in range(X.shape[0])] + (["label"] if labels is not None else []))
        for i in range(X.shape[1]):
            row = [format(v, ".17g") for v in X[:, i]]
            if labels is not None:
                row.append(str(int(labels[i])))
            w.writerow(row)


def write_edge_list(path, W):
    """Write the upper triangle of ``W`` as ``i,j,weight`` lines, zero weights skipped."""
    W = np.asarray(W)
    rows, cols = np.nonzero(np.triu(W, k=1))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "weight"])
        for i, j in zip(rows.tolist(), cols.tolist()):
            w.writerow([i, j, format(W[i, j], ".17g")])


def read_edge_list(path, n):
    W = np.zeros((n, n))
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        for i, j, weight in reader:
            W[int(i), int(j)] = W[int(j), int(i)] = float(weight)
    return W


def write_matrix_csv(path, M):
    np.savetxt(path, np.asarray(M), delimiter=",", fmt="%.17g")


def read_matrix_csv(path):
    return np.loadtxt(path, delimiter=",", ndmin=2)
