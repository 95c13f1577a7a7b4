"""Clustering accuracy under the best label matching, and normalized mutual
information."""

import numpy as np
from scipy.optimize import linear_sum_assignment


def _check_pair(predicted, truth):
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape or predicted.ndim != 1:
        raise ValueError(f"label vectors must be 1-D of equal length, got {predicted.shape} and {truth.shape}")
    if predicted.size == 0:
        raise ValueError("empty label vectors")
    return predicted, truth


def contingency(predicted, truth):
    """Counts table with rows indexed by predicted ids and columns by truth ids."""
    predicted, truth = _check_pair(predicted, truth)
    _, p = np.unique(predicted, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    C = np.zeros((p.max() + 1, t.max() + 1), dtype=np.int64)
    np.add.at(C, (p, t), 1)
    return C


def hungarian_assignment(cost):
    """Minimum-cost perfect matching on ``cost`` zero-padded to square.

    Returns a list of (row, col) pairs covering every index of the padded
    matrix.
    """
    cost = np.asarray(cost, dtype=np.float64)
    r, c = cost.shape
    m = max(r, c)
    padded = np.zeros((m, m))
    padded[:r, :c] = cost
    rows, cols = linear_sum_assignment(padded)
    return list(zip(rows.tolist(), cols.tolist()))


def accuracy(predicted, truth):
    C = contingency(predicted, truth)
    matched = sum(C[i, j] for i, j in hungarian_assignment(-C) if i < C.shape[0] and j < C.shape[1])
    return matched / C.sum()


def _entropy(p):
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def nmi(predicted, truth):
    """MI / max(H(predicted), H(truth)), base-2 logs.

    Both entropies zero gives 1.0; exactly one zero gives 0.0.
    """
    C = contingency(predicted, truth)
    P = C / C.sum()
    pp = P.sum(axis=1)
    pt = P.sum(axis=0)
    hp, ht = _entropy(pp), _entropy(pt)
    if hp == 0 and ht == 0:
        return 1.0
    if hp == 0 or ht == 0:
        return 0.0
    if C.shape[0] == C.shape[1] == np.count_nonzero(C):
        # one-to-one labeling; skip the log round-off
        return 1.0
    nz = P > 0
    mi = float(np.sum(P[nz] * np.log2(P[nz] / np.outer(pp, pt)[nz])))
    return min(max(mi / max(hp, ht), 0.0), 1.0)
