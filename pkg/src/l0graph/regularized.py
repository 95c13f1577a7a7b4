"""Regularized l0 graph: coordinate descent over columns of

    ||X - X alpha||_F^2 + gamma * sum_ij S_ij ||alpha^i - alpha^j||_0

where S is the K-nearest-neighbor adjacency of the data. Each column is
updated by a proximal method whose subproblem separates over entries and
is solved exactly by checking a finite candidate set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .core import (
    DataError,
    NumericalError,
    SolverConfig,
    check_codes,
    check_data,
    lipschitz_constant,
)
from .solver import l1_initialize, solve_l0

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KnnAdjacency:
    """``S[i, j] = 1`` iff x_i is one of the K nearest neighbors of x_j;
    ``S_sym = S + S.T``."""

    S: np.ndarray
    S_sym: np.ndarray
    k: int


@dataclass
class RegObjectiveTrace:
    initial: float
    values: list = field(default_factory=list)
    inner: list = field(default_factory=list)
    converged: bool = False

    @property
    def final(self):
        return self.values[-1] if self.values else self.initial

    def all_values(self):
        return np.array([self.initial, *self.values])


def build_knn_adjacency(X, K):
    """Exact Euclidean K-NN graph over the columns of ``X``.

    Ties at equal distance go to the smaller index. Duplicate points are
    valid neighbors at distance zero.
    """
    X = check_data(X)
    n = X.shape[1]
    if not 1 <= K < n:
        raise ValueError(f"need 1 <= K < n, got K={K}, n={n}")
    D = cdist(X.T, X.T, metric="sqeuclidean")
    np.fill_diagonal(D, np.inf)
    S = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        nbrs = np.argsort(D[:, j], kind="stable")[:K]
        S[nbrs, j] = 1
    return KnnAdjacency(S=S, S_sym=S + S.T, k=K)


def _pair_differences(alpha, S):
    rows, cols = np.nonzero(S)
    if rows.size == 0:
        return rows, cols, np.zeros(0)
    diff = np.count_nonzero(alpha[:, rows] != alpha[:, cols], axis=0)
    return rows, cols, diff


def reg_objective(X, alpha, gamma, S):
    """Full regularized objective with the (asymmetric) adjacency ``S``."""
    X = check_data(X)
    alpha = check_codes(X, alpha)
    S = np.asarray(S)
    if S.shape != alpha.shape:
        raise DataError(f"adjacency shape {S.shape} does not match codes {alpha.shape}")
    R = X - X @ alpha
    rows, cols, diff = _pair_differences(alpha, S)
    return float(np.sum(R * R)) + gamma * float(np.sum(S[rows, cols] * diff))


def column_objective(X, alpha, i, gamma, S_sym):
    """F(alpha^i) = ||x_i - X alpha^i||^2 + gamma sum_j S_sym[i, j] ||alpha^i - alpha^j||_0."""
    r = X[:, i] - X @ alpha[:, i]
    J = np.flatnonzero(S_sym[i])
    J = J[J != i]
    reg = 0.0
    if J.size:
        diff = np.count_nonzero(alpha[:, [i]] != alpha[:, J], axis=0)
        reg = float(np.sum(S_sym[i, J] * diff))
    return float(r @ r) + gamma * reg


def column_gradient_step(X, alpha, i, tau, s, gram=None):
    G = X.T @ X if gram is None else gram
    a = alpha[:, i]
    return a - (2.0 / (tau * s)) * (G @ a - G[:, i])


def prox_candidate_search(alpha_tilde_i, alpha, i, gamma, tau, s, S_sym):
    """Exact solution of the per-column proximal subproblem.

    Entry k (k != i) minimizes

        F_k(v) = (tau s / 2)(v - alpha_tilde_i[k])^2 + gamma sum_j S_sym[i, j] 1{v != alpha[k, j]}

    whose minimum is attained either at ``alpha_tilde_i[k]`` or at one of the
    neighbor values ``alpha[k, j]`` with ``S_sym[i, j] != 0``. Every such
    neighbor is a candidate, so a row may have up to 2K of them. Ties prefer
    ``alpha_tilde_i[k]``, then the smallest |v|, then the smallest j.
    """
    a = np.asarray(alpha_tilde_i, dtype=np.float64)
    out = a.copy()
    J = np.flatnonzero(S_sym[i])
    J = J[J != i]
    if J.size == 0 or gamma == 0:
        out[i] = 0.0
        return out
    w = np.asarray(S_sym[i, J], dtype=np.float64)
    W = w.sum()
    A = alpha[:, J]  # (n, m) neighbor values
    half = 0.5 * tau * s

    # weight of neighbors agreeing with each candidate
    agree_tilde = (A == a[:, None]) @ w
    F0 = gamma * (W - agree_tilde)
    agree_nbr = (A[:, :, None] == A[:, None, :]).astype(np.float64) @ w
    Fn = half * (A - a[:, None]) ** 2 + gamma * (W - agree_nbr)

    Fmin_nbr = Fn.min(axis=1)
    use_nbr = Fmin_nbr < F0
    if np.any(use_nbr):
        tie = Fn == Fmin_nbr[:, None]
        absA = np.where(tie, np.abs(A), np.inf)
        tie &= absA == absA.min(axis=1, keepdims=True)
        pick = np.argmax(tie, axis=1)  # first j in ascending order
        rows = np.flatnonzero(use_nbr)
        out[rows] = A[rows, pick[rows]]
    out[i] = 0.0
    return out


def shared_support_count(alpha, S):
    """Sum over KNN pairs (S_ij = 1) of |supp(alpha^i) & supp(alpha^j)|."""
    nz = np.asarray(alpha) != 0
    rows, cols = np.nonzero(np.asarray(S))
    return int(np.sum(nz[:, rows] & nz[:, cols]))


def solve_regularized_l0(X, cfg=None, alpha0=None, s=None, knn=None):
    """Coordinate descent for the regularized l0 graph.

    Columns are visited in order 0..n-1 per sweep. For each column an inner
    proximal loop runs until its objective F changes by less than
    ``cfg.tol`` or ``cfg.reg_inner_iter`` steps; sweeps stop on an objective
    change below ``cfg.tol`` or after ``cfg.reg_outer_iter`` sweeps.

    ``alpha0`` defaults to the output of the l1-initialized l0 solver.
    """
    cfg = cfg or SolverConfig()
    X = check_data(X)
    n = X.shape[1]
    G = X.T @ X
    if s is None:
        s = lipschitz_constant(X)
    if s <= 0:
        raise DataError("data matrix is identically zero")
    if knn is None:
        knn = build_knn_adjacency(X, cfg.knn_k)
    if alpha0 is None:
        init = l1_initialize(X, cfg.lambda_l1, cfg.l1_max_iter, cfg.l1_tol, cfg.tau, s=s)
        alpha0, _ = solve_l0(X, cfg, init, s=s)
    alpha = check_codes(X, alpha0).copy()
    np.fill_diagonal(alpha, 0.0)

    prev = reg_objective(X, alpha, cfg.gamma, knn.S)
    trace = RegObjectiveTrace(initial=prev)
    for sweep in range(cfg.reg_outer_iter):
        sweep_inner = []
        for i in range(n):
            F_prev = column_objective(X, alpha, i, cfg.gamma, knn.S_sym)
            col_trace = [F_prev]
            for t in range(cfg.reg_inner_iter):
                a_tilde = column_gradient_step(X, alpha, i, cfg.tau, s, gram=G)
                v = prox_candidate_search(a_tilde, alpha, i, cfg.gamma, cfg.tau, s, knn.S_sym)
                if not np.all(np.isfinite(v)):
                    raise NumericalError(f"non-finite iterate at sweep {sweep}, column {i}, step {t + 1}")
                alpha[:, i] = v
                F = column_objective(X, alpha, i, cfg.gamma, knn.S_sym)
                col_trace.append(F)
                if abs(F - F_prev) < cfg.tol:
                    break
                F_prev = F
            sweep_inner.append(col_trace)
        value = reg_objective(X, alpha, cfg.gamma, knn.S)
        trace.values.append(value)
        trace.inner.append(sweep_inner)
        if abs(value - prev) < cfg.tol:
            trace.converged = True
            break
        prev = value
    logger.debug("solve_regularized_l0: %d sweeps, objective %.6g", len(trace.values), trace.final)
    return alpha, trace
