"""Shared types and primitives: column normalization, the l0 objective and
the Lipschitz constant of the squared self-representation loss."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


class DataError(ValueError):
    """Malformed input data (shape, finiteness, file contents)."""


class NumericalError(ArithmeticError):
    """A numerical routine produced non-finite values or failed to converge."""


class PowerIterationError(NumericalError):
    def __init__(self, message, last_estimate, last_vector):
        super().__init__(message)
        self.last_estimate = last_estimate
        self.last_vector = last_vector


@dataclass(frozen=True)
class SolverConfig:
    """Parameters shared by the l1 initializer, the l0 solver and the
    regularized variant.

    Defaults are the values used in the experiments: lambda=0.5,
    lambda_l1=0.1, max_iter=100, tol=1e-6, gamma=0.1 on a 5-NN graph.
    """

    lam: float = 0.5
    lambda_l1: float = 0.1
    tau: float = 1.1
    max_iter: int = 100
    tol: float = 1e-6
    gamma: float = 0.1
    knn_k: int = 5
    seed: int = 0
    l1_max_iter: int = 300
    l1_tol: float = 1e-6
    reg_outer_iter: int = 10
    reg_inner_iter: int = 50

    def __post_init__(self):
        if not self.tau > 1:
            raise ValueError(f"tau must be > 1, got {self.tau}")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        for name in ("lam", "lambda_l1", "gamma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.knn_k < 1:
            raise ValueError("knn_k must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be unsigned")


@dataclass
class ObjectiveTrace:
    """Per-iteration history of a proximal run.

    ``values[t-1]`` is L(alpha^(t)); ``initial`` is L(alpha^(0)).
    ``max_abs`` tracks max|alpha^(t)| since convergence to a critical point
    presumes bounded iterates.
    """

    initial: float
    values: list = field(default_factory=list)
    step_norms: list = field(default_factory=list)
    max_abs: list = field(default_factory=list)
    converged: bool = False

    @property
    def n_iter(self):
        return len(self.values)

    @property
    def final(self):
        return self.values[-1] if self.values else self.initial

    def all_values(self):
        """Objective values including the starting point."""
        return np.array([self.initial, *self.values])


def check_data(X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DataError(f"data matrix must be 2-D, got shape {X.shape}")
    d, n = X.shape
    if d < 1 or n < 2:
        raise DataError(f"need d >= 1 and n >= 2, got d={d}, n={n}")
    if not np.all(np.isfinite(X)):
        raise DataError("data matrix contains non-finite entries")
    return X


def check_codes(X, alpha):
    alpha = np.asarray(alpha, dtype=np.float64)
    n = X.shape[1]
    if alpha.shape != (n, n):
        raise DataError(f"coefficient matrix must be {n}x{n}, got {alpha.shape}")
    return alpha


def normalize_columns(X):
    """Scale every nonzero column of ``X`` to unit l2 norm.

    Returns
    -------
    Xn : ndarray, shape (d, n)
    zero_columns : list of int
        Indices of all-zero columns, which are left untouched.
    """
    X = np.asarray(X, dtype=np.float64)
    norms = np.linalg.norm(X, axis=0)
    zero = norms == 0
    scale = np.where(zero, 1.0, norms)
    Xn = X / scale
    zero_columns = np.flatnonzero(zero).tolist()
    if zero_columns:
        warnings.warn(f"{len(zero_columns)} zero column(s) left unnormalized: {zero_columns[:10]}")
    return Xn, zero_columns


def lipschitz_constant(X, tol=1e-8, max_power_iters=1000):
    """Return s = 2 * sigma_max(X^T X) by power iteration.

    The start vector is the normalized all-ones vector so the result is
    reproducible. The Rayleigh quotient converges geometrically, so the
    remaining error is estimated from the ratio of successive changes and
    iteration stops once that estimate drops below ``tol`` relative.
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[1]
    if n < 1:
        raise DataError("need at least one column")
    v = np.ones(n) / np.sqrt(n)
    mu = 0.0
    prev_delta = None
    for _ in range(max_power_iters):
        # X^T (X v) avoids forming the n x n Gram matrix
        with np.errstate(over="ignore", invalid="ignore"):
            w = X.T @ (X @ v)
            mu_new = float(v @ w)
            nw = np.linalg.norm(w)
        if not np.isfinite(nw):
            raise NumericalError("non-finite Gram product in power iteration (data too large to square?)")
        if nw == 0.0:
            # v in the null space; with the all-ones start that means X = 0
            # or an unlucky start, so retry from a fixed random vector once
            if mu == 0.0 and not np.any(X):
                return 0.0
            v = np.random.default_rng(0).standard_normal(n)
            v /= np.linalg.norm(v)
            continue
        v = w / nw
        delta = abs(mu_new - mu)
        tail = delta
        if prev_delta:
            r = min(delta / prev_delta, 0.999)
            tail = delta * max(1.0, r / (1.0 - r))
        if delta == 0.0 or (prev_delta is not None and tail <= tol * abs(mu_new)):
            # final Rayleigh quotient on the normalized iterate
            return 2.0 * float(v @ (X.T @ (X @ v)))
        prev_delta = delta
        mu = mu_new
    raise PowerIterationError(
        f"power iteration did not converge in {max_power_iters} iterations",
        last_estimate=2.0 * mu,
        last_vector=v,
    )


def l0_norm(a):
    """Count of entries that are not exactly zero."""
    return int(np.count_nonzero(a))


def objective_l0(X, alpha, lam):
    """||X - X alpha||_F^2 + lam * ||alpha||_0."""
    X = np.asarray(X, dtype=np.float64)
    alpha = check_codes(X, alpha)
    R = X - X @ alpha
    return float(np.sum(R * R)) + lam * l0_norm(alpha)
