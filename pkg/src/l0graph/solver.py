"""Proximal hard-thresholding solver for the l0 self-representation problem

    min_alpha ||X - X alpha||_F^2 + lam ||alpha||_0   s.t. diag(alpha) = 0

together with the lasso initializer, the OMP baseline and an exhaustive
oracle for tiny problems.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from .core import (
    DataError,
    NumericalError,
    ObjectiveTrace,
    SolverConfig,
    check_codes,
    check_data,
    lipschitz_constant,
    objective_l0,
)

logger = logging.getLogger(__name__)

MAX_ORACLE_N = 14
MAX_ORACLE_SUPPORT = 4


@dataclass
class ProximalState:
    alpha: np.ndarray
    gram: np.ndarray
    s: float
    t: int = 0

    @classmethod
    def from_data(cls, X, alpha0, s=None):
        X = check_data(X)
        gram = X.T @ X
        gram = 0.5 * (gram + gram.T)
        if s is None:
            s = lipschitz_constant(X)
        alpha = check_codes(X, alpha0).copy()
        np.fill_diagonal(alpha, 0.0)
        return cls(alpha=alpha, gram=gram, s=float(s))


def gradient_step(state, tau):
    """alpha - (2 / (tau s)) (G alpha - G), with G = X^T X.

    The diagonal is not projected here; :func:`hard_threshold` does that.
    """
    G = state.gram
    return state.alpha - (2.0 / (tau * state.s)) * (G @ state.alpha - G)


def hard_threshold(alpha_tilde, lam, tau, s):
    """Exact minimizer of (tau s / 2)||v - alpha_tilde||_F^2 + lam ||v||_0
    over zero-diagonal v.

    Entries with ``|a| < sqrt(2 lam / (tau s))`` become exactly zero; an entry
    sitting exactly on the threshold is kept. The test is carried out as the
    cost comparison (tau s / 2) a^2 < lam, which avoids rounding the square
    root and so agrees with a direct argmin over {0, a}.
    """
    a = np.asarray(alpha_tilde, dtype=np.float64)
    out = np.where(0.5 * tau * s * a * a < lam, 0.0, a)
    if out.ndim == 2 and out.shape[0] == out.shape[1]:
        np.fill_diagonal(out, 0.0)
    return out


def solve_l0(X, cfg=None, alpha0=None, s=None):
    """Run the proximal method from ``alpha0``.

    Iterates a gradient step on the squared loss followed by hard
    thresholding until the objective changes by less than ``cfg.tol`` or
    ``cfg.max_iter`` iterations have been taken.

    Parameters
    ----------
    X : ndarray, shape (d, n)
    cfg : SolverConfig, optional
    alpha0 : ndarray, shape (n, n), optional
        Starting codes; zeros if omitted. The diagonal is forced to zero.
    s : float, optional
        Lipschitz constant; computed by power iteration if omitted.

    Returns
    -------
    alpha : ndarray, shape (n, n)
    trace : ObjectiveTrace
    """
    cfg = cfg or SolverConfig()
    X = check_data(X)
    n = X.shape[1]
    if alpha0 is None:
        alpha0 = np.zeros((n, n))
    state = ProximalState.from_data(X, alpha0, s=s)
    if state.s <= 0:
        raise DataError("data matrix is identically zero")

    prev = objective_l0(X, state.alpha, cfg.lam)
    trace = ObjectiveTrace(initial=prev)
    for t in range(1, cfg.max_iter + 1):
        alpha_tilde = gradient_step(state, cfg.tau)
        alpha = hard_threshold(alpha_tilde, cfg.lam, cfg.tau, state.s)
        if not np.all(np.isfinite(alpha)):
            raise NumericalError(f"non-finite iterate at iteration {t}")
        value = objective_l0(X, alpha, cfg.lam)
        trace.values.append(value)
        trace.step_norms.append(float(np.linalg.norm(alpha - state.alpha)))
        trace.max_abs.append(float(np.max(np.abs(alpha))))
        state.alpha = alpha
        state.t = t
        if abs(value - prev) < cfg.tol:
            trace.converged = True
            break
        prev = value
    logger.debug("solve_l0: %d iterations, L=%.6g", trace.n_iter, trace.final)
    return state.alpha, trace


def soft_threshold(a, level):
    return np.sign(a) * np.maximum(np.abs(a) - level, 0.0)


def objective_l1(X, alpha, lambda_l1):
    R = X - X @ alpha
    return float(np.sum(R * R)) + lambda_l1 * float(np.sum(np.abs(alpha)))


def l1_initialize(X, lambda_l1=0.1, max_iter=300, tol=1e-6, tau=1.1, s=None):
    """Approximate lasso codes used to warm-start the l0 solver.

    Solves ``min ||X - X alpha||_F^2 + lambda_l1 ||alpha||_1`` with zero
    diagonal by accelerated proximal gradient. Whenever an accelerated step
    would raise the objective, momentum is reset and a plain proximal step
    is taken from the current iterate instead, so the objective sequence is
    non-increasing.
    """
    if not lambda_l1 > 0:
        raise ValueError("lambda_l1 must be > 0")
    X = check_data(X)
    n = X.shape[1]
    G = X.T @ X
    if s is None:
        s = lipschitz_constant(X)
    if s <= 0:
        return np.zeros((n, n))
    step = 2.0 / (tau * s)
    level = lambda_l1 / (tau * s)

    def prox_step(a):
        out = soft_threshold(a - step * (G @ a - G), level)
        np.fill_diagonal(out, 0.0)
        return out

    x = np.zeros((n, n))
    fx = objective_l1(X, x, lambda_l1)
    y = x
    theta = 1.0
    for it in range(1, max_iter + 1):
        x_new = prox_step(y)
        f_new = objective_l1(X, x_new, lambda_l1)
        if f_new > fx:
            theta = 1.0
            x_new = prox_step(x)
            f_new = objective_l1(X, x_new, lambda_l1)
        if not np.all(np.isfinite(x_new)):
            raise NumericalError(f"non-finite lasso iterate at iteration {it}")
        theta_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * theta * theta))
        y = x_new + ((theta - 1.0) / theta_new) * (x_new - x)
        done = abs(fx - f_new) < tol
        x, fx, theta = x_new, f_new, theta_new
        if done:
            break
    return x


def omp_sparse_code(X, T=3):
    """Orthogonal matching pursuit codes of each column over the others.

    For column i, atoms are chosen greedily by largest absolute correlation
    with the residual (column i itself excluded) and coefficients refit by
    least squares on the support after every pick. A column stops early
    once its residual norm is below 1e-10, or when the newest atom makes
    the support rank deficient (that atom is discarded).
    """
    X = check_data(X)
    d, n = X.shape
    if not 1 <= T < n:
        raise ValueError(f"need 1 <= T < n, got T={T}, n={n}")
    alpha = np.zeros((n, n))
    for i in range(n):
        x = X[:, i]
        r = x.copy()
        support = []
        coef = np.zeros(0)
        allowed = np.ones(n, dtype=bool)
        allowed[i] = False
        for _ in range(T):
            if np.linalg.norm(r) < 1e-10:
                break
            corr = np.abs(X.T @ r)
            corr[~allowed] = -np.inf
            j = int(np.argmax(corr))
            trial = support + [j]
            A = X[:, trial]
            c, _, rank, _ = np.linalg.lstsq(A, x, rcond=None)
            if rank < len(trial):
                break
            support, coef = trial, c
            allowed[j] = False
            r = x - A @ c
        alpha[support, i] = coef
    return alpha


@dataclass
class OracleSolution:
    alpha: np.ndarray
    objective: float
    per_column_support: list


def brute_force_l0_oracle(X, lam, max_support=3):
    """Exact per-column minimizer of ||x_i - X_S b||^2 + lam |S| over all
    supports S not containing i with |S| <= max_support.

    Ties go to the smaller support, then the lexicographically smallest one.
    Only meant for tiny problems (n <= 14, max_support <= 4).
    """
    X = check_data(X)
    d, n = X.shape
    if n > MAX_ORACLE_N or max_support > MAX_ORACLE_SUPPORT:
        raise ValueError(
            f"enumeration budget exceeded: n={n} (max {MAX_ORACLE_N}), "
            f"max_support={max_support} (max {MAX_ORACLE_SUPPORT})"
        )
    if max_support < 0:
        raise ValueError("max_support must be nonnegative")
    alpha = np.zeros((n, n))
    supports = []
    total = 0.0
    for i in range(n):
        x = X[:, i]
        others = [j for j in range(n) if j != i]
        best_cost = float(x @ x)
        best_support = ()
        best_coef = np.zeros(0)
        for k in range(1, max_support + 1):
            for S in itertools.combinations(others, k):
                A = X[:, S]
                coef = np.linalg.lstsq(A, x, rcond=None)[0]
                r = x - A @ coef
                cost = float(r @ r) + lam * k
                if cost < best_cost:
                    best_cost, best_support, best_coef = cost, S, coef
        alpha[list(best_support), i] = best_coef
        supports.append(set(best_support))
        total += best_cost
    # the objective is recomputed on alpha so exact zeros in a fitted
    # coefficient are accounted for consistently
    objective = objective_l0(X, alpha, lam)
    if abs(objective - total) > 1e-8 * max(1.0, abs(total)):
        logger.warning("oracle objective mismatch: %g vs %g", objective, total)
    return OracleSolution(alpha=alpha, objective=objective, per_column_support=supports)
