import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sklearn.linear_model import Lasso

from conftest import duplicate_of, duplicated_pairs
from l0graph.core import NumericalError, SolverConfig, lipschitz_constant, objective_l0
from l0graph.solver import (
    ProximalState,
    brute_force_l0_oracle,
    gradient_step,
    hard_threshold,
    l1_initialize,
    objective_l1,
    omp_sparse_code,
    soft_threshold,
    solve_l0,
)
from l0graph.synth import SubspaceSpec, generate, subspace_preserving_rate


def Q(X, alpha):
    R = X - X @ alpha
    return np.sum(R * R)


# -- gradient step -----------------------------------------------------------


def test_gradient_step_zero_gradient(dup_data):
    n = dup_data.shape[1]
    alpha = np.zeros((n, n))
    for i in range(n):
        alpha[duplicate_of(i), i] = 1.0
    state = ProximalState.from_data(dup_data, alpha)
    np.testing.assert_allclose(gradient_step(state, 1.1), alpha, atol=1e-14)


def test_gradient_step_from_zero(rng):
    X = rng.standard_normal((4, 6))
    state = ProximalState.from_data(X, np.zeros((6, 6)))
    expected = (2 / (1.5 * state.s)) * (X.T @ X)
    np.testing.assert_allclose(gradient_step(state, 1.5), expected, rtol=1e-12)


def test_gradient_step_matches_finite_differences(rng):
    X = rng.standard_normal((5, 6))
    alpha = rng.standard_normal((6, 6))
    np.fill_diagonal(alpha, 0)
    tau = 1.3
    state = ProximalState.from_data(X, alpha)
    # the step encodes grad Q = tau * s * (alpha - alpha_tilde)
    implied = tau * state.s * (alpha - gradient_step(state, tau))
    h = 1e-6
    fd = np.zeros_like(alpha)
    for i, j in itertools.product(range(6), range(6)):
        E = np.zeros_like(alpha)
        E[i, j] = h
        fd[i, j] = (Q(X, alpha + E) - Q(X, alpha - E)) / (2 * h)
    np.testing.assert_allclose(implied, fd, rtol=1e-5, atol=1e-5)


# -- hard thresholding -------------------------------------------------------


def test_hard_threshold_lambda_zero(rng):
    A = rng.standard_normal((4, 4))
    out = hard_threshold(A, 0.0, 1.1, 3.0)
    expected = A.copy()
    np.fill_diagonal(expected, 0)
    np.testing.assert_array_equal(out, expected)


def test_hard_threshold_worked_example():
    # lam = 0.5, tau * s = 4 -> threshold sqrt(2 * 0.5 / 4) = 0.5
    A = np.array([[9.0, 0.4, -0.6], [0.6, 9.0, -0.4], [0.5, -0.5, 9.0]])
    out = hard_threshold(A, 0.5, 2.0, 2.0)
    expected = np.array([[0.0, 0.0, -0.6], [0.6, 0.0, 0.0], [0.5, -0.5, 0.0]])
    np.testing.assert_array_equal(out, expected)


def test_hard_threshold_scalar_choice_by_hand():
    # 2 (v - a)^2 + 0.5 1{v != 0}: a = 0.4 -> v=0 costs 0.32 < 0.5; a = 0.6 -> 0.72 > 0.5
    for a, expected in ((0.4, 0.0), (0.6, 0.6)):
        cost_zero, cost_keep = 2 * a * a, 0.5
        assert (0.0 if cost_zero <= cost_keep else a) == expected
        assert hard_threshold(np.array([a]), 0.5, 2.0, 2.0)[0] == expected


def test_hard_threshold_keeps_boundary():
    lam, tau, s = 0.5, 2.0, 2.0
    thr = np.sqrt(2 * lam / (tau * s))
    assert hard_threshold(np.array([thr, -thr]), lam, tau, s).tolist() == [thr, -thr]


@given(
    st.floats(-5, 5, allow_nan=False),
    st.floats(0, 3),
    st.floats(1.0001, 3),
    st.floats(0.01, 50),
)
def test_hard_threshold_is_scalar_prox(a, lam, tau, s):
    v = hard_threshold(np.array([a]), lam, tau, s)[0]
    f = lambda v: 0.5 * tau * s * (v - a) ** 2 + lam * (v != 0)
    assert f(v) <= min(f(0.0), f(a)) + 1e-12


# -- proximal solver -------------------------------------------------------


def test_solve_l0_huge_lambda_gives_zero(rng):
    X = rng.standard_normal((4, 7))
    alpha, trace = solve_l0(X, SolverConfig(lam=1e6), rng.standard_normal((7, 7)))
    assert np.count_nonzero(alpha) == 0
    assert trace.final == pytest.approx(np.sum(X**2))


def test_solve_l0_fixed_point_terminates(rng):
    X = rng.standard_normal((4, 7))
    alpha, trace = solve_l0(X, SolverConfig(lam=1e6), np.zeros((7, 7)))
    assert trace.n_iter == 1 and trace.converged
    assert trace.step_norms == [0.0]


def test_solve_l0_duplicated_pairs_matches_oracle():
    X = duplicated_pairs(d=5, pairs=4, seed=3)
    lam = 0.05
    oracle = brute_force_l0_oracle(X, lam, max_support=2)
    assert oracle.objective == pytest.approx(lam * X.shape[1], abs=1e-10)
    cfg = SolverConfig(lam=lam, max_iter=2000, tol=1e-12)
    alpha, trace = solve_l0(X, cfg, l1_initialize(X, 0.1))
    for i in range(X.shape[1]):
        assert alpha[duplicate_of(i), i] != 0
    assert trace.final <= oracle.objective + 1e-3


def test_solve_l0_sufficient_decrease(rng):
    X = rng.standard_normal((8, 25))
    cfg = SolverConfig(lam=0.1, tau=1.1)
    s = lipschitz_constant(X)
    alpha, trace = solve_l0(X, cfg, l1_initialize(X, 0.1, s=s), s=s)
    L = trace.all_values()
    steps = np.array(trace.step_norms)
    assert np.all(L[1:] <= L[:-1] - (cfg.tau - 1) * s / 2 * steps**2 + 1e-9)
    assert np.all(np.diag(alpha) == 0)
    assert len(trace.max_abs) == trace.n_iter


def test_solve_l0_rejects_nonfinite(rng):
    X = rng.standard_normal((3, 5))
    bad = np.full((5, 5), np.nan)
    with pytest.raises(NumericalError, match="iteration 1"):
        solve_l0(X, SolverConfig(lam=0.0), bad)


def test_trace_length_bounded(rng):
    X = rng.standard_normal((6, 12))
    _, trace = solve_l0(X, SolverConfig(max_iter=7, tol=1e-30))
    assert trace.n_iter <= 7


# -- l1 initializer ----------------------------------------------------------


def test_soft_threshold_values():
    assert soft_threshold(0.7, 0.5) == pytest.approx(0.2)
    assert soft_threshold(-0.3, 0.5) == 0.0


def test_l1_initialize_large_lambda_is_zero(rng):
    X = rng.standard_normal((4, 6))
    G = X.T @ X
    off = np.abs(G - np.diag(np.diag(G))).max()
    alpha = l1_initialize(X, 2 * off + 1e-9)
    assert np.count_nonzero(alpha) == 0


def test_l1_initialize_not_worse_than_zero(rng):
    X = rng.standard_normal((6, 15))
    alpha = l1_initialize(X, 0.1, max_iter=20)
    assert objective_l1(X, alpha, 0.1) <= objective_l1(X, np.zeros((15, 15)), 0.1)
    assert np.all(np.diag(alpha) == 0)


def _lasso_column_objective(X, i, a, lam):
    r = X[:, i] - X @ a
    return r @ r + lam * np.abs(a).sum()


def test_l1_initialize_duplicated_pairs_vs_coordinate_descent():
    X = duplicated_pairs(d=5, pairs=4, seed=1)
    d, n = X.shape
    lam = 0.1
    alpha = l1_initialize(X, lam, max_iter=5000, tol=1e-14)
    for i in range(n):
        others = [j for j in range(n) if j != i]
        # sklearn scales the loss by 1 / (2 d)
        cd = Lasso(alpha=lam / (2 * d), fit_intercept=False, tol=1e-12, max_iter=100000)
        cd.fit(X[:, others], X[:, i])
        ref = np.zeros(n)
        ref[others] = cd.coef_
        gap = _lasso_column_objective(X, i, alpha[:, i], lam) - _lasso_column_objective(X, i, ref, lam)
        assert gap <= 1e-4
        dup = duplicate_of(i)
        assert abs(alpha[dup, i]) > 0.5
        assert np.abs(np.delete(alpha[:, i], dup)).max() < 0.1


def test_l1_initialize_monotone_with_restart(rng):
    X = rng.standard_normal((6, 15))
    s = lipschitz_constant(X)
    prev = objective_l1(X, np.zeros((15, 15)), 0.1)
    for k in (1, 2, 5, 10, 40):
        cur = objective_l1(X, l1_initialize(X, 0.1, max_iter=k, tol=0, s=s), 0.1)
        assert cur <= prev + 1e-12
        prev = cur


# -- OMP ---------------------------------------------------------------------


def test_omp_duplicated_pairs_single_atom(dup_data):
    alpha = omp_sparse_code(dup_data, 1)
    for i in range(dup_data.shape[1]):
        assert np.flatnonzero(alpha[:, i]).tolist() == [duplicate_of(i)]
        assert alpha[duplicate_of(i), i] == pytest.approx(1.0, abs=1e-12)


def test_omp_single_atom_coefficient_is_inner_product(rng):
    X = rng.standard_normal((6, 5))
    X /= np.linalg.norm(X, axis=0)
    alpha = omp_sparse_code(X, 1)
    G = X.T @ X
    for i in range(5):
        g = np.abs(G[:, i])
        g[i] = -1
        j = int(np.argmax(g))
        assert np.flatnonzero(alpha[:, i]).tolist() == [j]
        assert alpha[j, i] == pytest.approx(G[j, i], rel=1e-12)


def test_omp_orthogonal_columns_give_zero_coefficients():
    X = np.linalg.qr(np.random.default_rng(0).standard_normal((6, 4)))[0]
    alpha = omp_sparse_code(X, 1)
    np.testing.assert_allclose(alpha, 0.0, atol=1e-12)


def test_omp_beats_every_single_atom(rng):
    X = rng.standard_normal((8, 12))
    alpha = omp_sparse_code(X, 3)
    for i in range(12):
        res = np.linalg.norm(X[:, i] - X @ alpha[:, i])
        for j in range(12):
            if j == i:
                continue
            xj = X[:, j]
            single = X[:, i] - xj * (xj @ X[:, i]) / (xj @ xj)
            assert res <= np.linalg.norm(single) + 1e-12


def test_omp_rank_deficient_support_stops_without_error():
    e = np.eye(3)
    X = np.column_stack([e[:, 2], e[:, 0], e[:, 0]])
    alpha = omp_sparse_code(X, 2)
    assert np.count_nonzero(alpha[:, 0]) <= 1


@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_omp_support_size_and_diagonal(seed, T):
    X = np.random.default_rng(seed).standard_normal((4, 9))
    alpha = omp_sparse_code(X, T)
    assert np.all(np.count_nonzero(alpha, axis=0) <= T)
    assert np.all(np.diag(alpha) == 0)


def test_omp_rejects_bad_T(dup_data):
    with pytest.raises(ValueError):
        omp_sparse_code(dup_data, 0)
    with pytest.raises(ValueError):
        omp_sparse_code(dup_data, dup_data.shape[1])


# -- brute-force oracle --------------------------------------------------------


def test_oracle_budget_checked_first():
    X = np.random.default_rng(0).standard_normal((3, 15))
    with pytest.raises(ValueError, match="budget"):
        brute_force_l0_oracle(X, 0.1, 2)
    with pytest.raises(ValueError, match="budget"):
        brute_force_l0_oracle(X[:, :5], 0.1, 5)


def test_oracle_duplicated_pairs(dup_data):
    sol = brute_force_l0_oracle(dup_data, 0.5, 3)
    assert sol.per_column_support == [{duplicate_of(i)} for i in range(8)]
    assert sol.objective == pytest.approx(0.5 * 8, abs=1e-10)


def test_oracle_objective_consistent(rng):
    X = rng.standard_normal((4, 7))
    sol = brute_force_l0_oracle(X, 0.2, 3)
    assert sol.objective == pytest.approx(objective_l0(X, sol.alpha, 0.2), abs=1e-10)


def test_oracle_lambda_zero_exact_representation():
    ds = generate(SubspaceSpec(6, (2, 2), (4, 4), seed=5))
    sol = brute_force_l0_oracle(ds.X, 0.0, 2)
    R = ds.X - ds.X @ sol.alpha
    assert np.sum(R * R) < 1e-20


def test_oracle_subspace_sparse_on_two_subspaces():
    ds = generate(SubspaceSpec(6, (2, 2), (4, 4), seed=11))
    sol = brute_force_l0_oracle(ds.X, 1e-3, 3)
    assert subspace_preserving_rate(sol.alpha, ds.truth) == 1.0


def test_oracle_is_minimal_against_random_codes(rng):
    X = rng.standard_normal((3, 6))
    sol = brute_force_l0_oracle(X, 0.3, 2)
    for _ in range(200):
        alpha = rng.standard_normal((6, 6)) * (rng.random((6, 6)) < 0.3)
        np.fill_diagonal(alpha, 0)
        if np.all(np.count_nonzero(alpha, axis=0) <= 2):
            assert objective_l0(X, alpha, 0.3) >= sol.objective - 1e-10
