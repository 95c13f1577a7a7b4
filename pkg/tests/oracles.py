"""Independent brute-force references shared by unit and acceptance tests."""

import itertools

import numpy as np


def scalar_prox_by_comparison(a, lam, tau, s):
    """argmin over {0, a} of (tau s / 2)(v - a)^2 + lam 1{v != 0}; ties keep a."""
    keep = lam
    zero = 0.5 * tau * s * a * a
    return np.where(zero < keep, 0.0, a)


def grid_plus_candidates_argmin(a, atoms, weights, gamma, tau, s, step=1e-4):
    """Minimize F(v) = (tau s / 2)(v - a)^2 + gamma sum_j w_j 1{v != atom_j}
    over a dense grid on [min - 1, max + 1] together with {a} and the atoms.

    The candidate order encodes the tie rule (a first, then smaller |v|,
    then smaller neighbor index).
    """
    atoms = np.asarray(atoms, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    lo = min(a, atoms.min()) - 1
    hi = max(a, atoms.max()) + 1
    grid = np.arange(lo, hi, step)
    order = sorted(range(atoms.size), key=lambda j: (abs(atoms[j]), j))
    points = np.concatenate([[a], atoms[order], grid])
    matched = (points[:, None] == atoms[None, :]).astype(np.float64) @ weights
    F = 0.5 * tau * s * (points - a) ** 2 + gamma * (weights.sum() - matched)
    best = int(np.argmin(F))  # first minimum
    return points[best], F[best]


def permutation_assignment_cost(cost):
    cost = np.asarray(cost)
    n = cost.shape[0]
    return min(sum(cost[i, p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


def accuracy_by_enumeration(pred, truth):
    pred, truth = np.asarray(pred), np.asarray(truth)
    ids = sorted(set(pred.tolist()) | set(truth.tolist()))
    best = 0
    for perm in itertools.permutations(ids):
        mapping = dict(zip(ids, perm))
        best = max(best, sum(mapping[p] == t for p, t in zip(pred.tolist(), truth.tolist())))
    return best / len(truth)
