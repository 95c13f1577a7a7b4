"""Union-of-subspaces data with a choice of subspace geometry, and the
subspace-preserving rate of a code matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DataError

MODES = ("independent", "disjoint", "overlapping", "distinct")
_MAX_REJECTIONS = 100


@dataclass(frozen=True)
class SubspaceSpec:
    """Parameters of a synthetic union of linear subspaces.

    ``mode`` picks the pairwise geometry: ``independent`` (the sum of the
    subspaces is direct), ``disjoint`` (pairwise trivial intersection),
    ``overlapping`` (every pair shares the same ``overlap_dim`` directions)
    or ``distinct`` (independent random bases, only required to differ).
    """

    ambient_dim: int
    dims: tuple
    counts: tuple
    mode: str = "distinct"
    noise_sigma: float = 0.0
    seed: int = 0
    normalize: bool = False
    overlap_dim: int = 1

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(v) for v in self.dims))
        object.__setattr__(self, "counts", tuple(int(v) for v in self.counts))
        if self.mode == "distinct-random":
            object.__setattr__(self, "mode", "distinct")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if len(self.dims) != len(self.counts) or not self.dims:
            raise ValueError("dims and counts must be non-empty and of equal length")
        for dk, nk in zip(self.dims, self.counts):
            if not 1 <= dk <= self.ambient_dim:
                raise ValueError(f"subspace dimension {dk} outside [1, {self.ambient_dim}]")
            if nk < dk + 1:
                raise ValueError(f"need n_k >= d_k + 1, got n_k={nk}, d_k={dk}")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")

    @property
    def n(self):
        return sum(self.counts)


@dataclass(frozen=True)
class SynthDataset:
    X: np.ndarray
    truth: np.ndarray
    bases: list
    clean: np.ndarray


def numerical_rank(A, rtol=1e-8):
    sv = np.linalg.svd(A, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


def intersection_dim(B1, B2):
    return B1.shape[1] + B2.shape[1] - numerical_rank(np.hstack([B1, B2]))


def _orth(rng, d, k):
    Q, _ = np.linalg.qr(rng.standard_normal((d, k)))
    return Q


def _pairs(K):
    return [(a, b) for a in range(K) for b in range(a + 1, K)]


def _draw_bases(spec, rng):
    d, dims, K = spec.ambient_dim, spec.dims, len(spec.dims)
    if spec.mode == "independent":
        if sum(dims) > d:
            raise DataError(f"independent mode needs sum(d_k) <= d, got {sum(dims)} > {d}")
        Q = _orth(rng, d, d)
        offsets = np.cumsum((0,) + dims)
        return [Q[:, offsets[k] : offsets[k + 1]] for k in range(K)]

    if spec.mode == "disjoint":
        for a, b in _pairs(K):
            if dims[a] + dims[b] > d:
                raise DataError(f"disjoint mode needs d_k + d_k' <= d for every pair, got {dims[a]} + {dims[b]} > {d}")
        accept = lambda B: all(intersection_dim(B[a], B[b]) == 0 for a, b in _pairs(K))
        draw = lambda: [_orth(rng, d, dk) for dk in dims]

    elif spec.mode == "overlapping":
        o = spec.overlap_dim
        if not 1 <= o < min(dims):
            raise DataError(f"overlapping mode needs 1 <= overlap_dim < min(d_k), got {o}")
        for a, b in _pairs(K):
            if dims[a] + dims[b] - o > d:
                raise DataError("overlapping mode needs d_k + d_k' - overlap_dim <= d for every pair")

        def draw():
            U0 = _orth(rng, d, o)
            bases = []
            for dk in dims:
                V = rng.standard_normal((d, dk - o))
                V -= U0 @ (U0.T @ V)
                Q, _ = np.linalg.qr(np.hstack([U0, V]))
                bases.append(Q)
            return bases

        accept = lambda B: all(
            intersection_dim(B[a], B[b]) < min(dims[a], dims[b]) for a, b in _pairs(K)
        )

    else:  # distinct
        for a, b in _pairs(K):
            if dims[a] == dims[b] == d:
                raise DataError("two subspaces of full ambient dimension cannot be distinct")
        draw = lambda: [_orth(rng, d, dk) for dk in dims]
        accept = lambda B: all(
            not (dims[a] == dims[b] == numerical_rank(np.hstack([B[a], B[b]]))) for a, b in _pairs(K)
        )

    for _ in range(_MAX_REJECTIONS):
        bases = draw()
        if accept(bases):
            return bases
    raise DataError(f"could not draw {spec.mode} subspaces in {_MAX_REJECTIONS} attempts")


def generate(spec):
    """Sample a dataset from ``spec``.

    Each column is B_k c with c standard normal, plus isotropic Gaussian
    noise of scale ``noise_sigma``; columns are optionally scaled to unit
    norm afterwards. Columns are grouped by subspace in order.
    """
    rng = np.random.default_rng(spec.seed)
    bases = _draw_bases(spec, rng)
    blocks = [B @ rng.standard_normal((B.shape[1], nk)) for B, nk in zip(bases, spec.counts)]
    clean = np.hstack(blocks)
    truth = np.repeat(np.arange(len(spec.dims)), spec.counts)
    X = clean.copy()
    if spec.noise_sigma > 0:
        X += spec.noise_sigma * rng.standard_normal(X.shape)
    if spec.normalize:
        norms = np.linalg.norm(X, axis=0)
        X = X / np.where(norms == 0, 1.0, norms)
        clean = clean / np.where(norms == 0, 1.0, norms)
    return SynthDataset(X=X, truth=truth, bases=bases, clean=clean)


def subspace_preserving_rate(alpha, truth):
    """Fraction of columns whose nonzero coefficients all come from points
    of the same ground-truth group. Empty columns count as preserving."""
    alpha = np.asarray(alpha)
    truth = np.asarray(truth)
    n = truth.size
    if alpha.shape != (n, n):
        raise ValueError(f"codes shape {alpha.shape} does not match {n} labels")
    cross = (alpha != 0) & (truth[:, None] != truth[None, :])
    return float(np.mean(~cross.any(axis=0)))
