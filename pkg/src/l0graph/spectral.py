"""Similarity graph from codes, normalized Laplacian, spectral embedding and
k-means on its rows."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.cluster import KMeans
from sklearn.exceptions import ConvergenceWarning

from .core import NumericalError


@dataclass(frozen=True)
class SimilarityGraph:
    W: np.ndarray
    degrees: np.ndarray
    laplacian: np.ndarray


@dataclass(frozen=True)
class ClusteringResult:
    labels: np.ndarray
    kmeans_inertia: float
    eigenvalues: np.ndarray


def normalized_laplacian(W):
    """L = D^{-1/2} (D - W) D^{-1/2}; isolated vertices get D^{-1/2} = 0."""
    W = np.asarray(W, dtype=np.float64)
    deg = W.sum(axis=1)
    with np.errstate(divide="ignore"):
        inv_sqrt = np.where(deg > 0, 1.0 / np.sqrt(deg), 0.0)
    L = inv_sqrt[:, None] * (np.diag(deg) - W) * inv_sqrt[None, :]
    return deg, L


def graph_from_affinity(W):
    W = np.asarray(W, dtype=np.float64)
    deg, L = normalized_laplacian(W)
    return SimilarityGraph(W=W, degrees=deg, laplacian=L)


def symmetrize(alpha):
    """W_ij = (|alpha_ij| + |alpha_ji|) / 2 and its normalized Laplacian."""
    A = np.abs(np.asarray(alpha, dtype=np.float64))
    W = 0.5 * (A + A.T)
    np.fill_diagonal(W, 0.0)
    return graph_from_affinity(W)


def smallest_eigenvectors(L, c):
    """Orthonormal eigenvectors of the ``c`` smallest eigenvalues of ``L``.

    Each vector is signed so that its largest-magnitude entry (first one on
    ties) is positive.

    Returns
    -------
    vals : ndarray, shape (c,)
    vecs : ndarray, shape (n, c)
    """
    L = np.asarray(L, dtype=np.float64)
    n = L.shape[0]
    if not 1 <= c <= n:
        raise ValueError(f"need 1 <= c <= n, got c={c}, n={n}")
    L = 0.5 * (L + L.T)
    try:
        vals, vecs = np.linalg.eigh(L)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    vals, vecs = vals[:c], vecs[:, :c].copy()
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.where(vecs[idx, np.arange(c)] < 0, -1.0, 1.0)
    return vals, vecs * signs


def kmeans(rows, c, restarts=10, seed=0, max_iter=300, tol=1e-9):
    """Best-of-``restarts`` Lloyd k-means from k-means++ seeding."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim == 1:
        rows = rows[:, None]
    n = rows.shape[0]
    if c < 1 or n < c:
        raise ValueError(f"need 1 <= c <= n, got c={c}, n={n}")
    with warnings.catch_warnings():
        # duplicate rows make fewer distinct clusters than c; not an error here
        warnings.simplefilter("ignore", ConvergenceWarning)
        km = KMeans(
            n_clusters=c,
            init="k-means++",
            n_init=restarts,
            max_iter=max_iter,
            tol=tol,
            random_state=seed,
            algorithm="lloyd",
        ).fit(rows)
    return km.labels_.astype(np.int64), float(km.inertia_)


def spectral_from_graph(graph, c, seed=0, restarts=10):
    vals, vecs = smallest_eigenvectors(graph.laplacian, c)
    labels, inertia = kmeans(vecs, c, restarts=restarts, seed=seed)
    return ClusteringResult(labels=labels, kmeans_inertia=inertia, eigenvalues=vals)


def spectral_cluster(alpha, c, seed=0, restarts=10):
    """Cluster the columns behind ``alpha`` into ``c`` groups."""
    return spectral_from_graph(symmetrize(alpha), c, seed=seed, restarts=restarts)


def gaussian_affinity(X, bandwidth=None):
    """exp(-||x_i - x_j||^2 / (2 sigma^2)) with sigma the median pairwise
    distance unless given."""
    from scipy.spatial.distance import pdist, squareform

    d = pdist(np.asarray(X, dtype=np.float64).T)
    if bandwidth is None:
        bandwidth = float(np.median(d)) if d.size else 1.0
        if bandwidth == 0:
            bandwidth = 1.0
    W = np.exp(-squareform(d) ** 2 / (2.0 * bandwidth**2))
    np.fill_diagonal(W, 0.0)
    return W
