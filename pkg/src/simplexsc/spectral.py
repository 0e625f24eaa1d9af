"""Affinity construction and normalized spectral clustering.

The affinity is either the plain symmetric average (C + C^T)/2, meant for
non-negative coefficient matrices, or the absolute symmetrization
(|C| + |C^T|)/2 used when coefficients may be signed. Segmentation embeds
points via the bottom eigenvectors of the symmetric normalized Laplacian,
row-normalizes the embedding, and runs seeded multi-restart k-means.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AFFINITY_MODES,
    ConfigError,
    NumericError,
    ShapeError,
    as_square_matrix,
)

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class SpectralConfig:
    """Cluster count, affinity mode, and k-means controls."""

    n_clusters: int
    affinity_mode: str = "sym"
    kmeans_restarts: int = 20
    kmeans_max_iters: int = 300
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_clusters < 1:
            raise ConfigError(f"n_clusters must be >= 1, got {self.n_clusters}")
        if self.affinity_mode not in AFFINITY_MODES:
            raise ConfigError(
                f"affinity_mode must be one of {AFFINITY_MODES}, got {self.affinity_mode!r}"
            )
        if self.kmeans_restarts < 1 or self.kmeans_max_iters < 1:
            raise ConfigError("kmeans_restarts and kmeans_max_iters must be >= 1")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")


def build_affinity(c, mode: str = "sym") -> np.ndarray:
    """Symmetrize a coefficient matrix into an affinity graph.

    "sym" returns (C + C^T)/2 and preserves sign; "abs" returns
    (|C| + |C^T|)/2. Either output is exactly symmetric by construction.
    """
    c = as_square_matrix(c, name="coefficient matrix")
    if mode == "sym":
        return (c + c.T) / 2.0
    if mode == "abs":
        return (np.abs(c) + np.abs(c.T)) / 2.0
    raise ConfigError(f"mode must be one of {AFFINITY_MODES}, got {mode!r}")


def symmetric_eigendecomposition(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix."""
    m = as_square_matrix(m, name="matrix")
    if np.max(np.abs(m - m.T)) > SYMMETRY_TOL:
        raise ShapeError("matrix is not symmetric")
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition failed: {exc}") from exc
    return eigenvalues, eigenvectors


def spectral_cluster(a, cfg: SpectralConfig) -> np.ndarray:
    """Segment an affinity graph into cfg.n_clusters groups.

    Forms the symmetric normalized Laplacian I - D^{-1/2} A D^{-1/2} (rows
    with zero degree get a zero scaling factor, leaving their embedding row
    zero), embeds points in the n_clusters bottom eigenvectors, row-normalizes
    to unit length, and labels rows by seeded k-means. Deterministic for a
    fixed config.
    """
    a = as_square_matrix(a, name="affinity matrix")
    n = a.shape[0]
    if np.max(np.abs(a - a.T)) > SYMMETRY_TOL:
        raise ShapeError("affinity matrix is not symmetric")
    if cfg.n_clusters > n:
        raise ConfigError(f"n_clusters={cfg.n_clusters} exceeds number of points {n}")

    degrees = a.sum(axis=1)
    if np.any(degrees < 0):
        raise NumericError("affinity matrix has negative node degrees")
    inv_sqrt = np.zeros(n)
    positive = degrees > 0
    inv_sqrt[positive] = 1.0 / np.sqrt(degrees[positive])
    laplacian = np.eye(n) - inv_sqrt[:, None] * a * inv_sqrt[None, :]
    laplacian = (laplacian + laplacian.T) / 2.0

    _, eigenvectors = symmetric_eigendecomposition(laplacian)
    embedding = eigenvectors[:, : cfg.n_clusters]
    row_norms = np.linalg.norm(embedding, axis=1)
    scale = np.where(row_norms > 0, row_norms, 1.0)
    embedding = embedding / scale[:, None]

    labels, _ = kmeans(
        embedding,
        cfg.n_clusters,
        restarts=cfg.kmeans_restarts,
        max_iters=cfg.kmeans_max_iters,
        seed=cfg.seed,
    )
    return labels


def kmeans(
    points: np.ndarray,
    k: int,
    restarts: int = 20,
    max_iters: int = 300,
    seed: int = 0,
) -> tuple[np.ndarray, float]:
    """Multi-restart Lloyd iteration; returns (labels, within-cluster SSQ).

    Seeding is distance-weighted (each new center drawn with probability
    proportional to squared distance from the chosen set). The restart with
    the lowest objective wins, ties going to the lowest restart index, so
    the result depends only on the seed.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] < 1:
        raise ShapeError(f"points must be a non-empty 2-D array, got shape {points.shape}")
    if not 1 <= k <= points.shape[0]:
        raise ConfigError(f"k must be in [1, {points.shape[0]}], got {k}")
    rng = np.random.default_rng(seed)
    best_labels: np.ndarray | None = None
    best_objective = np.inf
    for _ in range(restarts):
        labels, objective = _lloyd(points, k, rng, max_iters)
        if objective < best_objective:
            best_labels = labels
            best_objective = objective
    assert best_labels is not None
    return best_labels, float(best_objective)


def _seed_centers(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    closest = ((points - centers[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = rng.choice(n, p=closest / total)
        else:
            idx = rng.integers(n)
        centers[i] = points[idx]
        closest = np.minimum(closest, ((points - centers[i]) ** 2).sum(axis=1))
    return centers


def _lloyd(
    points: np.ndarray, k: int, rng: np.random.Generator, max_iters: int
) -> tuple[np.ndarray, float]:
    centers = _seed_centers(points, k, rng)
    previous_objective = np.inf
    previous_labels: np.ndarray | None = None
    labels = np.zeros(points.shape[0], dtype=np.int64)
    objective = 0.0
    for _ in range(max_iters):
        # argmin breaks assignment ties by lowest center index
        distances = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        labels = np.argmin(distances, axis=1)
        objective = float(distances[np.arange(points.shape[0]), labels].sum())
        if np.isfinite(previous_objective):
            assert objective <= previous_objective + 1e-9 * (1.0 + previous_objective)
        if previous_labels is not None and np.array_equal(labels, previous_labels):
            break
        previous_labels = labels
        previous_objective = objective
        for i in range(k):
            members = labels == i
            if members.any():  # empty clusters keep their center
                centers[i] = points[members].mean(axis=0)
    return labels, objective
