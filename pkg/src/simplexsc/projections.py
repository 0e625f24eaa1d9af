"""Exact Euclidean projections used as ADMM feasibility steps.

Three constraint sets appear across the solvers: the scaled simplex
{z : z >= 0, sum(z) = s}, the scaled affine hyperplane {z : sum(z) = s},
and the non-negative orthant. Each projection is closed-form; the simplex
one costs O(N log N) per vector via a descending sort.
"""

from __future__ import annotations

import numpy as np

from .core import ConfigError, NumericError


def _finite_vector(u, name: str) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1 or u.size < 1:
        raise ConfigError(f"{name} must be a non-empty 1-D vector, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise NumericError(f"{name} contains non-finite values")
    return u


def project_scaled_simplex(u, s: float) -> np.ndarray:
    """Project u onto the scale-s simplex {z : z >= 0, sum(z) = s}.

    Sort-based exact projection: with w the descending sort of u, the number
    of positive output entries is the largest j with
    w_j + (s - sum_{i<=j} w_i)/j > 0, and every output entry is
    max(u_i + beta, 0) for the matching uniform shift beta.
    """
    u = _finite_vector(u, "u")
    if not np.isfinite(s) or s <= 0:
        raise ConfigError(f"simplex scale s must be positive, got {s}")
    w = np.sort(u)[::-1]
    cumsum = np.cumsum(w)
    ranks = np.arange(1, u.size + 1)
    positive = w + (s - cumsum) / ranks > 0
    alpha = int(np.nonzero(positive)[0][-1]) + 1  # positive[0] is s > 0, always true
    beta = (s - cumsum[alpha - 1]) / alpha
    return np.maximum(u + beta, 0.0)


def project_scaled_affine(v, s: float) -> np.ndarray:
    """Project v onto the hyperplane {z : sum(z) = s} by a uniform shift."""
    v = _finite_vector(v, "v")
    if not np.isfinite(s):
        raise NumericError(f"hyperplane target s must be finite, got {s}")
    return v + (s - v.sum()) / v.size


def project_nonneg(m) -> np.ndarray:
    """Clip a matrix (or vector) to the non-negative orthant entrywise."""
    m = np.asarray(m, dtype=np.float64)
    if not np.all(np.isfinite(m)):
        raise NumericError("input contains non-finite values")
    return np.maximum(m, 0.0)


def project_columns_scaled_simplex(m, s: float) -> np.ndarray:
    """Apply the scaled-simplex projection to every column of a matrix."""
    m = np.asarray(m, dtype=np.float64)
    out = np.empty_like(m)
    for j in range(m.shape[1]):
        out[:, j] = project_scaled_simplex(m[:, j], s)
    return out


def project_columns_scaled_affine(m, s: float) -> np.ndarray:
    """Apply the scaled-affine projection to every column of a matrix."""
    m = np.asarray(m, dtype=np.float64)
    out = np.empty_like(m)
    for j in range(m.shape[1]):
        out[:, j] = project_scaled_affine(m[:, j], s)
    return out
