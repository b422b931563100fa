"""Input validation helpers.

Point clouds are plain ``(n, d)`` float arrays and distance matrices plain
``(n, n)`` arrays; these helpers normalise and check them at API boundaries so
the numeric code can assume clean inputs.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import EmptyInputError


def check_point_cloud(X, *, allow_empty: bool = False) -> np.ndarray:
    """Validate and return a point cloud as a float64 ``(n, d)`` array."""
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        if allow_empty:
            return X.reshape(0, X.shape[1] if X.ndim == 2 and X.shape[1] else 0)
        raise EmptyInputError("point cloud is empty")
    if X.ndim != 2:
        raise ValueError(f"point cloud must be a 2-D array, got shape {X.shape}")
    if X.shape[1] < 1:
        raise ValueError("points must have at least one coordinate")
    if not np.isfinite(X).all():
        raise ValueError("point cloud contains non-finite coordinates")
    return np.ascontiguousarray(X)


def check_distance_matrix(D) -> np.ndarray:
    """Validate a symmetric, nonnegative, zero-diagonal distance matrix."""
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {D.shape}")
    if D.shape[0] == 0:
        raise EmptyInputError("distance matrix is empty")
    if not np.isfinite(D).all():
        raise ValueError("distance matrix contains non-finite entries")
    if (D < 0).any():
        raise ValueError("distance matrix contains negative entries")
    if not np.array_equal(D, D.T):
        raise ValueError("distance matrix is not symmetric")
    if np.diag(D).any():
        raise ValueError("distance matrix has a nonzero diagonal")
    return D


def check_seed(seed) -> int:
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    return seed


def check_p(p) -> float:
    """Validate a norm order: a real >= 1 or infinity."""
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError("p must be a real number >= 1 (or inf)")
    return p
