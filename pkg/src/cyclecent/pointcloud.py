"""Point-cloud ingestion, distances, perturbation, fractal samplers, bootstrap.

All randomised operations are pure functions of their arguments plus a seed;
streams are derived as (seed, purpose tag, replicate index) so replicates can
run concurrently and still reproduce bit-for-bit.
"""

from __future__ import annotations

import zlib

import numpy as np

from ._validation import check_point_cloud, check_seed
from .errors import EmptyInputError, PointFormatError

_FERN_MAPS = np.array([
    # a     b      c      d      e     f
    [0.00,  0.00,  0.00,  0.16, 0.00, 0.00],
    [0.85,  0.04, -0.04,  0.85, 0.00, 1.60],
    [0.20, -0.26,  0.23,  0.22, 0.00, 1.60],
    [-0.15, 0.28,  0.26,  0.24, 0.00, 0.44],
])
_FERN_PROBS = np.array([0.01, 0.85, 0.07, 0.07])

_SIERPINSKI_ANCHORS = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3.0) / 2.0]])

_BURN_IN = 100


def derive_rng(seed: int, purpose: str, index=None) -> np.random.Generator:
    """Derive an independent RNG stream from (master seed, purpose, replicate)."""
    entropy = [check_seed(seed), zlib.crc32(purpose.encode("utf-8"))]
    if index is not None:
        if isinstance(index, (tuple, list)):
            entropy.extend(int(i) for i in index)
        else:
            entropy.append(int(index))
    return np.random.default_rng(entropy)


def load_points(path) -> np.ndarray:
    """Parse a CSV of one point per line (comma-separated decimals, no header)."""
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):  # metadata comment lines
                continue
            cells = line.split(",")
            try:
                row = [float(c) for c in cells]
            except ValueError as exc:
                raise PointFormatError(f"{path}:{lineno}: non-numeric cell") from exc
            if rows and len(row) != len(rows[0]):
                raise PointFormatError(
                    f"{path}:{lineno}: ragged row (expected {len(rows[0])} "
                    f"coordinates, got {len(row)})"
                )
            rows.append(row)
    if not rows:
        raise EmptyInputError(f"{path}: no points")
    return check_point_cloud(np.array(rows, dtype=float))


def save_points(path, X) -> None:
    """Write a point cloud in the CSV format `load_points` reads."""
    X = check_point_cloud(X, allow_empty=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in X:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def pairwise_distances(cloud) -> np.ndarray:
    """Euclidean distance matrix; exactly symmetric with a zero diagonal."""
    X = check_point_cloud(cloud)
    diff = X[:, None, :] - X[None, :, :]
    D = np.sqrt((diff * diff).sum(axis=-1))
    np.fill_diagonal(D, 0.0)
    return D


def perturb(cloud, kappa: float, seed: int, index=None) -> np.ndarray:
    """Shift every coordinate by an independent uniform draw from [-kappa, kappa]."""
    X = check_point_cloud(cloud)
    kappa = float(kappa)
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    if kappa == 0:
        return X.copy()
    rng = derive_rng(seed, "perturb", index)
    return X + rng.uniform(-kappa, kappa, size=X.shape)


def sample_sierpinski(n: int, seed: int) -> np.ndarray:
    """Chaos game on the standard Sierpinski triangle (unit side)."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = derive_rng(seed, "sierpinski")
    choices = rng.integers(0, 3, size=_BURN_IN + n)
    pt = np.zeros(2)
    out = np.empty((n, 2))
    for i, c in enumerate(choices):
        pt = (pt + _SIERPINSKI_ANCHORS[c]) / 2.0
        if i >= _BURN_IN:
            out[i - _BURN_IN] = pt
    return out


def sample_fern(n: int, seed: int) -> np.ndarray:
    """Barnsley fern via the classical four-map IFS."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = derive_rng(seed, "fern")
    cuts = np.cumsum(_FERN_PROBS)
    draws = rng.random(_BURN_IN + n)
    x, y = 0.0, 0.0
    out = np.empty((n, 2))
    for i, r in enumerate(draws):
        m = int(np.searchsorted(cuts, r, side="right"))
        m = min(m, 3)
        a, b, c, d, e, f = _FERN_MAPS[m]
        x, y = a * x + b * y + e, c * x + d * y + f
        if i >= _BURN_IN:
            out[i - _BURN_IN] = (x, y)
    return out


def sample_annuli_wedge(n: int, seed: int, radius: float = 1.0,
                        noise: float = 0.1) -> np.ndarray:
    """Sample around a wedge sum of two annuli (circles tangent at the origin).

    Points alternate between the two rings; `noise` is the radial half-width
    of each annulus.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = derive_rng(seed, "annuli-wedge")
    ang = rng.uniform(0.0, 2.0 * np.pi, size=n)
    rad = radius + rng.uniform(-noise, noise, size=n)
    side = np.where(np.arange(n) % 2 == 0, -1.0, 1.0)
    return np.c_[side * radius + rad * np.cos(ang), rad * np.sin(ang)]


def bootstrap_sample(cloud, fraction: float, seed: int, index: int = 0) -> np.ndarray:
    """Draw floor(fraction * n) points uniformly with replacement."""
    X = check_point_cloud(cloud)
    fraction = float(fraction)
    if not (0.0 < fraction <= 1.0):
        raise ValueError("fraction must lie in (0, 1]")
    rng = derive_rng(seed, "bootstrap", index)
    m = int(np.floor(fraction * X.shape[0]))
    idx = rng.integers(0, X.shape[0], size=m)
    return X[idx]
