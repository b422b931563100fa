"""Multiplicative persistence, the LGumbel signal test, bootstrap hole
statistics, Spearman rank agreement and threshold hole counts.

The signal test assumes the universality of the centred log-log
multiplicative persistence: l = A * loglog(pi) - lambda - mean(loglog(pi)),
with A = 1 for Rips filtrations (0.5 for Cech, accepted as a constant only)
and lambda the Euler-Mascheroni constant.  A point is signal when
exp(-exp(l)) falls strictly below alpha / |dgm|.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .pointcloud import bootstrap_sample

logger = logging.getLogger(__name__)

EULER_MASCHERONI = 0.57721566490153286

DEFAULT_THRESHOLD_GRID = tuple(round(0.25 + 0.05 * i, 2) for i in range(16))


def mult_pers(pair) -> float:
    """Multiplicative persistence death/birth; needs a positive birth."""
    if pair.birth <= 0:
        raise ValueError("multiplicative persistence needs birth > 0")
    return pair.death / pair.birth


def _loglog_ratios(diagram) -> tuple[np.ndarray, int]:
    """loglog(death/birth) per point, dropping undefined (pi <= 1) points."""
    D = np.asarray(diagram, dtype=float).reshape(-1, 2)
    if len(D) == 0:
        return np.zeros(0), 0
    if (D[:, 0] <= 0).any():
        keep0 = D[:, 0] > 0
        dropped0 = int((~keep0).sum())
        logger.warning("dropping %d points with nonpositive birth", dropped0)
        D = D[keep0]
    else:
        dropped0 = 0
    pi = D[:, 1] / D[:, 0]
    keep = pi > 1.0
    dropped = int((~keep).sum()) + dropped0
    if dropped:
        logger.warning("dropped %d points with multiplicative persistence <= 1", dropped)
    return np.log(np.log(pi[keep])), dropped


def l_values(diagram, A: float = 1.0) -> np.ndarray:
    """Centred test statistics l for every usable diagram point."""
    if A not in (1.0, 0.5):
        raise ValueError("A must be 1 (Rips) or 0.5 (Cech)")
    ll, _ = _loglog_ratios(diagram)
    if len(ll) == 0:
        return ll
    return A * ll - EULER_MASCHERONI - ll.mean()


@dataclass
class SignalReport:
    dgm_size: int                # points entering the test (after drops)
    dropped: int
    alpha: float
    A: float
    loglog: np.ndarray
    l: np.ndarray
    p_values: np.ndarray
    signal_indices: tuple        # indices into the post-drop diagram
    threshold: float

    def to_dict(self):
        return {
            "dgm_size": self.dgm_size,
            "dropped": self.dropped,
            "alpha": self.alpha,
            "A": self.A,
            "threshold": self.threshold,
            "loglog": [float(v) for v in self.loglog],
            "l": [float(v) for v in self.l],
            "p_values": [float(v) for v in self.p_values],
            "signal_indices": list(self.signal_indices),
        }


def extract_signal(diagram, alpha: float = 0.05, A: float = 1.0) -> SignalReport:
    """Flag diagram points whose LGumbel p-value beats alpha / |dgm|."""
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    ll, dropped = _loglog_ratios(diagram)
    size = len(ll)
    if size == 0:
        return SignalReport(dgm_size=0, dropped=dropped, alpha=alpha, A=A,
                            loglog=ll, l=ll, p_values=ll, signal_indices=(),
                            threshold=float("nan"))
    l = A * ll - EULER_MASCHERONI - ll.mean()
    pvals = np.exp(-np.exp(l))
    threshold = alpha / size
    signal = tuple(int(i) for i in np.flatnonzero(pvals < threshold))
    return SignalReport(dgm_size=size, dropped=dropped, alpha=alpha, A=A,
                        loglog=ll, l=l, p_values=pvals, signal_indices=signal,
                        threshold=threshold)


@dataclass
class BootstrapStats:
    counts: list
    mean: float
    se: float
    ci95: tuple
    reps: int
    sample_size: int
    degenerate: bool = False     # single replicate: se undefined, reported 0


def bootstrap_hole_stats(cloud, reps: int, fraction: float, alpha: float,
                         k: int, seed: int, max_scale: float | None = None,
                         A: float = 1.0) -> BootstrapStats:
    """Signal-hole counts over bootstrap resamples, with mean/SE/95% CI."""
    from .persistence import compute_pairs, pairs_to_diagram

    reps = int(reps)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    counts = []
    sample_size = None
    for r in range(reps):
        sample = bootstrap_sample(cloud, fraction, seed, index=r)
        sample_size = len(sample)
        pairs, _ = compute_pairs(X=sample, k=k, max_scale=max_scale)
        report = extract_signal(pairs_to_diagram(pairs), alpha, A)
        counts.append(len(report.signal_indices))
    arr = np.array(counts, dtype=float)
    mean = float(arr.mean())
    if reps == 1:
        logger.warning("single replicate: standard error undefined, reporting 0")
        se, degenerate = 0.0, True
    else:
        se, degenerate = float(arr.std(ddof=1) / math.sqrt(reps)), False
    ci = (mean - 1.96 * se, mean + 1.96 * se)
    return BootstrapStats(counts=counts, mean=mean, se=se, ci95=ci,
                          reps=reps, sample_size=int(sample_size),
                          degenerate=degenerate)


def spearman(x, y) -> float:
    """Spearman rank correlation with average ranks on ties."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be equal-length 1-D sequences")
    if len(x) < 2:
        raise ValueError("need at least two observations")
    rx, ry = rankdata(x), rankdata(y)
    if rx.std() == 0 or ry.std() == 0:
        raise ValueError("constant input: correlation undefined")
    return float(np.corrcoef(rx, ry)[0, 1])


def threshold_counts(values, grid=None) -> list:
    """Per grid fraction i, how many values reach i times the maximum."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("values must be nonempty")
    if (values < 0).any():
        raise ValueError("values must be nonnegative")
    if grid is None:
        grid = DEFAULT_THRESHOLD_GRID
    vmax = values.max()
    return [(float(i), int((values >= i * vmax).sum())) for i in grid]
