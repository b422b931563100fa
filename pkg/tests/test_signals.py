import math

import numpy as np
import pytest

from cyclecent import (bootstrap_hole_stats, extract_signal, l_values,
                       mult_pers, sample_sierpinski, spearman,
                       threshold_counts)
from cyclecent.signals import EULER_MASCHERONI as LAM


class FakePair:
    def __init__(self, birth, death):
        self.birth, self.death = birth, death


def diagram_from_loglog(values):
    """Diagram points with prescribed loglog multiplicative persistence."""
    return [(1.0, math.exp(math.exp(v))) for v in values]


class TestMultPers:
    def test_ratio(self):
        assert mult_pers(FakePair(0.1, 10.0)) == pytest.approx(100.0)
        assert mult_pers(FakePair(1.0, 1.0)) == 1.0
        assert mult_pers(FakePair(2.0, 4.0)) == 2.0

    def test_zero_birth_rejected(self):
        with pytest.raises(ValueError):
            mult_pers(FakePair(0.0, 1.0))


class TestLValues:
    def test_single_point_cancellation(self):
        l = l_values(diagram_from_loglog([2.3]), A=1.0)
        assert l[0] == pytest.approx(-LAM)

    def test_equal_points(self):
        l = l_values(diagram_from_loglog([0.9, 0.9]), A=1.0)
        assert np.allclose(l, -LAM)

    def test_mean_subtraction(self):
        l = l_values(diagram_from_loglog([0.5, 1.5]), A=1.0)
        assert l[0] == pytest.approx(-0.5 - LAM)
        assert l[1] == pytest.approx(0.5 - LAM)

    def test_empty(self):
        assert len(l_values([])) == 0

    def test_drops_unit_ratio(self):
        l = l_values([(1.0, 1.0), *diagram_from_loglog([1.0])], A=1.0)
        assert len(l) == 1

    def test_invalid_A(self):
        with pytest.raises(ValueError):
            l_values(diagram_from_loglog([1.0]), A=0.7)


class TestExtractSignal:
    def test_single_point_never_signal_at_005(self):
        # forced cancellation: p-value exp(-exp(-lambda)) ~ 0.5704 > 0.05
        rep = extract_signal(diagram_from_loglog([5.0]), alpha=0.05)
        assert rep.signal_indices == ()
        assert rep.p_values[0] == pytest.approx(math.exp(-math.exp(-LAM)))

    def test_empty_diagram(self):
        rep = extract_signal([], alpha=0.05)
        assert rep.dgm_size == 0 and rep.signal_indices == ()

    def test_synthetic_outlier(self):
        # oracle (direct formula): Lbar = (50*1 + 6)/51; the 6.0 point's
        # p-value ~ 1.4e-33 < 0.05/51 ~ 9.8e-4; the rest sit near 0.6
        dgm = diagram_from_loglog([1.0] * 50 + [6.0])
        rep = extract_signal(dgm, alpha=0.05)
        lbar = (50 * 1.0 + 6.0) / 51
        assert rep.l[-1] == pytest.approx(6.0 - LAM - lbar)
        assert rep.p_values[-1] < 0.05 / 51
        assert rep.signal_indices == (50,)

    def test_monotone_in_alpha(self):
        rng = np.random.default_rng(0)
        dgm = diagram_from_loglog(list(rng.normal(1.0, 1.2, 60)))
        prev = set()
        for alpha in (0.001, 0.01, 0.05, 0.2, 0.5, 0.9):
            cur = set(extract_signal(dgm, alpha=alpha).signal_indices)
            assert prev <= cur
            prev = cur

    def test_alpha_validation(self):
        with pytest.raises(ValueError):
            extract_signal(diagram_from_loglog([1.0]), alpha=0.0)


class TestBootstrap:
    def test_shapes_and_determinism(self):
        X = sample_sierpinski(80, seed=1)
        a = bootstrap_hole_stats(X, reps=5, fraction=0.8, alpha=0.05, k=1, seed=2)
        b = bootstrap_hole_stats(X, reps=5, fraction=0.8, alpha=0.05, k=1, seed=2)
        assert a.counts == b.counts
        assert a.reps == 5 and a.sample_size == 64
        assert a.ci95[0] <= a.mean <= a.ci95[1]

    def test_single_rep_degenerate(self):
        X = sample_sierpinski(60, seed=3)
        s = bootstrap_hole_stats(X, reps=1, fraction=0.9, alpha=0.05, k=1, seed=4)
        assert s.degenerate and s.se == 0.0

    def test_reps_validation(self):
        with pytest.raises(ValueError):
            bootstrap_hole_stats(np.zeros((5, 2)), reps=0, fraction=0.5,
                                 alpha=0.05, k=1, seed=0)


class TestSpearman:
    def test_identity(self):
        x = [3.0, 1.0, 4.0, 1.5, 9.0]
        assert spearman(x, x) == pytest.approx(1.0)

    def test_reversal(self):
        x = [1.0, 2.0, 3.0, 4.0]
        assert spearman(x, x[::-1]) == pytest.approx(-1.0)

    def test_half(self):
        # rank formula: 1 - 6 * sum(d^2) / (n(n^2-1)) = 1 - 12/24
        assert spearman([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)

    def test_ties_average_rank(self):
        assert spearman([1, 1, 2], [1, 1, 2]) == pytest.approx(1.0)

    def test_monotone_invariance(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=30)
        y = rng.normal(size=30)
        base = spearman(x, y)
        assert spearman(np.exp(x), y) == pytest.approx(base)
        assert spearman(x, 3 * y + 11) == pytest.approx(base)
        assert spearman(x ** 3, np.tanh(y)) == pytest.approx(base)

    def test_errors(self):
        with pytest.raises(ValueError):
            spearman([1, 2], [1, 2, 3])
        with pytest.raises(ValueError):
            spearman([1.0], [2.0])
        with pytest.raises(ValueError):
            spearman([2, 2, 2], [1, 2, 3])


class TestThresholdCounts:
    def test_maxima_count(self):
        counts = dict(threshold_counts([3.0, 3.0, 1.0], grid=[1.0]))
        assert counts[1.0] == 2

    def test_all_equal(self):
        counts = threshold_counts([2.0] * 7)
        assert all(c == 7 for _, c in counts)

    def test_direct_example(self):
        counts = dict(threshold_counts([10.0, 6.0, 2.0], grid=[0.5]))
        assert counts[0.5] == 2

    def test_nonincreasing_and_default_grid(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            vals = rng.uniform(0, 5, size=rng.integers(1, 40))
            counts = threshold_counts(vals)
            assert len(counts) == 16
            assert counts[0][0] == 0.25 and counts[-1][0] == 1.0
            cs = [c for _, c in counts]
            assert all(a >= b for a, b in zip(cs, cs[1:]))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            threshold_counts([])
