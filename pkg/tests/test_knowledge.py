import math

import numpy as np
import pytest

from nnpart.errors import InconsistentFeedbackError
from nnpart.knowledge import (
    KnowledgeSet,
    PotentialEstimate,
    ScaleSchedule,
    median_guess,
    potential,
    select_index,
    volume_ratio,
)


def e(dim, k):
    v = np.zeros(dim)
    v[k] = 1.0
    return v


class TestWidth:
    def test_initial_box(self):
        K = KnowledgeSet(3)
        assert K.width(e(3, 0)) == pytest.approx(4.0, abs=1e-9)

    def test_after_one_cut(self):
        K = KnowledgeSet(3).cut(e(3, 0), 0.0, ">=")
        assert K.width(e(3, 0)) == pytest.approx(2.0, abs=1e-9)

    def test_after_two_cuts(self):
        K = KnowledgeSet(3).cut(e(3, 0), 0.0, ">=").cut(e(3, 0), 0.5, "<=")
        assert K.width(e(3, 0)) == pytest.approx(0.5, abs=1e-9)

    def test_matches_lp_path(self):
        rng = np.random.default_rng(0)
        K = KnowledgeSet(3)
        for _ in range(4):
            a = rng.normal(size=3)
            a /= np.linalg.norm(a)
            K = K.cut(a, 0.3, "<=")
        K_lp = KnowledgeSet(body=K.body, cut_log=K.cut_log)
        K_lp._verts = ("set", None)  # force the LP fallback
        for _ in range(5):
            q = rng.normal(size=3)
            q /= np.linalg.norm(q)
            assert K.width(q) == pytest.approx(K_lp.width(q), abs=1e-7)

    def test_subset_monotone(self):
        rng = np.random.default_rng(4)
        K = KnowledgeSet(2)
        dirs = rng.normal(size=(8, 2))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        prev = K.width_batch(dirs)
        for t in range(5):
            a = rng.normal(size=2)
            a /= np.linalg.norm(a)
            K = K.cut(a, 0.2, "<=")
            cur = K.width_batch(dirs)
            assert np.all(cur <= prev + 1e-9)
            prev = cur


class TestCut:
    def test_interval_cut(self):
        K = KnowledgeSet(1).cut(np.array([1.0]), 0.0, ">=")
        lo, hi = K.support_interval(np.array([1.0]))
        assert (lo, hi) == (pytest.approx(0.0, abs=1e-9), pytest.approx(2.0, abs=1e-9))

    def test_idempotent_width(self):
        K1 = KnowledgeSet(2).cut(e(2, 0), 0.5, "<=")
        K2 = K1.cut(e(2, 0), 0.5, "<=")
        assert K1.width(e(2, 0)) == pytest.approx(K2.width(e(2, 0)), abs=1e-9)

    def test_empty_cut_raises(self):
        K = KnowledgeSet(1).cut(np.array([1.0]), 0.0, ">=")
        with pytest.raises(InconsistentFeedbackError):
            K.cut(np.array([1.0]), -1.0, "<=")

    def test_cut_log_grows(self):
        K = KnowledgeSet(2)
        K2 = K.cut(e(2, 0), 0.0, ">=")
        assert K.cut_count == 0 and K2.cut_count == 1


class TestSelectIndex:
    SCHED = ScaleSchedule(dim=3, alpha=1.0, i_min=-2, i_max=20)

    def test_width_four(self):
        assert select_index(self.SCHED, 4.0) == -2

    def test_width_point_three(self):
        assert select_index(self.SCHED, 0.3) == 1

    def test_exact_power_tie(self):
        assert select_index(self.SCHED, 2.0 ** -10) == 10

    def test_zero_width(self):
        assert select_index(self.SCHED, 0.0) == self.SCHED.i_max

    def test_clamping(self):
        assert select_index(self.SCHED, 100.0) == -2
        assert select_index(self.SCHED, 1e-12) == 20

    def test_bracketing_property(self):
        sched = ScaleSchedule(dim=2, i_min=-10, i_max=60)
        rng = np.random.default_rng(1)
        for w in rng.uniform(1e-9, 4.0, size=200):
            i = select_index(sched, float(w))
            assert 2.0 ** (-i) >= w > 2.0 ** (-i - 1)


class TestMedianGuess:
    SCHED = ScaleSchedule(dim=1, alpha=1.0, i_min=-2, i_max=20)

    def test_symmetric(self):
        K = KnowledgeSet(2)
        sched = ScaleSchedule(dim=2)
        g = median_guess(K, 2, e(2, 0), sched, 20_000, seed=3)
        assert abs(g) < 0.05

    def test_interval_midpoint(self):
        K = KnowledgeSet(1).cut(np.array([1.0]), 0.0, ">=")
        # z(i) = 2^-i / 8 = 0.125 at i = 0
        g = median_guess(K, 0, np.array([1.0]), self.SCHED, 60_000, seed=5)
        assert g == pytest.approx(1.0, abs=0.03)

    def test_deterministic(self):
        K = KnowledgeSet(2)
        sched = ScaleSchedule(dim=2)
        a = median_guess(K, 1, e(2, 1), sched, 2048, seed=9)
        b = median_guess(K, 1, e(2, 1), sched, 2048, seed=9)
        assert a == b


class TestPotential:
    SCHED = ScaleSchedule(dim=2, alpha=1.0, i_min=-2, i_max=12)

    def test_point_limit_is_zero(self):
        tiny = KnowledgeSet(2, box_halfwidth=1e-9)
        est = potential(tiny, self.SCHED, 4000, seed=2)
        assert est.value >= 0.0
        assert est.value <= 3.0 * est.stderr + 1e-6

    def test_initial_box_finite_positive_and_consistent(self):
        K = KnowledgeSet(2)
        est1 = potential(K, self.SCHED, 8000, seed=11)
        est2 = potential(K, self.SCHED, 16000, seed=12)
        assert est1.value > 0.0 and math.isfinite(est1.value)
        tol = 3.0 * math.hypot(est1.stderr, est2.stderr)
        assert abs(est1.value - est2.value) <= tol

    def test_monotone_under_cut(self):
        K = KnowledgeSet(2)
        K2 = K.cut(e(2, 0), 0.0, ">=")
        a = potential(K, self.SCHED, 8000, seed=21)
        b = potential(K2, self.SCHED, 8000, seed=21)
        assert b.value <= a.value + 3.0 * math.hypot(a.stderr, b.stderr)


class TestVolumeRatio:
    def test_half_cut_of_square(self):
        K = KnowledgeSet(2, box_halfwidth=1.0)
        K2 = K.cut(e(2, 0), 0.0, "<=")
        r, se = volume_ratio(K, K2, z=0.0, n=40_000, seed=3)
        assert r == pytest.approx(0.5, abs=4 * se + 0.01)

    def test_expanded_ratio_below_one(self):
        K = KnowledgeSet(2, box_halfwidth=1.0)
        K2 = K.cut(e(2, 1), 0.0, "<=")
        r, _ = volume_ratio(K, K2, z=0.05, n=40_000, seed=5)
        assert 0.4 < r < 0.65
