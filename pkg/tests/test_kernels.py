import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nnpart.errors import ConfigurationError, DimensionMismatchError
from nnpart.kernels import (
    EvenPKernel,
    GeneralPKernel,
    evenp_lift_center,
    evenp_lift_query,
    generalp_inner,
    generalp_lift_center,
    generalp_lift_query,
    l2_lift_center,
    l2_lift_query,
    taylor_remainder_check,
    taylor_remainder_residual,
)


def ball_point(rng, d):
    v = rng.normal(size=d)
    n = np.linalg.norm(v)
    return v / n * rng.random() ** (1.0 / d) if n > 0 else v


class TestL2Lift:
    def test_spec_values(self):
        t = l2_lift_center([1.0, 0.0])
        q = l2_lift_query([1.0, 0.0])
        np.testing.assert_allclose(t, np.array([1, 0, 1]) / math.sqrt(2))
        np.testing.assert_allclose(q, np.array([2, 0, -1]) / math.sqrt(5))
        assert t @ q == pytest.approx(1.0 / math.sqrt(10))

    def test_outputs_in_unit_ball(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            x = ball_point(rng, 4)
            assert np.linalg.norm(l2_lift_center(x)) <= 1 + 1e-12
            assert np.linalg.norm(l2_lift_query(x)) <= 1 + 1e-12

    def test_norm_validation(self):
        with pytest.raises(ValueError):
            l2_lift_center([1.1, 0.0])

    def test_argmin_preserved(self):
        x, xp, q = np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.array([1.0, 0.0])
        # nearest center in L2 is x; the lift must rank it higher by inner product
        a = l2_lift_center(x) @ l2_lift_query(q)
        b = l2_lift_center(xp) @ l2_lift_query(q)
        assert np.linalg.norm(q - x) < np.linalg.norm(q - xp)
        assert a == pytest.approx(1 / math.sqrt(10))
        assert b == pytest.approx(-1 / math.sqrt(10))
        assert a > b

    def test_loss_relation(self):
        x, xp, q = np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.array([1.0, 0.0])
        l1 = abs(np.linalg.norm(q - x) - np.linalg.norm(q - xp))
        l2 = abs(l2_lift_center(x) @ l2_lift_query(q) - l2_lift_center(xp) @ l2_lift_query(q))
        assert l1 == pytest.approx(math.sqrt(2.0))
        assert l2 == pytest.approx(2.0 / math.sqrt(10))
        assert l1 <= 2.0 * math.sqrt(l2) + 1e-12

    def test_loss_relation_random(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            x, xp, q = (ball_point(rng, 3) for _ in range(3))
            l1 = abs(np.linalg.norm(q - x) - np.linalg.norm(q - xp))
            l2 = abs(l2_lift_center(x) @ l2_lift_query(q)
                     - l2_lift_center(xp) @ l2_lift_query(q))
            assert l1 <= 2.0 * math.sqrt(l2) + 1e-9


class TestEvenP:
    def test_p2_d1_value(self):
        k = EvenPKernel(2, 1)
        inner = evenp_lift_center(k, [1.0]) @ evenp_lift_query(k, [0.0])
        assert inner == pytest.approx(0.125, abs=1e-12)

    def test_roundtrip_distance(self):
        k = EvenPKernel(2, 1)
        assert k.distance_from_inner(0.125) == pytest.approx(1.0, abs=1e-12)

    def test_coincident_points(self):
        k = EvenPKernel(4, 3)
        y = np.array([0.2, -0.5, 0.1])
        assert evenp_lift_center(k, y) @ evenp_lift_query(k, y) == pytest.approx(0.0, abs=1e-15)

    def test_odd_p_rejected(self):
        with pytest.raises(ValueError):
            EvenPKernel(3, 2)

    @pytest.mark.parametrize("p,d", [(2, 1), (2, 3), (4, 1), (4, 3)])
    def test_exactness(self, p, d):
        k = EvenPKernel(p, d)
        rng = np.random.default_rng(10 * p + d)
        for _ in range(100):
            y, z = ball_point(rng, d), ball_point(rng, d)
            inner = evenp_lift_center(k, y) @ evenp_lift_query(k, z)
            target = np.sum(np.abs((y - z) / p) ** p) / (p * d)
            assert inner == pytest.approx(target, abs=1e-9)

    def test_lifted_dim(self):
        assert EvenPKernel(4, 3).lifted_dim == 15


class TestGeneralP:
    def test_paper_constant_arithmetic(self):
        k = GeneralPKernel(2.5, 1, 1, 100)
        assert k.delta == pytest.approx(1.0 / 600.0)
        assert k.half_steps == 300
        assert k.lifted_dim == 3 * 601

    def test_approx_error_value(self):
        k = GeneralPKernel(2.5, 1, 1, 100)
        assert k.approx_error == pytest.approx((2.5 / 600.0) ** 2.5, rel=1e-12)

    @pytest.mark.parametrize("p,d,i", [(2.5, 1, 1), (2.5, 2, 2), (3.5, 1, 1), (3.5, 2, 2)])
    def test_kernel_bound(self, p, d, i):
        k = GeneralPKernel(p, d, i, 100)
        rng = np.random.default_rng(int(10 * p) + d + i)
        for _ in range(250):
            y, z = ball_point(rng, d), ball_point(rng, d)
            inner = generalp_inner(k, y, z)
            target = float(np.sum(np.abs((y - z) / 2.0) ** p))
            assert abs(inner - target) <= k.approx_error

    def test_coincident_under_bound(self):
        k = GeneralPKernel(2.5, 2, 1, 4)
        y = np.array([0.3, -0.4])
        assert abs(generalp_inner(k, y, y)) <= k.approx_error

    def test_sparse_dense_analytic_agree(self):
        k = GeneralPKernel(2.5, 2, 1, 4)
        rng = np.random.default_rng(5)
        for _ in range(20):
            y, z = ball_point(rng, 2), ball_point(rng, 2)
            g = generalp_lift_center(k, y)
            h = generalp_lift_query(k, z)
            assert h.dot(g) == pytest.approx(float(h.to_dense() @ g), abs=1e-14)
            assert h.dot(g) == pytest.approx(generalp_inner(k, y, z), abs=1e-12)

    def test_query_sparsity(self):
        k = GeneralPKernel(2.5, 3, 1, 4)
        h = generalp_lift_query(k, np.array([0.1, -0.6, 0.4]))
        dense = h.to_dense().reshape(3, k.groups_per_coord, k.taylor_terms)
        nonzero_groups = np.count_nonzero(np.abs(dense).sum(axis=2), axis=1)
        assert np.all(nonzero_groups == 1)
        # the nonzero group sits at the cell containing z_j / 2
        for j, c in enumerate(h.groups):
            x = np.array([0.1, -0.6, 0.4])[j] / 2.0
            assert c * k.delta <= x + 1e-15 < (c + 1) * k.delta + 1e-15

    def test_sign_zero_convention(self):
        k = GeneralPKernel(2.5, 1, 1, 4)
        block = k._power_block(np.array([0.0]))
        np.testing.assert_array_equal(block, np.zeros((1, 3)))

    def test_config_validation(self):
        with pytest.raises(ConfigurationError):
            GeneralPKernel(2.0, 1, 1, 100)          # p must exceed 2
        with pytest.raises(ConfigurationError):
            GeneralPKernel(2.5, 1, 0, 100)          # scale starts at 1
        with pytest.raises(ConfigurationError):
            GeneralPKernel(2.5, 1, 1, 1.0 / 3.0)    # delta = 1/2: p * delta > 1
        with pytest.raises(ConfigurationError):
            GeneralPKernel(2.5, 1, 1, 0.7)          # grid step count not integral

    def test_dimension_mismatch(self):
        k = GeneralPKernel(2.5, 2, 1, 4)
        with pytest.raises(DimensionMismatchError):
            generalp_lift_query(k, np.array([0.1]))


class TestTaylorRemainder:
    def test_equal_points(self):
        assert taylor_remainder_check(2.5, 0.3, 0.3)

    def test_spec_example(self):
        assert taylor_remainder_check(2.5, 0.3, 0.29)

    @pytest.mark.parametrize("p", [2.1, 2.5, 3.5])
    def test_random_sweep(self, p):
        rng = np.random.default_rng(int(p * 10))
        x = rng.uniform(-1, 1, size=20_000)
        xp = rng.uniform(-1, 1, size=20_000)
        assert np.all(taylor_remainder_residual(p, x, xp) <= 1e-12)

    @settings(max_examples=300, deadline=None)
    @given(st.floats(-1, 1), st.floats(-1, 1),
           st.sampled_from([2.1, 2.5, 3.0 + 1e-9, 3.5, 4.7]))
    def test_property(self, x, xp, p):
        assert taylor_remainder_check(p, x, xp)
