import numpy as np
import pytest

from diskinterp.blaschke import (BlaschkeProduct, BlaschkeZeroError,
                                 inner_membership_test, log_derivative_sum)
from diskinterp.carleson import BOUNDED, DIVERGENT
from diskinterp.sequences import gen_clustered, gen_radial


def central_diff(f, z, h=1e-6):
    return (f(z + h) - f(z - h)) / (2 * h)


class TestEval:
    def test_vanishes_at_zero(self):
        B = BlaschkeProduct([0.5])
        assert B.eval(0.5) == 0.0

    def test_single_factor_at_origin(self):
        # (|a|/a)(a-0)/(1-0) = |a|
        assert BlaschkeProduct([0.5]).eval(0.0) == pytest.approx(0.5)
        assert BlaschkeProduct([0.3j]).eval(0.0) == pytest.approx(0.3)

    def test_boundary_modulus_one(self):
        B = BlaschkeProduct([0.5, -0.3 + 0.2j, 0.1j])
        theta = np.linspace(0, 2 * np.pi, 17)[:-1]
        vals = B.eval(np.exp(1j * theta))
        assert np.max(np.abs(np.abs(vals) - 1.0)) <= 1e-12

    def test_origin_zero_convention(self):
        B = BlaschkeProduct([0.0])
        z = 0.3 - 0.7j
        assert B.eval(z) == pytest.approx(z)

    def test_modulus_below_one_inside(self):
        rng = np.random.default_rng(1)
        B = BlaschkeProduct([0.5, -0.5j, 0.2 + 0.2j])
        z = 0.999 * np.sqrt(rng.uniform(size=200)) * np.exp(2j * np.pi * rng.uniform(size=200))
        assert np.all(np.abs(B.eval(z)) <= 1.0)

    def test_long_product_matches_direct(self):
        # above DIRECT_PRODUCT_LIMIT the exp-log path must agree with plain products
        zeros = gen_radial(0.9, 80).values
        B = BlaschkeProduct(zeros)
        z = np.array([0.1 + 0.2j, -0.4j, 0.95])
        direct = np.ones_like(z)
        for a in zeros:
            direct *= (abs(a) / a) * (a - z) / (1 - np.conj(a) * z)
        assert np.max(np.abs(B.eval(z) - direct)) <= 1e-10
        # exact zero short-circuit survives the exp-log path
        assert B.eval(complex(zeros[5])) == 0.0

    def test_rotation_equivariance(self):
        zeros = np.array([0.5, -0.3 + 0.2j])
        w = np.exp(0.7j)
        B = BlaschkeProduct(zeros)
        Brot = BlaschkeProduct(w * zeros)
        z = np.array([0.1, 0.2 - 0.5j, 0.8j])
        assert np.max(np.abs(Brot.eval(w * z) - B.eval(z))) <= 1e-12

    def test_empty_product_is_one(self):
        assert BlaschkeProduct(np.array([], dtype=complex)).eval(0.3) == 1.0


class TestDerivative:
    def test_single_factor_value(self):
        # B'(z) = (|a|/a)(|a|^2-1)/(1-conj(a) z)^2 at z=0 with a=0.5 gives -0.75
        assert BlaschkeProduct([0.5]).derivative(0.0) == pytest.approx(-0.75)

    def test_origin_zero(self):
        assert BlaschkeProduct([0.0]).derivative(0.77j) == pytest.approx(1.0)

    def test_matches_finite_differences(self):
        B = BlaschkeProduct([0.5, -0.5])
        fd = central_diff(B.eval, 0.0 + 0.0j)
        assert B.derivative(0.0) == pytest.approx(fd, abs=1e-8)

    def test_finite_at_zeros(self):
        B = BlaschkeProduct([0.5, -0.3 + 0.2j])
        val = B.derivative(0.5)
        fd = central_diff(B.eval, 0.5 + 0.0j, h=1e-7)
        assert val == pytest.approx(fd, abs=1e-7)

    def test_random_points_fd_oracle(self):
        rng = np.random.default_rng(9)
        B = BlaschkeProduct([0.4, -0.2 + 0.3j, 0.1 - 0.6j])
        for _ in range(10):
            z = 0.8 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            assert B.derivative(z) == pytest.approx(central_diff(B.eval, z), abs=1e-7)


class TestLogDerivative:
    def test_single_zero_value(self):
        # (0.25 - 1) / (0.5 * 1) = -1.5, also -0.75 / 0.5
        B = BlaschkeProduct([0.5])
        assert B.log_derivative(0.0) == pytest.approx(-1.5)

    def test_origin_zero(self):
        assert BlaschkeProduct([0.0]).log_derivative(0.5) == pytest.approx(2.0)

    def test_matches_derivative_over_eval(self):
        B = BlaschkeProduct([0.3, -0.4j])
        z = 0.1 + 0.1j
        want = B.derivative(z) / B.eval(z)
        assert B.log_derivative(z) == pytest.approx(want, abs=1e-10)

    def test_guard_names_offending_zero(self):
        B = BlaschkeProduct([0.5, -0.25j])
        with pytest.raises(BlaschkeZeroError) as err:
            B.log_derivative(-0.25j)
        assert err.value.index == 1

    def test_consistency_where_eval_large(self):
        rng = np.random.default_rng(4)
        B = BlaschkeProduct(gen_radial(0.5, 6).values)
        count = 0
        while count < 20:
            z = 0.97 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            b = B.eval(z)
            if abs(b) > 1e-8:
                assert B.log_derivative(z) == pytest.approx(B.derivative(z) / b, abs=1e-10)
                count += 1

    def test_sum_helper_matches(self):
        zeros = gen_radial(0.6, 5).values
        z = np.array([0.1j, -0.2 + 0.2j])
        B = BlaschkeProduct(zeros)
        assert np.allclose(log_derivative_sum(zeros, z), B.log_derivative(z))


class TestInnerMembership:
    def test_radial_zeros_member(self):
        B = BlaschkeProduct(gen_radial(0.5, 20).values)
        rep = inner_membership_test(B, p=0.6, s=0.5)
        assert rep.classification == BOUNDED
        assert rep.params["membership"] is True

    def test_clustered_zeros_not_member(self):
        B = BlaschkeProduct(gen_clustered(0.5, 0.9, 10).values)
        rep = inner_membership_test(B, p=0.6, s=0.5)
        assert rep.classification == DIVERGENT
        assert rep.params["membership"] is False

    def test_single_origin_zero(self):
        rep = inner_membership_test(BlaschkeProduct([0.0]), p=0.6, s=0.5)
        assert rep.classification == BOUNDED
        # at a = 0 the sigma-form sum is exactly 1
        assert rep.constant_estimate >= 1.0 - 1e-12

    def test_parameter_range_rejected(self):
        B = BlaschkeProduct([0.5])
        with pytest.raises(ValueError):
            inner_membership_test(B, p=0.4, s=0.5)
        with pytest.raises(ValueError):
            inner_membership_test(B, p=0.8, s=1.2)
