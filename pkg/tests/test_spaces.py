import math

import numpy as np
import pytest

from diskinterp.blaschke import BlaschkeProduct
from diskinterp.sequences import gen_radial
from diskinterp.spaces import (AnalyticFunction, ParameterError, QuadratureConfig,
                               SpaceParams, blaschke_fn, bloch_seminorm, bps_norm,
                               compose_with_mobius, const_fn, default_sup_net,
                               fpps_seminorm, hinf_norm, integrate_disk,
                               log_branch_fn, monomial_fn, multiplier_test,
                               power_series_fn)
from diskinterp.spaces import test_function as make_test_function
from diskinterp.spaces import test_function_norms as family_norms

CFG = QuadratureConfig()
LIGHT = QuadratureConfig(boundary_levels=12, max_angular=256)


class TestIntegrateDisk:
    def test_constant(self):
        res = integrate_disk(lambda z: np.ones(z.shape), CFG)
        assert res.value == pytest.approx(1.0, rel=1e-12)
        assert res.converged

    def test_modulus_squared(self):
        res = integrate_disk(lambda z: np.abs(z) ** 2, CFG)
        assert res.value == pytest.approx(0.5, rel=1e-12)

    def test_boundary_singular_weight(self):
        res = integrate_disk(lambda z: (1 - np.abs(z) ** 2) ** -0.5, CFG)
        assert res.value == pytest.approx(2.0, rel=1e-6)
        assert res.converged

    def test_polynomial_radial_weight(self):
        # int 4|z|^2 (1-|z|^2) dA = 2/3
        res = integrate_disk(lambda z: 4 * np.abs(z) ** 2 * (1 - np.abs(z) ** 2), CFG)
        assert res.value == pytest.approx(2.0 / 3.0, rel=1e-12)

    def test_angular_dependence(self):
        # int (1 + Re z) dA = 1 (the odd part integrates to zero)
        res = integrate_disk(lambda z: 1.0 + np.real(z), CFG)
        assert res.value == pytest.approx(1.0, rel=1e-12)

    def test_interior_singularity_refinement(self):
        # int |z - a|^(-1) dA = (4/pi) E(a^2) (complete elliptic integral,
        # from the polar representation around the singular point)
        a = 0.5
        res = integrate_disk(lambda z: np.abs(z - a) ** -1.0, CFG,
                             singular_points=[a])
        exact = 1.8682519122674772
        assert res.value == pytest.approx(exact, rel=1e-3)
        assert res.converged


class TestSpaceParams:
    def test_besov_rejects_trivial_range(self):
        with pytest.raises(ParameterError):
            SpaceParams(0.5, 0.5).require_besov()
        SpaceParams(0.5, 0.6).require_besov()

    def test_fpps_rejects(self):
        with pytest.raises(ParameterError):
            SpaceParams(0.4, 0.6).require_fpps()
        SpaceParams(0.6, 0.5).require_fpps()

    def test_small_exponent_regime(self):
        SpaceParams(0.6, 0.5, 1.0).require_small_exponent_regime()
        with pytest.raises(ParameterError):
            SpaceParams(1.2, 0.5).require_small_exponent_regime()
        with pytest.raises(ParameterError):
            SpaceParams(0.6, 0.5, -1.0).require_small_exponent_regime()


class TestAnalyticFunctions:
    @pytest.mark.parametrize("fn", [monomial_fn(3), log_branch_fn(),
                                    power_series_fn([1, 0.5, -0.25j]),
                                    blaschke_fn(BlaschkeProduct([0.4, -0.2j]))])
    def test_derivative_consistency(self, fn):
        rng = np.random.default_rng(12)
        h = 1e-6
        for _ in range(8):
            z = 0.7 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            fd = (fn.f(np.array([z + h]))[0] - fn.f(np.array([z - h]))[0]) / (2 * h)
            df = fn.df(np.array([z]))[0]
            assert abs(df - fd) <= 1e-6 * max(1.0, abs(df))

    def test_compose_with_mobius_is_zero_at_origin(self):
        g = compose_with_mobius(monomial_fn(2), 0.3 + 0.2j)
        assert abs(g.f(np.zeros(1, dtype=complex))[0]) <= 1e-14


class TestBesovNorm:
    def test_constant(self):
        res = bps_norm(const_fn(2 + 1j), SpaceParams(1.0, 1.0), LIGHT)
        assert res.value == pytest.approx(abs(2 + 1j), rel=1e-12)

    def test_identity_p1_s1(self):
        res = bps_norm(monomial_fn(1), SpaceParams(1.0, 1.0), LIGHT)
        assert res.value == pytest.approx(1.0, rel=1e-10)

    def test_square_p2_s1(self):
        res = bps_norm(monomial_fn(2), SpaceParams(2.0, 1.0), LIGHT)
        assert res.value == pytest.approx(math.sqrt(2.0 / 3.0), rel=1e-10)

    def test_homogeneity(self):
        f = power_series_fn([0.3, 1.0, -0.5])
        lam = 2.5
        g = power_series_fn([lam * 0.3, lam * 1.0, -lam * 0.5])
        params = SpaceParams(1.0, 0.7)
        a = bps_norm(f, params, LIGHT).value
        b = bps_norm(g, params, LIGHT).value
        assert b == pytest.approx(lam * a, rel=1e-10)


class TestFpps:
    def test_constant_is_zero(self):
        rep = fpps_seminorm(const_fn(5.0), SpaceParams(0.6, 0.5), config=LIGHT)
        assert rep.value == 0.0

    def test_identity_at_origin_closed_form(self):
        # at a=0 the integral is int (1-|z|^2)^(p-2+s) dA = 1/(p-1+s)
        rep = fpps_seminorm(monomial_fn(1), SpaceParams(0.6, 0.5),
                            net=np.array([0.0 + 0.0j]), config=CFG)
        assert rep.value ** 0.6 == pytest.approx(10.0, rel=1e-5)

    def test_log_branch_bounded(self):
        rep = fpps_seminorm(log_branch_fn(), SpaceParams(1.0, 0.5), config=LIGHT)
        assert rep.classification == "BOUNDED"
        assert rep.value > 0.0

    def test_homogeneity(self):
        params = SpaceParams(0.8, 0.5)
        f = power_series_fn([0.0, 1.0, 0.25j])
        g = power_series_fn([0.0, 3.0, 0.75j])
        net = default_sup_net(f)
        a = fpps_seminorm(f, params, net=net, config=LIGHT).value
        b = fpps_seminorm(g, params, net=net, config=LIGHT).value
        assert b == pytest.approx(3.0 * a, rel=1e-9)

    def test_mobius_invariance_blaschke(self):
        # || f o sigma_b - f(sigma_b(0)) || = || f || for finite Blaschke f
        params = SpaceParams(0.8, 0.5)
        f = blaschke_fn(BlaschkeProduct([0.4, -0.3j]))
        b = 0.35 - 0.2j
        g = compose_with_mobius(f, b)
        net = default_sup_net(f, max_depth=4)
        from diskinterp.mobius import mobius_transform
        net_g = mobius_transform(b, net)
        rep_f = fpps_seminorm(f, params, net=net_g, config=LIGHT)
        rep_g = fpps_seminorm(g, params, net=net, config=LIGHT)
        assert rep_g.value == pytest.approx(rep_f.value, rel=2 * LIGHT.rel_tol)

    def test_inclusion_surrogate(self):
        # BOUNDED at (p, s) must imply BOUNDED at (2, s) on the same family
        params_small = SpaceParams(0.6, 0.5)
        params_two = SpaceParams(2.0, 0.5)
        for zeros in ([0.5], gen_radial(0.5, 8).values):
            f = blaschke_fn(BlaschkeProduct(zeros))
            small = fpps_seminorm(f, params_small, config=LIGHT)
            if small.classification == "BOUNDED":
                assert fpps_seminorm(f, params_two, config=LIGHT).classification == "BOUNDED"


class TestSupNorms:
    def test_bloch_identity(self):
        assert bloch_seminorm(monomial_fn(1)) == pytest.approx(1.0)

    def test_bloch_constant(self):
        assert bloch_seminorm(const_fn(9)) == 0.0

    def test_bloch_single_blaschke_factor(self):
        # (1-|z|^2)|B'| = invariant weight, maximized (=1) exactly at the zero
        val = bloch_seminorm(blaschke_fn(BlaschkeProduct([0.5])))
        assert val == pytest.approx(1.0, abs=1e-12)

    def test_hinf_identity(self):
        rep = hinf_norm(monomial_fn(1))
        assert rep.value == pytest.approx(1.0, abs=1e-9)
        assert rep.classification == "BOUNDED"

    def test_hinf_blaschke_inner(self):
        rep = hinf_norm(blaschke_fn(BlaschkeProduct([0.5, -0.3 + 0.2j])))
        assert rep.value == pytest.approx(1.0, abs=1e-10)
        assert rep.classification == "BOUNDED"

    def test_hinf_log_divergent(self):
        rep = hinf_norm(log_branch_fn())
        assert rep.classification == "DIVERGENT"


class TestTestFunctions:
    def test_at_origin_norm_one(self):
        res = family_norms([0.0], SpaceParams(2.0, 0.5), LIGHT)
        assert res[0].value == pytest.approx(1.0, rel=1e-10)

    def test_uniformly_bounded_toward_boundary(self):
        params = SpaceParams(2.0, 0.5)
        a_list = [1.0 - 2.0 ** (-j) for j in range(1, 7)]
        vals = [r.value for r in family_norms(a_list, params, LIGHT)]
        assert max(vals) < 10.0
        # deep-vs-deeper ratio stays moderate
        assert 0.5 <= vals[-1] / vals[-2] <= 2.0

    def test_parameter_guard(self):
        with pytest.raises(ParameterError):
            make_test_function(0.5, p=1.0, s=0.5)


class TestMultiplier:
    def test_constant_member(self):
        rep = multiplier_test(const_fn(3.0), SpaceParams(1.0, 0.5), LIGHT)
        assert rep.verdict == "MEMBER"

    def test_single_blaschke_member(self):
        rep = multiplier_test(blaschke_fn(BlaschkeProduct([0.5])),
                              SpaceParams(1.0, 0.5), LIGHT)
        assert rep.verdict == "MEMBER"
        assert rep.discretization_stable

    def test_log_branch_not_member(self):
        rep = multiplier_test(log_branch_fn(), SpaceParams(0.6, 0.5), LIGHT)
        assert rep.verdict == "NOT_MEMBER"
        assert rep.hinf.classification == "DIVERGENT"
