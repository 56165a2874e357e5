import numpy as np
import pytest

from diskinterp.blaschke import BlaschkeProduct
from diskinterp.earl import (EarlError, EarlSolution, InterpolationProblem,
                             earl_interpolate, verify_perturbation_comparabilities)
from diskinterp.sequences import DiskSequence


def separated_nodes(n, seed, min_rho=0.45):
    """Seeded node sets with pairwise pseudo-hyperbolic distance >= min_rho."""
    rng = np.random.default_rng(seed)
    radii = [0.0, 0.45, 0.72, 0.88]
    pts = []
    k = 0
    while len(pts) < n and k < 5000:
        k += 1
        c = radii[k % len(radii)] * np.exp(2j * np.pi * rng.uniform())
        if all(abs(c - q) / abs(1 - np.conj(q) * c) > min_rho for q in pts):
            pts.append(c)
    assert len(pts) == n
    return np.array(pts)


class TestProblem:
    def test_delta_computed(self):
        p = InterpolationProblem([0.5, -0.5], [1.0, 2.0])
        assert p.delta == pytest.approx(0.8)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            InterpolationProblem([0.5], [1.0, 2.0])

    def test_json_roundtrip(self):
        p = InterpolationProblem([0.5, -0.5j], [1.0, 2.0 - 1.0j])
        q = InterpolationProblem.from_json_obj(p.to_json_obj())
        assert np.array_equal(q.nodes.values, p.nodes.values)
        assert np.array_equal(q.values, p.values)


class TestSolver:
    def test_single_node_zero_value(self):
        sol = earl_interpolate(InterpolationProblem([0.0], [0.0]))
        assert sol.residuals.max() == 0.0
        assert np.array_equal(sol.perturbed_zeros.values, [0.0 + 0.0j])

    def test_all_zero_values_return_nodes(self):
        nodes = [0.5, -0.5, 0.3j]
        sol = earl_interpolate(InterpolationProblem(nodes, [0.0, 0.0, 0.0]))
        assert sol.iterations == 0
        assert np.array_equal(sol.perturbed_zeros.values, np.asarray(nodes, complex))
        assert sol.scale == 0.0

    def test_two_nodes_small_values(self):
        p = InterpolationProblem([0.5, -0.5], [0.01, -0.01j])
        sol = earl_interpolate(p, tol=1e-10)
        assert sol.residuals.max() <= 1e-10
        assert sol.max_perturbation <= p.delta / 3 + 1e-12
        # certificate via the independent evaluator
        B = BlaschkeProduct(sol.perturbed_zeros.values)
        f = lambda z: sol.scale * B.eval(z)
        assert abs(f(0.5) - 0.01) <= 1e-10
        assert abs(f(-0.5) + 0.01j) <= 1e-10

    def test_two_node_dense_sweep_oracle(self):
        # compare against a brute parameter sweep over (zeta1, zeta2) for the
        # best achievable residual at the solver's scale
        p = InterpolationProblem([0.5, -0.5], [0.02, 0.01])
        sol = earl_interpolate(p, tol=1e-10)
        assert sol.residuals.max() <= 1e-10
        # sweep confirms a solution with comparable perturbation exists
        ts = np.linspace(-0.1, 0.1, 41)
        best = np.inf
        for d1 in ts:
            for d2 in ts:
                zeta = np.array([0.5 + d1, -0.5 + d2])
                B = BlaschkeProduct(zeta)
                vals = sol.scale * B.eval(np.array([0.5, -0.5]))
                best = min(best, np.max(np.abs(vals - p.values)))
        assert best <= 0.01  # coarse sweep gets close; solver got to 1e-10

    @pytest.mark.parametrize("n", [2, 4, 8, 12])
    def test_seeded_batteries(self, n):
        rng = np.random.default_rng(100 + n)
        nodes = separated_nodes(n, seed=n)
        values = rng.normal(size=n) + 1j * rng.normal(size=n)
        p = InterpolationProblem(nodes, values)
        sol = earl_interpolate(p, tol=1e-10)
        B = BlaschkeProduct(sol.perturbed_zeros.values)
        res = np.max(np.abs(sol.scale * B.eval(nodes) - values))
        assert res <= 1e-8
        assert sol.max_perturbation <= p.delta / 3 + 1e-12

    def test_rotation_equivariance(self):
        nodes = separated_nodes(6, seed=17)
        rng = np.random.default_rng(5)
        values = rng.normal(size=6) + 1j * rng.normal(size=6)
        sol = earl_interpolate(InterpolationProblem(nodes, values), tol=1e-10)
        theta = 0.9
        rot = np.exp(1j * theta)
        sol_r = earl_interpolate(InterpolationProblem(rot * nodes, values), tol=1e-10)
        dev = np.max(np.abs(sol_r.perturbed_zeros.values - rot * sol.perturbed_zeros.values))
        assert dev <= 1e-10
        assert np.max(np.abs(sol_r.residuals)) <= 1e-10

    def test_value_phase_equivariance(self):
        nodes = separated_nodes(5, seed=23)
        rng = np.random.default_rng(6)
        values = rng.normal(size=5) + 1j * rng.normal(size=5)
        sol = earl_interpolate(InterpolationProblem(nodes, values), tol=1e-10)
        phi = np.exp(0.4j)
        sol_p = earl_interpolate(InterpolationProblem(nodes, phi * values), tol=1e-10)
        assert np.max(np.abs(sol_p.perturbed_zeros.values
                             - sol.perturbed_zeros.values)) <= 1e-10
        assert abs(sol_p.scale - phi * sol.scale) <= 1e-10 * abs(sol.scale)

    def test_interpolant_bounded_by_scale(self):
        nodes = separated_nodes(4, seed=2)
        values = np.array([0.5, -0.25j, 0.1, 0.3 + 0.1j])
        sol = earl_interpolate(InterpolationProblem(nodes, values), tol=1e-10)
        f = sol.interpolant()
        rng = np.random.default_rng(0)
        z = 0.99 * np.sqrt(rng.uniform(size=300)) * np.exp(2j * np.pi * rng.uniform(size=300))
        assert np.max(np.abs(f(z))) <= abs(sol.scale) * (1 + 1e-12)

    def test_duplicate_nodes_rejected(self):
        with pytest.raises(EarlError) as err:
            earl_interpolate(InterpolationProblem([0.5, 0.5], [1.0, 1.0]))
        assert err.value.code == "NOT_UNIFORMLY_SEPARATED"

    def test_node_cap(self):
        nodes = separated_nodes(12, seed=1)
        too_many = np.concatenate([nodes, [0.99 * np.exp(2.9j), 0.99 * np.exp(4.1j),
                                           0.95 * np.exp(5.3j), 0.97 * np.exp(0.7j),
                                           0.93 * np.exp(1.9j)]])
        with pytest.raises(ValueError):
            earl_interpolate(InterpolationProblem(too_many, np.ones(17)))


class TestComparabilities:
    def test_identity_case(self):
        nodes = DiskSequence([0.5, 0.75])
        rep = verify_perturbation_comparabilities(nodes, nodes)
        assert rep["max_rho"] == 0.0
        assert rep["gap_ratio"] == [1.0, 1.0]
        # |1 - conj(z) z| = 1 - |z|^2 in [1-|z|, 2(1-|z|)): ratio in [1/2, 1]
        lo, hi = rep["gap_vs_cross"]
        assert 0.5 <= lo <= hi <= 1.0
        assert rep["kernel_ratio"] == [1.0, 1.0]

    def test_radial_shift(self):
        nodes = DiskSequence(np.array([0.5, 0.75, 0.875], dtype=complex))
        # shift each node by pseudo-hyperbolic distance 0.2 along the radius
        shifted = DiskSequence((nodes.values + 0.2 * (1 - np.abs(nodes.values) ** 2)
                                / (1 + 0.2 * np.abs(nodes.values))))
        rep = verify_perturbation_comparabilities(nodes, shifted)
        for key in ("gap_ratio", "gap_vs_cross", "zero_gap_vs_cross", "kernel_ratio"):
            lo, hi = rep[key]
            assert 1.0 / 6.0 <= lo <= hi <= 6.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            verify_perturbation_comparabilities(DiskSequence([0.1]),
                                                DiskSequence([0.1, 0.2]))
