import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diskinterp.mobius import (DiskDomainError, DiskPoint, Rotation,
                               invariant_weight, mobius_transform,
                               pseudo_hyperbolic)


def disk_points(max_radius=0.99):
    return st.builds(
        lambda r, t: complex(r * np.cos(2 * np.pi * t), r * np.sin(2 * np.pi * t)),
        st.floats(0.0, max_radius), st.floats(0.0, 1.0))


class TestDiskPoint:
    def test_interior_accepted(self):
        assert DiskPoint(0.3 + 0.4j).value == 0.3 + 0.4j

    @pytest.mark.parametrize("z", [1.0, -1.0, 1.0 + 0.0j, 0.8 + 0.7j, 2.0])
    def test_boundary_and_exterior_rejected(self, z):
        with pytest.raises(DiskDomainError):
            DiskPoint(z)

    def test_nan_rejected(self):
        with pytest.raises(DiskDomainError):
            DiskPoint(complex(float("nan"), 0.0))

    def test_rim_flagging(self):
        assert DiskPoint(1.0 - 1e-15).flagged
        assert not DiskPoint(0.9).flagged

    def test_rotation_requires_finite_angle(self):
        with pytest.raises(ValueError):
            Rotation(float("inf"))
        assert Rotation(np.pi / 2).apply(0.5) == pytest.approx(0.5j)


class TestExamples:
    def test_sigma_at_zero_is_a(self):
        a = 0.3 - 0.2j
        assert mobius_transform(a, 0.0) == pytest.approx(a)

    def test_sigma_at_a_is_zero(self):
        a = 0.3 - 0.2j
        assert mobius_transform(a, a) == pytest.approx(0.0)

    def test_sigma_half_at_minus_half(self):
        assert mobius_transform(0.5, -0.5) == pytest.approx(0.8)

    def test_rho_from_origin_is_modulus(self):
        z = 0.3 + 0.4j
        assert pseudo_hyperbolic(0.0, z) == pytest.approx(0.5)

    def test_rho_examples(self):
        assert pseudo_hyperbolic(0.5, 0.5) == 0.0
        assert pseudo_hyperbolic(0.5, 0.75) == pytest.approx(0.4)

    def test_weight_examples(self):
        z = 0.6j
        assert invariant_weight(0.0, z) == pytest.approx(1 - 0.36)
        assert invariant_weight(0.3 + 0.1j, 0.3 + 0.1j) == pytest.approx(1.0)
        assert invariant_weight(0.5, -0.5) == pytest.approx(0.36)
        # same thing computed the subtractive way
        assert invariant_weight(0.5, -0.5) == pytest.approx(1.0 - 0.8 ** 2)

    def test_accepts_diskpoint_wrappers(self):
        a, z = DiskPoint(0.5), DiskPoint(-0.5)
        assert mobius_transform(a, z) == pytest.approx(0.8)

    def test_broadcasts(self):
        z = np.array([0.0, 0.1j, -0.5])
        out = mobius_transform(0.5, z)
        assert out.shape == (3,)
        assert out[2] == pytest.approx(0.8)


class TestInvariants:
    @given(disk_points(), disk_points())
    @settings(max_examples=300, deadline=None)
    def test_garnett_identity(self, a, z):
        w = invariant_weight(a, z)
        rho = pseudo_hyperbolic(a, z)
        assert abs(w + rho ** 2 - 1.0) <= 1e-12

    @given(disk_points(), disk_points())
    @settings(max_examples=300, deadline=None)
    def test_involution(self, a, z):
        assert abs(mobius_transform(a, mobius_transform(a, z)) - z) <= 1e-12

    @given(disk_points(), disk_points(), disk_points())
    @settings(max_examples=300, deadline=None)
    def test_mobius_invariance_of_rho(self, a, z, c):
        lhs = pseudo_hyperbolic(mobius_transform(c, a), mobius_transform(c, z))
        assert abs(lhs - pseudo_hyperbolic(a, z)) <= 1e-12

    @given(disk_points(), disk_points(), disk_points())
    @settings(max_examples=300, deadline=None)
    def test_triangle_type_bound(self, a, w, z):
        r_aw = pseudo_hyperbolic(a, w)
        r_wz = pseudo_hyperbolic(w, z)
        bound = (r_aw + r_wz) / (1.0 + r_aw * r_wz)
        assert pseudo_hyperbolic(a, z) <= bound + 1e-12

    def test_result_stays_in_disk(self):
        rng = np.random.default_rng(7)
        a = 0.99 * np.sqrt(rng.uniform(size=500)) * np.exp(2j * np.pi * rng.uniform(size=500))
        z = 0.99 * np.sqrt(rng.uniform(size=500)) * np.exp(2j * np.pi * rng.uniform(size=500))
        assert np.all(np.abs(mobius_transform(a, z)) < 1.0)
        w = invariant_weight(a, z)
        assert np.all((w > 0.0) & (w <= 1.0))
