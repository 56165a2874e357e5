import json
import math

import numpy as np
import pytest

from diskinterp.mobius import DiskDomainError, mobius_transform, pseudo_hyperbolic
from diskinterp.sequences import (DiskSequence, GeneratorCapError, blaschke_sum,
                                  gen_bwy_candidate, gen_clustered,
                                  gen_perturbed_radial, gen_radial, gen_stolz,
                                  point_depths, separation_constant,
                                  sequence_metrics, uniform_separation_constant)


def brute_separation(points):
    best = 1.0
    pts = list(points)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            best = min(best, abs(pts[i] - pts[j]) / abs(1 - np.conj(pts[i]) * pts[j]))
    return best


def brute_uniform(points):
    pts = list(points)
    worst = math.inf
    for m in range(len(pts)):
        prod = 1.0
        for n in range(len(pts)):
            if n != m:
                prod *= abs(pts[m] - pts[n]) / abs(1 - np.conj(pts[m]) * pts[n])
        worst = min(worst, prod)
    return worst


class TestConstants:
    def test_two_point_separation(self):
        assert separation_constant(DiskSequence([0.5, -0.5])) == pytest.approx(0.8)

    def test_duplicates_give_zero(self):
        seq = DiskSequence([0.3 + 0.1j, 0.3 + 0.1j])
        assert separation_constant(seq) == 0.0
        assert uniform_separation_constant(seq) == 0.0
        assert uniform_separation_constant(DiskSequence([0.2, 0.2, 0.5])) == 0.0
        report = sequence_metrics(seq)
        assert any("duplicate" in f for f in report.flags)

    def test_radial_tail_separation(self):
        seq = gen_radial(0.5, 20)
        got = separation_constant(seq)
        assert got == pytest.approx(brute_separation(seq.values))
        # consecutive-pair distance 1/(3 - 2^-n) approaches 1/3 from above
        assert got == pytest.approx(1.0 / (3.0 - 2.0 ** -19))

    def test_two_point_uniform_equals_rho(self):
        assert uniform_separation_constant(DiskSequence([0.5, -0.5])) == pytest.approx(0.8)

    def test_uniform_radial_regression(self):
        seq = gen_radial(0.5, 15)
        got = uniform_separation_constant(seq)
        assert got == pytest.approx(brute_uniform(seq.values), rel=1e-12)
        assert got == pytest.approx(0.015495597121861118, rel=1e-9)  # frozen baseline
        assert got > 0.0

    def test_uniform_below_separation(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            pts = 0.9 * np.sqrt(rng.uniform(size=6)) * np.exp(2j * np.pi * rng.uniform(size=6))
            seq = DiskSequence(pts)
            assert uniform_separation_constant(seq) <= separation_constant(seq) + 1e-15

    def test_mobius_invariance_of_constants(self):
        seq = gen_radial(0.6, 8)
        c = 0.3 - 0.44j
        moved = DiskSequence(mobius_transform(c, seq.values))
        assert separation_constant(moved) == pytest.approx(separation_constant(seq), abs=1e-10)
        assert uniform_separation_constant(moved) == pytest.approx(
            uniform_separation_constant(seq), abs=1e-10)

    def test_singleton_convention(self):
        seq = DiskSequence([0.2])
        assert separation_constant(seq) == 1.0
        report = sequence_metrics(seq)
        assert any("singleton" in f for f in report.flags)

    def test_blaschke_sums(self):
        assert blaschke_sum(DiskSequence([0.0])) == 1.0
        assert blaschke_sum(DiskSequence([0.5, 0.5j])) == pytest.approx(1.0)
        for n in (3, 10):
            assert blaschke_sum(gen_radial(0.5, n)) == pytest.approx(1 - 2.0 ** -n)


class TestGenerators:
    def test_radial_values(self):
        assert np.allclose(gen_radial(0.5, 3).values, [0.5, 0.75, 0.875])
        assert np.allclose(gen_radial(0.9, 1).values, [0.1])

    @pytest.mark.parametrize("q", [0.3, 0.5, 0.7])
    def test_radial_separation_lower_bound(self, q):
        seq = gen_radial(q, 15)
        bound = (1 - q) / (1 + q)
        assert separation_constant(seq) >= bound - 1e-9
        assert separation_constant(seq) == pytest.approx(brute_separation(seq.values))

    def test_radial_rejects_bad_params(self):
        with pytest.raises(ValueError):
            gen_radial(1.0, 5)
        with pytest.raises(ValueError):
            gen_radial(0.5, 0)

    def test_clustered_level_counts(self):
        seq = gen_clustered(0.5, 0.9, 1)
        assert len(seq) == 2  # ceil(2^0.9)
        assert np.allclose(np.abs(seq.values), 0.5)
        seq2 = gen_clustered(0.5, 0.9, 3)
        counts = [int(np.sum(np.isclose(np.abs(seq2.values), 1 - 2.0 ** -k)))
                  for k in (1, 2, 3)]
        assert counts == [2, 4, 7]  # ceil(2^{0.9k})

    def test_clustered_cap(self):
        with pytest.raises(GeneratorCapError):
            gen_clustered(0.5, 1.5, 15)

    def test_bwy_structure(self):
        seq = gen_bwy_candidate(0.5, 4)
        depths = point_depths(seq.values)
        assert set(np.round(depths, 6)) == {2.0, 4.0, 6.0, 8.0}
        # count profile: about cal * 2^(sk) / sqrt(kappa+1) points per level
        for kappa in (2, 3, 4):
            k = 2 * kappa
            n = int(np.sum(np.isclose(depths, k)))
            assert n == int(2.0 ** (0.5 * k) / math.sqrt(kappa + 1))
        # anchor window property: about 2^(s(k-m)) / sqrt(j+1) points inside [0, 2^-m)
        theta = np.mod(np.angle(seq.values) / (2 * np.pi), 1.0)
        lvl4 = np.isclose(depths, 8.0)
        inside = int(np.sum(theta[lvl4] < 2.0 ** -4))
        assert 1 <= inside <= 6  # profile value 2^2/sqrt(3) ~ 2.3

    def test_bwy_rejects_bad_params(self):
        with pytest.raises(ValueError):
            gen_bwy_candidate(1.0, 5)
        with pytest.raises(ValueError):
            gen_bwy_candidate(0.5, 30)  # deeper than float64 budget

    def test_stolz_cone(self):
        seq = gen_stolz(0.5, 12, slope=0.5)
        gaps = 1 - np.abs(seq.values)
        cone = np.abs(1 - seq.values) / gaps
        assert np.all(cone <= math.sqrt(1 + 0.5 ** 2) + 0.1)
        assert separation_constant(seq) > 0.2

    def test_perturbed_radial(self):
        base = gen_radial(0.5, 10)
        pert = gen_perturbed_radial(0.5, 10, magnitude=0.15, seed=5)
        rho = pseudo_hyperbolic(base.values, pert.values)
        assert np.all(rho <= 0.15 + 1e-12)
        # deterministic for equal seeds
        again = gen_perturbed_radial(0.5, 10, magnitude=0.15, seed=5)
        assert np.array_equal(pert.values, again.values)


class TestSerialization:
    def test_text_roundtrip_bit_exact(self):
        pts = [1 - 2.0 ** -24, 0.123456789012345678 + 0.9j,
               complex(-0.7071067811865476, 0.1)]
        seq = DiskSequence(pts, label="tricky")
        back = DiskSequence.from_text(seq.to_text())
        assert np.array_equal(seq.values, back.values)

    def test_text_comments_ignored(self):
        text = "# header\n0.5 0.0  # trailing\n\n-0.25 0.125\n"
        seq = DiskSequence.from_text(text)
        assert np.array_equal(seq.values, [0.5 + 0j, -0.25 + 0.125j])

    def test_json_roundtrip(self, tmp_path):
        seq = gen_perturbed_radial(0.7, 9, seed=2)
        path = tmp_path / "seq.json"
        seq.save(path)
        back = DiskSequence.load(path)
        assert np.array_equal(seq.values, back.values)
        assert back.label == seq.label
        # file is plain JSON with [re, im] pairs
        obj = json.loads(path.read_text())
        assert len(obj["points"]) == 9

    def test_text_file_roundtrip(self, tmp_path):
        seq = gen_radial(0.3, 7)
        path = tmp_path / "seq.txt"
        seq.save(path)
        assert np.array_equal(DiskSequence.load(path).values, seq.values)

    def test_rejects_exterior_points(self):
        with pytest.raises(DiskDomainError):
            DiskSequence([0.5, 1.5])
        with pytest.raises(ValueError):
            DiskSequence([])

    def test_truncate_depth(self):
        seq = gen_radial(0.5, 10)
        trunc = seq.truncate_depth(4.0)
        assert len(trunc) == 4
