"""Numerical s-Carleson tests for point-mass measures on the unit disk.

Three routes are implemented: dyadic Carleson boxes, the two-exponent kernel
criterion, and the ratio form tied to Carleson measures for the Besov-type
spaces.  "Is mu an s-Carleson measure" is undecidable for a finite truncation,
so every test reports a constant together with a growth classification over a
doubling ladder of truncation depths; the per-level data always ships with the
verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .mobius import as_complex, invariant_weight
from .sequences import DiskSequence, point_depths

__all__ = [
    "BOUNDED",
    "DIVERGENT",
    "INCONCLUSIVE",
    "ClassifierConfig",
    "classify_growth",
    "depth_ladder",
    "PointMassMeasure",
    "CarlesonReport",
    "weights_from_sequence",
    "box_constant",
    "kernel_constant",
    "kernel_sigma_values",
    "bps_carleson_ratio",
    "build_net",
]

BOUNDED = "BOUNDED"
DIVERGENT = "DIVERGENT"
INCONCLUSIVE = "INCONCLUSIVE"

MAX_GENERATION_CAP = 60


@dataclass(frozen=True)
class ClassifierConfig:
    """Thresholds for the growth classifier (defaults documented in README).

    slope_bounded / slope_divergent bracket the final refinement rate
    d log(value) / d log2(depth).  A family whose rates decay geometrically
    (ratio <= decay_ratio_max) with extrapolated remaining growth below
    extrapolation_cap is also accepted as BOUNDED and flagged `extrapolated`.
    """

    slope_bounded: float = 0.02
    slope_divergent: float = 0.1
    decay_ratio_max: float = 0.85
    extrapolation_cap: float = 0.5


def classify_growth(levels, config: ClassifierConfig = ClassifierConfig()):
    """Classify a ladder of (x, value) pairs.

    Returns (classification, growth_slope, stabilized, extrapolated) where
    growth_slope is the final refinement rate.
    """
    merged = {}
    for x, v in levels:
        if v > 0.0 and math.isfinite(v):
            x = float(x)
            merged[x] = max(merged.get(x, 0.0), float(v))
    pts = sorted(merged.items())
    if not pts:
        return BOUNDED, 0.0, True, False
    if len(pts) == 1:
        return BOUNDED, 0.0, False, False
    xs = np.array([p[0] for p in pts])
    vs = np.array([p[1] for p in pts])
    rates = np.diff(np.log(vs)) / np.diff(xs)
    slope = float(rates[-1])
    stabilized = len(rates) >= 2 and abs(rates[-2]) < 3.0 * config.slope_bounded
    if slope < config.slope_bounded:
        return BOUNDED, slope, stabilized or len(rates) == 1, False
    if len(rates) >= 3:
        r1, r2, r3 = rates[-3], rates[-2], rates[-1]
        # geometric decay of the refinement rates: compare the last rate to the
        # mean of its two predecessors (robust to one noisy inversion); the
        # families this must exclude (power, sqrt, log growth) have ratios
        # near or above 1, or an extrapolated remainder far above the cap
        if r1 > 0.0 and r2 > 0.0 and r3 > 0.0 and r3 < min(r1, r2):
            ratio = r3 / (0.5 * (r1 + r2))
            if ratio <= config.decay_ratio_max:
                remaining = r3 * ratio / (1.0 - ratio)
                if remaining < config.extrapolation_cap:
                    return BOUNDED, slope, False, True
    if slope > config.slope_divergent:
        return DIVERGENT, slope, False, False
    return INCONCLUSIVE, slope, False, False


def depth_ladder(depths, min_log2_gap: float = 0.35):
    """Truncation-depth ladder built from the measure's own depth structure.

    Greedily picks atom depths so consecutive picks are at least min_log2_gap
    apart in log2; the deepest atom always terminates the ladder (absorbing a
    final fractional step, which would otherwise produce a noisy rate).
    """
    d = np.unique(np.round(np.maximum(np.atleast_1d(np.asarray(depths, float)), 0.5), 6))
    if d.size == 0:
        return []
    ds = [float(d[0])]
    for v in d[1:]:
        if math.log2(v / ds[-1]) >= min_log2_gap:
            ds.append(float(v))
    last = float(d[-1])
    if last > ds[-1]:
        if math.log2(last / ds[-1]) >= min_log2_gap or len(ds) == 1:
            ds.append(last)
        else:
            ds[-1] = last
    return ds


@dataclass
class PointMassMeasure:
    """Finite nonnegative combination of point masses at interior points."""

    points: np.ndarray
    weights: np.ndarray

    def __init__(self, points, weights):
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        w = np.atleast_1d(np.asarray(weights, dtype=float))
        if pts.shape != w.shape:
            raise ValueError("points and weights must have equal length")
        if pts.size and np.any(np.abs(pts) >= 1.0):
            raise ValueError("all atoms must lie strictly inside the disk")
        if np.any(~np.isfinite(w)) or np.any(w < 0.0):
            raise ValueError("weights must be finite and nonnegative")
        order = np.argsort(point_depths(pts), kind="stable") if pts.size else np.array([], int)
        self.points = pts[order]
        self.weights = w[order]

    def __len__(self):
        return self.points.size

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum()) if len(self) else 0.0

    @property
    def depths(self) -> np.ndarray:
        return point_depths(self.points)

    def prefix_sizes(self, ladder):
        """Number of atoms with depth <= d for each ladder depth d."""
        d = self.depths
        return [int(np.searchsorted(d, di + 1e-6, side="right")) for di in ladder]

    @classmethod
    def empty(cls):
        return cls(np.array([], dtype=complex), np.array([], dtype=float))


def weights_from_sequence(seq, s: float) -> PointMassMeasure:
    """The measure sum_n (1-|z_n|^2)^s * delta_{z_n}."""
    if s <= 0.0:
        raise ValueError(f"s must be positive, got {s}")
    z = np.asarray(seq.values if isinstance(seq, DiskSequence) else seq, dtype=complex)
    return PointMassMeasure(z, (1.0 - np.abs(z) ** 2) ** s)


@dataclass
class CarlesonReport:
    test: str
    constant_estimate: float
    witness: dict
    classification: str
    growth_slope: float
    stabilized: bool
    extrapolated: bool
    levels: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "test": self.test,
            "constant": self.constant_estimate,
            "witness": self.witness,
            "classification": self.classification,
            "slope": self.growth_slope,
            "stabilized": self.stabilized,
            "extrapolated": self.extrapolated,
            "levels": [[x, v] for x, v in self.levels],
            "params": self.params,
        }


def _report(test, constant, witness, ladder_vals, params, config):
    cls_, slope, stab, extra = classify_growth(ladder_vals, config)
    return CarlesonReport(test=test, constant_estimate=constant, witness=witness,
                          classification=cls_, growth_slope=slope, stabilized=stab,
                          extrapolated=extra, levels=ladder_vals, params=params)


# -- dyadic box test ---------------------------------------------------------

def _box_scan(points, weights, s, max_generation):
    """Sup over dyadic boxes of mu(S(I)) / |I|^s, with the maximizing box.

    S(I) uses the closed inner edge 1-|I| <= r < 1 so that an atom exactly at
    radius 1-|I| belongs to the box over I.
    """
    if points.size == 0:
        return 0.0, {}
    r = np.abs(points)
    theta = np.mod(np.angle(points) / (2.0 * np.pi), 1.0)
    best = -1.0
    best_box = {}
    for g in range(max_generation + 1):
        size = 2.0 ** (-g)
        mask = r >= 1.0 - size - 1e-15
        if not np.any(mask):
            continue
        idx = np.minimum((theta[mask] * 2.0 ** g).astype(np.int64), 2 ** g - 1)
        sums = np.bincount(idx, weights=weights[mask], minlength=2 ** g)
        j = int(np.argmax(sums))
        ratio = sums[j] * size ** (-s)
        if ratio > best:
            best = float(ratio)
            best_box = {"generation": g, "index": j, "arc_start": j * size,
                        "arc_length": size, "ratio": float(ratio)}
    return max(best, 0.0), best_box


def box_constant(mu: PointMassMeasure, s: float, max_generation: int | None = None,
                 config: ClassifierConfig = ClassifierConfig()) -> CarlesonReport:
    """Dyadic-box s-Carleson test with growth classification over truncations."""
    if s <= 0.0:
        raise ValueError(f"s must be positive, got {s}")
    if len(mu) == 0:
        return _report("box", 0.0, {}, [], {"s": s, "max_generation": 0}, config)
    max_depth = float(mu.depths.max())
    if max_generation is None:
        max_generation = min(MAX_GENERATION_CAP, int(math.ceil(max_depth)) + 2)
    if max_generation < 1:
        raise ValueError("max_generation must be >= 1")
    constant, witness = _box_scan(mu.points, mu.weights, s, max_generation)
    ladder = depth_ladder(mu.depths)
    cuts = mu.prefix_sizes(ladder)
    vals = []
    for d, n in zip(ladder, cuts):
        gen = min(max_generation, int(math.ceil(d)) + 2)
        v, _ = _box_scan(mu.points[:n], mu.weights[:n], s, gen)
        vals.append((math.log2(d), v))
    return _report("box", constant, witness, vals,
                   {"s": s, "max_generation": max_generation}, config)


# -- kernel test -------------------------------------------------------------

def build_net(points, ray_angle_cap: int = 96, hyper_base: int = 8,
              hyper_depth: int = 8, include_atoms: int = 1024) -> np.ndarray:
    """Sampling net: atoms, radial rays through atom angles, hyperbolic net.

    The sup in the kernel criterion is approached near accumulation points of
    the atoms, so rays through their angles at dyadic radii are essential.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    parts = []
    if pts.size:
        depth_cap = int(min(50, math.ceil(point_depths(pts).max()) + 1))
        angles = np.unique(np.mod(np.angle(pts) / (2.0 * np.pi), 1.0))
        if angles.size > ray_angle_cap:
            stride = int(math.ceil(angles.size / ray_angle_cap))
            angles = angles[::stride]
        radii = 1.0 - 2.0 ** (-np.arange(1, depth_cap + 1, dtype=float))
        parts.append((radii[:, None] * np.exp(2j * np.pi * angles[None, :])).ravel())
        if pts.size > include_atoms:
            stride = int(math.ceil(pts.size / include_atoms))
            parts.append(pts[::stride])
        else:
            parts.append(pts)
    for j in range(1, hyper_depth + 1):
        n = hyper_base * min(2 ** j, 64)
        ang = (np.arange(n) + 0.5) / n
        parts.append((1.0 - 2.0 ** (-j)) * np.exp(2j * np.pi * ang))
    parts.append(np.array([0.0 + 0.0j]))
    return np.concatenate(parts)


def _ladder_max_over_net(terms_fn, net, n_atoms, cuts, chunk_target=4_000_000):
    """max over the net of prefix sums of per-atom terms, at each ladder cut.

    terms_fn(w_chunk) must return an array of shape (len(w_chunk), n_atoms)
    whose rows are the atom terms for each net point, in atom (depth) order.
    """
    cuts = np.asarray(cuts, dtype=int)
    best = np.zeros(len(cuts))
    best_w = np.full(len(cuts), np.nan, dtype=complex)
    chunk = max(1, int(chunk_target // max(n_atoms, 1)))
    for start in range(0, len(net), chunk):
        w = net[start:start + chunk]
        t = terms_fn(w)
        csum = np.cumsum(t, axis=1)
        for i, c in enumerate(cuts):
            if c == 0:
                continue
            col = csum[:, c - 1]
            j = int(np.argmax(col))
            if col[j] > best[i]:
                best[i] = float(col[j])
                best_w[i] = w[j]
    return best, best_w


def kernel_constant(mu: PointMassMeasure, s: float, t: float,
                    net: np.ndarray | None = None,
                    config: ClassifierConfig = ClassifierConfig()) -> CarlesonReport:
    """Two-exponent kernel test: sup_a sum_n (1-|a|^2)^t w_n / |1-conj(a) z_n|^(s+t).

    With t = s and weights (1-|z_n|^2)^s this equals sum_n of the invariant
    weight (1-|sigma_a(z_n)|^2)^s at each net point.
    """
    if s <= 0.0 or t <= 0.0:
        raise ValueError(f"s and t must be positive, got s={s}, t={t}")
    if net is None:
        net = build_net(mu.points)
    net = np.atleast_1d(np.asarray(net, dtype=complex))
    if net.size == 0:
        raise ValueError("sampling net must be nonempty")
    if len(mu) == 0:
        return _report("kernel", 0.0, {}, [], {"s": s, "t": t}, config)
    ladder = depth_ladder(mu.depths)
    cuts = mu.prefix_sizes(ladder)
    z, w = mu.points, mu.weights

    def terms(a):
        lead = (1.0 - np.abs(a) ** 2) ** t
        den = np.abs(1.0 - np.conj(a)[:, None] * z[None, :]) ** (s + t)
        return lead[:, None] * w[None, :] / den

    vals, wit = _ladder_max_over_net(terms, net, len(mu), cuts)
    levels = [(math.log2(d), float(v)) for d, v in zip(ladder, vals)]
    witness = {}
    if len(vals):
        k = int(np.argmax(vals))
        witness = {"point": [float(np.real(wit[k])), float(np.imag(wit[k]))],
                   "value": float(vals[k])}
    return _report("kernel", float(vals[-1]) if len(vals) else 0.0, witness, levels,
                   {"s": s, "t": t, "net_size": int(net.size)}, config)


def kernel_values(mu: PointMassMeasure, s: float, t: float, net) -> np.ndarray:
    """The kernel sum (1-|a|^2)^t sum_n w_n / |1-conj(a) z_n|^(s+t) per net point."""
    net = np.atleast_1d(np.asarray(net, dtype=complex))
    out = np.empty(net.size)
    chunk = max(1, int(4_000_000 // max(len(mu), 1)))
    for start in range(0, net.size, chunk):
        a = net[start:start + chunk]
        lead = (1.0 - np.abs(a) ** 2) ** t
        den = np.abs(1.0 - np.conj(a)[:, None] * mu.points[None, :]) ** (s + t)
        out[start:start + chunk] = lead * np.sum(mu.weights[None, :] / den, axis=1)
    return out


def kernel_sigma_values(points, s: float, net) -> np.ndarray:
    """sum_n (1-|sigma_a(z_n)|^2)^s at each net point a (direct sigma form)."""
    z = np.atleast_1d(np.asarray(points, dtype=complex))
    net = np.atleast_1d(np.asarray(net, dtype=complex))
    out = np.empty(net.size)
    chunk = max(1, int(2_000_000 // max(z.size, 1)))
    for start in range(0, net.size, chunk):
        a = net[start:start + chunk]
        out[start:start + chunk] = np.sum(
            invariant_weight(a[:, None], z[None, :]) ** s, axis=1)
    return out


# -- Besov-space Carleson ratio ----------------------------------------------

def _default_ratio_samples(points) -> np.ndarray:
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    if pts.size == 0:
        return np.array([0.0 + 0.0j])
    depth_cap = int(min(50, math.ceil(point_depths(pts).max()) + 2))
    angles = np.unique(np.mod(np.angle(pts) / (2.0 * np.pi), 1.0))
    if angles.size > 64:
        angles = angles[:: int(math.ceil(angles.size / 64))]
    radii = 1.0 - 2.0 ** (-np.arange(1, depth_cap + 1, dtype=float))
    rays = (radii[:, None] * np.exp(2j * np.pi * angles[None, :])).ravel()
    return np.concatenate([rays, np.array([0.0 + 0.0j])])


def bps_carleson_ratio(mu: PointMassMeasure, s: float,
                       samples: np.ndarray | None = None,
                       config: ClassifierConfig = ClassifierConfig()) -> CarlesonReport:
    """Ratio test sup_z (1-|z|^2)^(2-s) * sum_n w_n / |1 - conj(w_n) z|^2.

    Boundedness of this sup characterizes Carleson measures for the Besov-type
    space in the small-exponent regime.
    """
    if not 0.0 < s <= 1.0:
        raise ValueError(f"s must be in (0,1], got {s}")
    if len(mu) == 0:
        return _report("bps_ratio", 0.0, {}, [], {"s": s}, config)
    if samples is None:
        samples = _default_ratio_samples(mu.points)
    samples = np.atleast_1d(np.asarray(samples, dtype=complex))
    ladder = depth_ladder(mu.depths)
    cuts = mu.prefix_sizes(ladder)
    sample_depths = point_depths(samples)
    z, w = mu.points, mu.weights
    vals = np.zeros(len(ladder))
    wit = np.full(len(ladder), np.nan, dtype=complex)
    chunk = max(1, int(4_000_000 // max(len(mu), 1)))
    for start in range(0, samples.size, chunk):
        a = samples[start:start + chunk]
        lead = (1.0 - np.abs(a) ** 2) ** (2.0 - s)
        den = np.abs(1.0 - np.conj(z)[None, :] * a[:, None]) ** 2
        csum = np.cumsum(w[None, :] / den, axis=1)
        for i, (d, c) in enumerate(zip(ladder, cuts)):
            if c == 0:
                continue
            ok = sample_depths[start:start + chunk] <= d + 1e-6
            if not np.any(ok):
                continue
            col = lead[ok] * csum[ok, c - 1]
            j = int(np.argmax(col))
            if col[j] > vals[i]:
                vals[i] = float(col[j])
                wit[i] = a[ok][j]
    levels = [(math.log2(d), float(v)) for d, v in zip(ladder, vals)]
    witness = {}
    if len(vals):
        k = int(np.argmax(vals))
        if np.isfinite(vals[k]) and not np.isnan(wit[k].real):
            witness = {"point": [float(wit[k].real), float(wit[k].imag)],
                       "value": float(vals[k])}
    return _report("bps_ratio", float(vals[-1]), witness, levels,
                   {"s": s, "samples": int(samples.size)}, config)
