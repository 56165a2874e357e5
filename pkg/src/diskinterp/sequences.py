"""Disk sequences: separation statistics, generators, and serialization.

A :class:`DiskSequence` is a finite ordered list of interior points.  The
asymptotic questions of the theory ("is this an s-Carleson family?") are
answered elsewhere by growth classification over truncations; this module
provides the finite carriers and the standard test families.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .mobius import DiskDomainError, as_complex, pseudo_hyperbolic

__all__ = [
    "DiskSequence",
    "SeparationReport",
    "separation_constant",
    "uniform_separation_constant",
    "blaschke_sum",
    "sequence_metrics",
    "gen_radial",
    "gen_clustered",
    "gen_bwy_candidate",
    "gen_stolz",
    "gen_perturbed_radial",
    "point_depths",
]

DUPLICATE_RHO_TOL = 1e-13

# Hard cap so a typo in a growth exponent cannot ask for millions of points.
GENERATOR_POINT_CAP = 200_000


class GeneratorCapError(ValueError):
    """Raised when a generator would exceed the configured point cap."""


@dataclass
class DiskSequence:
    """Finite ordered sequence of points in the open unit disk."""

    values: np.ndarray
    label: str = ""

    def __init__(self, points, label: str = ""):
        vals = np.atleast_1d(np.asarray([as_complex(p) for p in np.atleast_1d(points)],
                                        dtype=complex))
        if vals.size == 0:
            raise ValueError("sequence must be nonempty")
        if not np.all(np.isfinite(vals)):
            raise DiskDomainError("sequence contains non-finite points")
        mods = np.abs(vals)
        if np.any(mods >= 1.0):
            bad = vals[mods >= 1.0][0]
            raise DiskDomainError(f"|z| must be < 1 for every point, got {bad!r}")
        self.values = vals
        self.label = label

    def __len__(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values.tolist())

    def subset(self, indices, label=None) -> "DiskSequence":
        return DiskSequence(self.values[np.asarray(indices)],
                            label=label if label is not None else self.label)

    def truncate_depth(self, depth: float, label=None) -> "DiskSequence":
        """Keep points with -log2(1-|z|) <= depth (shallow prefix of the family)."""
        keep = point_depths(self.values) <= depth + 1e-12
        if not np.any(keep):
            keep = np.zeros(len(self), dtype=bool)
            keep[int(np.argmin(np.abs(self.values)))] = True
        return self.subset(np.nonzero(keep)[0], label=label)

    def duplicate_pairs(self, tol: float = DUPLICATE_RHO_TOL):
        """Index pairs (i, j), i<j, with pseudo-hyperbolic distance < tol."""
        z = self.values
        if z.size > 20_000:            # pairwise scan is quadratic
            return []
        rho = pseudo_hyperbolic(z[:, None], z[None, :])
        iu = np.triu_indices(z.size, k=1)
        close = rho[iu] < tol
        return list(zip(iu[0][close].tolist(), iu[1][close].tolist()))

    # -- serialization ------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"# diskinterp sequence: {self.label}" if self.label
                 else "# diskinterp sequence"]
        lines += ["%.17g %.17g" % (z.real, z.imag) for z in self.values]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, label: str = "") -> "DiskSequence":
        pts = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"expected 're im' pair, got line {raw!r}")
            pts.append(complex(float(parts[0]), float(parts[1])))
        return cls(pts, label=label)

    def to_json_obj(self) -> dict:
        return {"label": self.label,
                "points": [[z.real, z.imag] for z in self.values]}

    @classmethod
    def from_json_obj(cls, obj) -> "DiskSequence":
        if isinstance(obj, list):
            pts, label = obj, ""
        else:
            pts, label = obj["points"], obj.get("label", "")
        return cls([complex(p[0], p[1]) for p in pts], label=label)

    def save(self, path) -> None:
        path = Path(path)
        if path.suffix == ".json":
            path.write_text(json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n")
        else:
            path.write_text(self.to_text())

    @classmethod
    def load(cls, path) -> "DiskSequence":
        path = Path(path)
        if path.suffix == ".json":
            return cls.from_json_obj(json.loads(path.read_text()))
        return cls.from_text(path.read_text(), label=path.stem)


@dataclass
class SeparationReport:
    separation: float
    uniform_separation: float
    blaschke_sum: float
    size: int
    flags: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {"separation": self.separation,
                "uniform_separation": self.uniform_separation,
                "blaschke_sum": self.blaschke_sum,
                "size": self.size,
                "flags": sorted(self.flags)}


def point_depths(points) -> np.ndarray:
    """Dyadic boundary depth -log2(1 - |z|) of each point."""
    mods = np.abs(np.asarray(points, dtype=complex))
    return -np.log2(np.maximum(1.0 - mods, 1e-300))


def _pairwise_rho(z: np.ndarray) -> np.ndarray:
    return pseudo_hyperbolic(z[:, None], z[None, :])


def separation_constant(seq: DiskSequence) -> float:
    """min over pairs of rho(z_n, z_k); 1.0 by convention for a singleton."""
    z = np.asarray(seq.values if isinstance(seq, DiskSequence) else seq, dtype=complex)
    if z.size < 2:
        return 1.0
    rho = _pairwise_rho(z)
    iu = np.triu_indices(z.size, k=1)
    return float(rho[iu].min())


def uniform_separation_constant(seq: DiskSequence) -> float:
    """inf over m of prod_{n != m} rho(z_m, z_n), via a sum of logs.

    Duplicate points force a zero factor, hence 0.
    """
    z = np.asarray(seq.values if isinstance(seq, DiskSequence) else seq, dtype=complex)
    if z.size < 2:
        return 1.0
    rho = _pairwise_rho(z)
    np.fill_diagonal(rho, 1.0)
    if np.any(rho < DUPLICATE_RHO_TOL):
        return 0.0
    with np.errstate(divide="ignore"):
        logs = np.log(rho)
    return float(np.exp(logs.sum(axis=1).min()))


def blaschke_sum(seq: DiskSequence) -> float:
    """sum of (1 - |z_n|) over the sequence."""
    z = np.asarray(seq.values if isinstance(seq, DiskSequence) else seq, dtype=complex)
    return float(np.sum(1.0 - np.abs(z)))


def sequence_metrics(seq: DiskSequence) -> SeparationReport:
    flags = []
    if len(seq) == 1:
        flags.append("singleton: separation constants are 1 by convention")
    dups = seq.duplicate_pairs()
    if dups:
        flags.append(f"{len(dups)} duplicate pair(s): separation forced to 0")
    sep = separation_constant(seq)
    usep = uniform_separation_constant(seq)
    return SeparationReport(separation=sep, uniform_separation=usep,
                            blaschke_sum=blaschke_sum(seq), size=len(seq),
                            flags=flags)


# -- generators -------------------------------------------------------------

def gen_radial(q: float, n: int) -> DiskSequence:
    """Radial family z_j = 1 - q^j, j = 1..n, on the positive real axis."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must be in (0,1), got {q}")
    if n < 1:
        raise ValueError("n must be >= 1")
    pts = 1.0 - q ** np.arange(1, n + 1, dtype=float)
    return DiskSequence(pts.astype(complex), label=f"radial(q={q},n={n})")


def gen_clustered(s_target: float, growth: float, levels: int,
                  arc: float = 0.25) -> DiskSequence:
    """Angularly clustered family: ceil(2^(growth*k)) points at radius 1-2^-k.

    Points of level k are equally spaced inside the fixed arc [0, arc) of
    normalized length `arc`.  The family fails the s_target-Carleson box test
    exactly when growth > s_target (the aggregated level masses grow like
    2^((growth-s)k)); for smaller growth the truncations stabilize.
    """
    if not 0.0 < s_target < 1.0:
        raise ValueError(f"s_target must be in (0,1), got {s_target}")
    if growth <= 0.0:
        raise ValueError(f"growth must be positive, got {growth}")
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if not 0.0 < arc <= 1.0:
        raise ValueError("arc must be in (0,1]")
    counts = np.ceil(2.0 ** (growth * np.arange(1, levels + 1))).astype(int)
    if counts.sum() > GENERATOR_POINT_CAP:
        raise GeneratorCapError(
            f"clustered family would have {counts.sum()} points (cap {GENERATOR_POINT_CAP})")
    pts = []
    for k in range(1, levels + 1):
        nk = counts[k - 1]
        r = 1.0 - 2.0 ** (-k)
        theta = arc * (np.arange(nk) + 0.5) / nk
        pts.append(r * np.exp(2j * np.pi * theta))
    return DiskSequence(np.concatenate(pts),
                        label=f"clustered(s={s_target},growth={growth},levels={levels})")


def _bwy_count(u, s, cal, depth_step, thinning):
    return cal * 2.0 ** (s * u) * (u / depth_step + 1.0) ** (-thinning)


def gen_bwy_candidate(s: float, levels: int, calibration: float = 1.0,
                      depth_step: int = 2, thinning: float = 0.5) -> DiskSequence:
    """Candidate witness family: heavily stacked above one boundary anchor.

    Level kappa = 1..levels sits at radius 1 - 2^-k with k = depth_step*kappa.
    Angular positions are chosen so that the window [0, 2^-m) holds about
    calibration * 2^(s(k-m)) * ((k-m)/depth_step + 1)^(-thinning) points of
    level kappa: position i is 2^(u_i - k) with u_i solving the count profile
    (bisection; the profile is monotone on the solved branch).

    The construction aims at: log-tempered sum bounded, s-Carleson tests
    divergent, t-Carleson tests bounded for t > s.  These are adjudicated by
    the harness, never assumed.
    """
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must be in (0,1), got {s}")
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if calibration <= 0.0:
        raise ValueError("calibration must be positive")
    if depth_step < 1:
        raise ValueError("depth_step must be >= 1")
    if not 0.0 <= thinning < 1.0:
        raise ValueError("thinning must be in [0,1)")
    max_depth = depth_step * levels
    if max_depth > 48:
        raise ValueError(f"deepest level 2^-{max_depth} is below float64 resolution budget")
    # start of the increasing branch of the count profile
    u_lo_global = max(0.0, thinning / (s * math.log(2.0)) - depth_step)
    pts = []
    total = 0
    for kappa in range(1, levels + 1):
        k = depth_step * kappa
        n_k = max(1, int(math.floor(_bwy_count(k, s, calibration, depth_step, thinning))))
        total += n_k
        if total > GENERATOR_POINT_CAP:
            raise GeneratorCapError(
                f"bwy candidate would exceed {GENERATOR_POINT_CAP} points")
        i = np.arange(1, n_k + 1, dtype=float)
        u_min = min(u_lo_global, float(k))
        floor_count = _bwy_count(u_min, s, calibration, depth_step, thinning)
        lo = np.full(n_k, u_min)
        hi = np.full(n_k, float(k))
        # indices below the profile floor sit at the anchor scale, spread evenly
        below = i <= floor_count
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            too_big = _bwy_count(mid, s, calibration, depth_step, thinning) >= i
            hi = np.where(too_big, mid, hi)
            lo = np.where(too_big, lo, mid)
        u = 0.5 * (lo + hi)
        if np.any(below):
            nb = int(below.sum())
            u[below] = u_min * (i[below] / (nb + 1.0))
        theta = np.minimum(2.0 ** (u - k), 1.0 - 2.0 ** (-k - 1))
        r = 1.0 - 2.0 ** (-k)
        pts.append(r * np.exp(2j * np.pi * theta))
    return DiskSequence(
        np.concatenate(pts),
        label=f"bwy(s={s},levels={levels},cal={calibration})")


def gen_stolz(q: float, n: int, slope: float = 0.5) -> DiskSequence:
    """Family approaching 1 inside a Stolz angle: z_j = (1-q^j) e^(i*slope*q^j)."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must be in (0,1), got {q}")
    if n < 1:
        raise ValueError("n must be >= 1")
    gaps = q ** np.arange(1, n + 1, dtype=float)
    pts = (1.0 - gaps) * np.exp(1j * slope * gaps)
    return DiskSequence(pts, label=f"stolz(q={q},n={n},slope={slope})")


def gen_perturbed_radial(q: float, n: int, magnitude: float = 0.1,
                         seed: int = 0, base_angle: float = 1.0 / 3.0) -> DiskSequence:
    """Radial-type family with seeded pseudo-hyperbolic perturbations <= magnitude.

    The base ray sits at normalized angle base_angle; the default 1/3 keeps the
    perturbed cloud clear of dyadic box seams at every generation (angle 0
    would be split 50/50 by the anchored dyadic scan).
    """
    if not 0.0 <= magnitude < 1.0:
        raise ValueError("magnitude must be in [0,1)")
    base = gen_radial(q, n).values * np.exp(2j * np.pi * base_angle)
    rng = np.random.default_rng(seed)
    w = magnitude * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
    # sigma_a(w) is at pseudo-hyperbolic distance |w| from a
    pts = (base - w) / (1.0 - np.conj(base) * w)
    return DiskSequence(pts, label=f"perturbed_radial(q={q},n={n},mag={magnitude},seed={seed})")
