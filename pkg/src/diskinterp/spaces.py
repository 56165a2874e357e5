"""Weighted area quadrature on the disk and the space (semi)norms built on it.

The quadrature grid uses geometric radial shells toward the boundary (dyadic
in 1-r), Gauss-Legendre nodes radially, uniform midpoint angles per shell, a
power-transformed closing shell that resolves integrable boundary weights
(1-r^2)^alpha for every alpha > -1, and local quadtree refinement around
flagged singular points.  dA is normalized so the disk has measure 1.

Each node carries its boundary gap 1-r exactly (the closing transform reaches
gaps far below machine epsilon relative to 1), so boundary weight factors are
computed without cancellation; the complex node position is clamped to the
representable rim for evaluating analytic factors, which are smooth there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .blaschke import BlaschkeProduct
from .carleson import (CarlesonReport, ClassifierConfig, PointMassMeasure,
                       bps_carleson_ratio, classify_growth)
from .mobius import as_complex, mobius_transform

__all__ = [
    "ParameterError",
    "SpaceParams",
    "QuadratureConfig",
    "QuadratureResult",
    "DiskGrid",
    "build_disk_grid",
    "integrate_disk",
    "AnalyticFunction",
    "const_fn",
    "monomial_fn",
    "power_series_fn",
    "blaschke_fn",
    "log_branch_fn",
    "test_function",
    "compose_with_mobius",
    "NormResult",
    "bps_norm",
    "FppsReport",
    "fpps_seminorm",
    "default_sup_net",
    "bloch_seminorm",
    "HinfReport",
    "hinf_norm",
    "test_function_norms",
    "MultiplierReport",
    "multiplier_test",
]

RIM_CLAMP = 1e-15

# leaves must be this many times smaller than their distance to the nearest
# singular point before subdivision stops
LEAF_DISTANCE_FACTOR = 2.5


class ParameterError(ValueError):
    """Exponent bundle outside the admissible range for the requested space."""


@dataclass(frozen=True)
class SpaceParams:
    """Exponent bundle (p, s, t) with per-space admissibility checks."""

    p: float
    s: float
    t: float | None = None

    def require_besov(self):
        if self.p <= 0:
            raise ParameterError(f"p must be positive, got p={self.p}")
        if self.s <= 1.0 - self.p:
            raise ParameterError(
                f"need s > 1-p for a nontrivial Besov-type space "
                f"(only constants have finite norm otherwise); got p={self.p}, s={self.s}")

    def require_fpps(self):
        if self.p <= 0 or self.s <= 0:
            raise ParameterError(f"need p > 0 and s > 0, got p={self.p}, s={self.s}")
        if self.p + self.s <= 1.0:
            raise ParameterError(
                f"need p + s > 1 for a nontrivial invariant space, got p+s={self.p + self.s}")

    def require_small_exponent_regime(self):
        if not 0.0 < self.s < 1.0:
            raise ParameterError(f"need 0 < s < 1, got s={self.s}")
        lo = max(self.s, 1.0 - self.s)
        if not lo < self.p <= 1.0:
            raise ParameterError(
                f"need max(s, 1-s) = {lo} < p <= 1, got p={self.p}")
        if self.t is not None and self.t <= 0:
            raise ParameterError(f"need t > 0, got t={self.t}")


@dataclass(frozen=True)
class QuadratureConfig:
    boundary_levels: int = 14      # radial shells at 1 - 2^-j
    radial_nodes: int = 4          # Gauss nodes per shell
    angular_base: int = 16         # angular cells on the innermost shell
    max_angular: int = 1024        # angular cap per shell
    zero_refinement_depth: int = 8
    rel_tol: float = 1e-3
    closing_power: float = 10.0    # gap = 2^-L v^power on the closing shell


@lru_cache(maxsize=16)
def _gauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w          # on [0, 1]


PART_MAIN = 0          # regular shells + closing at L
PART_PREV = 1          # replacement closing shell at L-1 (coarser estimate)


@dataclass
class DiskGrid:
    """Flat quadrature node list: positions, exact gaps, weights, metadata."""

    z: np.ndarray               # clamped complex positions
    gap: np.ndarray             # exact 1-r per node (may be << eps)
    w: np.ndarray               # dA weights (normalized measure)
    shell: np.ndarray           # 0..L-1 regular, L closing, L-1 marker on prev
    part: np.ndarray            # PART_MAIN / PART_PREV
    near: np.ndarray            # owning singular point index, -1 otherwise
    config: QuadratureConfig
    singular_points: np.ndarray

    @property
    def n_points(self) -> int:
        return int(self.z.size)

    def one_minus_sq(self) -> np.ndarray:
        """(1 - |z|^2) computed from the exact gap: gap * (2 - gap)."""
        return self.gap * (2.0 - self.gap)

    def boundary_weight(self, alpha: float) -> np.ndarray:
        return self.one_minus_sq() ** alpha

    def evaluate(self, f, f_near=None) -> np.ndarray:
        vals = np.empty(self.z.size, dtype=float)
        plain = self.near < 0
        if np.any(plain):
            vals[plain] = np.asarray(f(self.z[plain]), dtype=float)
        rest = ~plain
        if np.any(rest):
            if f_near is None:
                vals[rest] = np.asarray(f(self.z[rest]), dtype=float)
            else:
                zrest = self.z[rest]
                idx = self.near[rest]
                sub = np.empty(zrest.size, dtype=float)
                for k in np.unique(idx):
                    sel = idx == k
                    sub[sel] = np.asarray(f_near(zrest[sel], int(k)), dtype=float)
                vals[rest] = sub
        return vals

    def reduce(self, values: np.ndarray, extra: np.ndarray | None = None):
        """(estimate at L, estimate at L-1) of sum w * values [* extra]."""
        contrib = self.w * values if extra is None else self.w * values * extra
        L = self.config.boundary_levels
        main = self.part == PART_MAIN
        value = float(contrib[main].sum())
        prev_mask = (self.part == PART_PREV) | (main & (self.shell <= L - 2))
        return value, float(contrib[prev_mask].sum())


@dataclass
class QuadratureResult:
    value: float
    value_prev: float
    converged: bool
    rel_change: float
    n_points: int

    @property
    def verdict(self) -> str:
        return "CONVERGED" if self.converged else "INCONCLUSIVE"

    def to_json_dict(self):
        return {"value": self.value, "coarser_value": self.value_prev,
                "verdict": self.verdict, "rel_change": self.rel_change,
                "points": self.n_points}


def _near_radii(singular: np.ndarray) -> np.ndarray:
    """Radius around each singular point inside which a local evaluator applies."""
    if singular.size == 0:
        return np.zeros(0)
    gaps = 1.0 - np.abs(singular)
    if singular.size == 1:
        return 0.35 * gaps
    d = np.abs(singular[:, None] - singular[None, :])
    np.fill_diagonal(d, np.inf)
    return 0.35 * np.minimum(gaps, d.min(axis=1))


def _nearest_singular(zc: np.ndarray, singular: np.ndarray):
    """Distance to and index of the nearest singular point, chunked."""
    n = zc.size
    d = np.empty(n)
    k = np.empty(n, dtype=np.int64)
    chunk = max(1, int(4_000_000 // max(singular.size, 1)))
    for start in range(0, n, chunk):
        dm = np.abs(zc[start:start + chunk, None] - singular[None, :])
        k[start:start + chunk] = np.argmin(dm, axis=1)
        d[start:start + chunk] = dm[np.arange(dm.shape[0]), k[start:start + chunk]]
    return d, k


_GL2 = (np.array([0.5 - 0.5 / math.sqrt(3.0), 0.5 + 0.5 / math.sqrt(3.0)]),
        np.array([0.5, 0.5]))


def _refine_cells(rects: np.ndarray, geom, singular, near_r, depth_cap,
                  min_depth: int = 2, a_metric: float | None = None):
    """Vectorized anisotropic subdivision of flagged cells.

    rects is (n, 4) of (a0, a1, b0, b1) in local (radial-coordinate, angle)
    space; geom maps coordinate arrays to (z_clamped, gap, weight_element)
    arrays.  Cells subdivide until several diagonals from every singular point
    (at least to min_depth) or until depth_cap; only the direction whose
    extent dominates is split, so thin shells are not sliced exponentially
    while an angular singularity is chased.  Each leaf carries a 2x2 Gauss
    rule: boundary weights like (1-r^2)^alpha vary too much across a shell
    for midpoint leaves.

    a_metric, when given, replaces the physical a-extent in the split
    decision: on the power-transformed closing shell the physical radial
    extent is tiny while the mass distribution still needs a-splits.
    """
    out = {"z": [], "gap": [], "w": [], "near": []}
    gl_x, gl_w = _GL2
    a0, a1 = rects[:, 0].copy(), rects[:, 1].copy()
    b0, b1 = rects[:, 2].copy(), rects[:, 3].copy()
    depth = 0

    def emit_leaves(A0, A1, B0, B1, dvals, kvals):
        for ia in range(2):
            for ib in range(2):
                an = A0 + (A1 - A0) * gl_x[ia]
                bn = B0 + (B1 - B0) * gl_x[ib]
                zn, gn, wn = geom(an, bn)
                out["z"].append(zn)
                out["gap"].append(gn)
                out["w"].append(wn * (A1 - A0) * (B1 - B0) * gl_w[ia] * gl_w[ib])
                out["near"].append(np.where(dvals <= near_r[kvals], kvals, -1))

    while a0.size:
        am, bm = 0.5 * (a0 + a1), 0.5 * (b0 + b1)
        zc, _, _ = geom(am, bm)
        za0, _, _ = geom(a0, bm)
        za1, _, _ = geom(a1, bm)
        zb0, _, _ = geom(am, b0)
        zb1, _, _ = geom(am, b1)
        ext_a = np.abs(za1 - za0)
        ext_b = np.abs(zb1 - zb0)
        diag = np.hypot(ext_a, ext_b)
        d, k = _nearest_singular(zc, singular)
        leaf = (d > LEAF_DISTANCE_FACTOR * diag) & (depth >= min_depth)
        if depth >= depth_cap:
            leaf = np.ones_like(leaf)
        if np.any(leaf):
            emit_leaves(a0[leaf], a1[leaf], b0[leaf], b1[leaf], d[leaf], k[leaf])
        split = ~leaf
        if not np.any(split):
            break
        A0, A1 = a0[split], a1[split]
        B0, B1 = b0[split], b1[split]
        Am, Bm = 0.5 * (A0 + A1), 0.5 * (B0 + B1)
        ea = ext_a[split] if a_metric is None else (A1 - A0) * a_metric
        eb = ext_b[split]
        only_b = ea * 2.0 < eb
        only_a = eb * 2.0 < ea
        both = ~(only_a | only_b)
        parts_a0, parts_a1, parts_b0, parts_b1 = [], [], [], []

        def emit(aa0, aa1, bb0, bb1):
            parts_a0.append(aa0)
            parts_a1.append(aa1)
            parts_b0.append(bb0)
            parts_b1.append(bb1)

        if np.any(only_b):
            emit(A0[only_b], A1[only_b], B0[only_b], Bm[only_b])
            emit(A0[only_b], A1[only_b], Bm[only_b], B1[only_b])
        if np.any(only_a):
            emit(A0[only_a], Am[only_a], B0[only_a], B1[only_a])
            emit(Am[only_a], A1[only_a], B0[only_a], B1[only_a])
        if np.any(both):
            emit(A0[both], Am[both], B0[both], Bm[both])
            emit(Am[both], A1[both], B0[both], Bm[both])
            emit(A0[both], Am[both], Bm[both], B1[both])
            emit(Am[both], A1[both], Bm[both], B1[both])
        a0 = np.concatenate(parts_a0)
        a1 = np.concatenate(parts_a1)
        b0 = np.concatenate(parts_b0)
        b1 = np.concatenate(parts_b1)
        depth += 1
    if not out["z"]:
        return (np.zeros(0, dtype=complex), np.zeros(0), np.zeros(0),
                np.zeros(0, dtype=np.int64))
    return (np.concatenate(out["z"]), np.concatenate(out["gap"]),
            np.concatenate(out["w"]), np.concatenate(out["near"]))


def build_disk_grid(config: QuadratureConfig = QuadratureConfig(),
                    singular_points=()) -> DiskGrid:
    sp = np.atleast_1d(singular_points) if np.size(singular_points) else []
    singular = np.asarray([as_complex(p) for p in sp], dtype=complex) if len(sp) \
        else np.zeros(0, dtype=complex)
    near_r = _near_radii(singular)
    min_split = 0
    # leaves must resolve the narrow column a deep zero casts toward the rim
    sing_depth = float(np.max(-np.log2(np.maximum(1.0 - np.abs(singular), 1e-300)))) \
        if singular.size else 0.0

    def refine_cap(base_cap, ntheta):
        need = int(math.ceil(sing_depth + 2.0 - math.log2(ntheta)))
        return min(24, max(base_cap, need))
    L = config.boundary_levels
    kappa = config.closing_power
    gx, gw = _gauss(config.radial_nodes)
    cgx, cgw = _gauss(2 * config.radial_nodes)

    zs, gs, ws, shells, parts, nears = [], [], [], [], [], []

    def add(z, gap, w, shell, part, near=None):
        z = np.asarray(z, dtype=complex).ravel()
        zs.append(z)
        gs.append(np.asarray(gap, dtype=float).ravel())
        ws.append(np.asarray(w, dtype=float).ravel())
        shells.append(np.full(z.size, shell, dtype=np.int32))
        parts.append(np.full(z.size, part, dtype=np.int8))
        nears.append(np.full(z.size, -1, dtype=np.int64) if near is None
                     else np.asarray(near, dtype=np.int64).ravel())

    def flagged_cells(r0, r1, ntheta):
        """Map angular index -> singular points within a few diagonals."""
        if singular.size == 0:
            return {}
        rbar = 0.5 * (r0 + r1)
        diag = math.hypot(r1 - r0, 2 * math.pi * max(rbar, 0.05) / ntheta)
        reach = 2.5 * diag
        out = {}
        for k, zk in enumerate(singular):
            rk = abs(zk)
            if rk + reach < r0 or rk - reach > r1:
                continue
            phik = (np.angle(zk) / (2 * np.pi)) % 1.0
            dphi = reach / (2 * np.pi * max(rbar, 0.05)) + 1.0 / ntheta
            i0 = int(math.floor((phik - dphi) * ntheta))
            i1 = int(math.floor((phik + dphi) * ntheta))
            for i in range(i0, i1 + 1):
                out.setdefault(i % ntheta, []).append(k)
        return out

    for j in range(L):
        scale = 2.0 ** (-j)
        r0, r1 = 1.0 - scale, 1.0 - 0.5 * scale
        ntheta = min(config.max_angular, config.angular_base * 2 ** j)
        gap_n = scale * (1.0 - 0.5 * gx)          # exact 1-r at the Gauss nodes
        rn = 1.0 - gap_n
        rw = 0.5 * scale * gw
        flag = flagged_cells(r0, r1, ntheta)
        phi = (np.arange(ntheta) + 0.5) / ntheta
        keep = np.ones(ntheta, dtype=bool)
        for i in flag:
            keep[i] = False
        if np.any(keep):
            nk = int(keep.sum())
            zz = rn[:, None] * np.exp(2j * np.pi * phi[None, keep])
            gg = gap_n[:, None] * np.ones((1, nk))
            ww = (2.0 * rn * rw)[:, None] / ntheta * np.ones((1, nk))
            add(zz, gg, ww, j, PART_MAIN)

        if flag:
            def geom_regular(a, b):
                r = np.asarray(a, dtype=float)
                return (r * np.exp(2j * np.pi * np.asarray(b, dtype=float)),
                        1.0 - r, 2.0 * r)

            loc = np.asarray(sorted({k for ks in flag.values() for k in ks}),
                             dtype=np.int64)
            rects = np.array([[r0, r1, i / ntheta, (i + 1) / ntheta]
                              for i in sorted(flag)])
            pts, gaps_, wts, near_loc = _refine_cells(
                rects, geom_regular, singular[loc], near_r[loc],
                refine_cap(config.zero_refinement_depth, ntheta),
                min_depth=min_split)
            add(pts, gaps_, wts, j, PART_MAIN,
                np.where(near_loc >= 0, loc[np.maximum(near_loc, 0)], -1))

    def closing_shell(level, part):
        uscale = 2.0 ** (-level)
        ntheta = min(config.max_angular, config.angular_base * 2 ** level)
        phi = (np.arange(ntheta) + 0.5) / ntheta
        shell_id = level if part == PART_MAIN else level - 1

        def geom_closing(a, b):
            a = np.asarray(a, dtype=float)
            gap = uscale * a ** kappa
            r = 1.0 - np.maximum(gap, RIM_CLAMP)
            dudv = kappa * uscale * a ** (kappa - 1.0)
            return (r * np.exp(2j * np.pi * np.asarray(b, dtype=float)),
                    gap, 2.0 * r * dudv)

        gap_nodes = uscale * cgx ** kappa
        r_nodes = 1.0 - np.maximum(gap_nodes, RIM_CLAMP)
        welem = 2.0 * r_nodes * kappa * uscale * cgx ** (kappa - 1.0) * cgw
        # zeros above the shell still cast narrow spikes onto it; flag by proximity
        flag = flagged_cells(1.0 - uscale, 1.0, ntheta)
        keep = np.ones(ntheta, dtype=bool)
        for i in flag:
            keep[i] = False
        if np.any(keep):
            nk = int(keep.sum())
            zz = r_nodes[:, None] * np.exp(2j * np.pi * phi[None, keep])
            gg = gap_nodes[:, None] * np.ones((1, nk))
            ww = welem[:, None] / ntheta * np.ones((1, nk))
            add(zz, gg, ww, shell_id, part)
        if flag:
            loc = np.asarray(sorted({k for ks in flag.values() for k in ks}),
                             dtype=np.int64)
            rects = np.array([[0.0, 1.0, i / ntheta, (i + 1) / ntheta]
                              for i in sorted(flag)])
            pts, gaps_, wts, near_loc = _refine_cells(
                rects, geom_closing, singular[loc], near_r[loc],
                refine_cap(config.zero_refinement_depth + 2, ntheta),
                min_depth=min_split)
            add(pts, gaps_, wts, shell_id, part,
                np.where(near_loc >= 0, loc[np.maximum(near_loc, 0)], -1))

    closing_shell(L, PART_MAIN)
    closing_shell(L - 1, PART_PREV)

    return DiskGrid(z=np.concatenate(zs), gap=np.concatenate(gs),
                    w=np.concatenate(ws), shell=np.concatenate(shells),
                    part=np.concatenate(parts), near=np.concatenate(nears),
                    config=config, singular_points=singular)


def integrate_disk(f, config: QuadratureConfig = QuadratureConfig(),
                   singular_points=(), f_near=None) -> QuadratureResult:
    """Approximate the normalized-area integral of f over the disk.

    f maps a complex ndarray to real values; f_near(z, k), when given, replaces
    f at refined nodes inside the near zone of singular point k.  The verdict
    compares the boundary resolutions L and L-1 against rel_tol.
    """
    grid = build_disk_grid(config, singular_points)
    vals = grid.evaluate(f, f_near)
    value, prev = grid.reduce(vals)
    rel = abs(value - prev) / max(abs(value), 1e-300)
    return QuadratureResult(value=value, value_prev=prev,
                            converged=rel <= config.rel_tol, rel_change=rel,
                            n_points=grid.n_points)


# -- analytic function carriers ----------------------------------------------

@dataclass
class AnalyticFunction:
    """Evaluator pair (f, f') with metadata used by quadrature and sup grids.

    zeros: interior points where f vanishes (refinement hints, mask anchors);
    singular_directions: unimodular directions where f blows up at the rim.
    """

    kind: str
    f: object
    df: object
    zeros: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    singular_directions: np.ndarray = field(
        default_factory=lambda: np.zeros(0, dtype=complex))
    label: str = ""

    def __call__(self, z):
        return self.f(as_complex(z))

    def derivative(self, z):
        return self.df(as_complex(z))


def const_fn(c) -> AnalyticFunction:
    c = complex(c)
    return AnalyticFunction(kind="constant",
                            f=lambda z: np.full(np.shape(z), c, dtype=complex)
                            if np.ndim(z) else c,
                            df=lambda z: np.zeros(np.shape(z), dtype=complex)
                            if np.ndim(z) else 0.0j,
                            label=f"const({c})")


def monomial_fn(k: int) -> AnalyticFunction:
    if k < 1:
        raise ValueError("monomial exponent must be >= 1")
    return AnalyticFunction(kind="monomial",
                            f=lambda z: np.asarray(z) ** k,
                            df=lambda z: k * np.asarray(z) ** (k - 1),
                            label=f"z^{k}")


def power_series_fn(coeffs) -> AnalyticFunction:
    c = np.asarray(coeffs, dtype=complex)
    dc = c[1:] * np.arange(1, c.size)
    return AnalyticFunction(kind="user_series",
                            f=lambda z: np.polynomial.polynomial.polyval(np.asarray(z), c),
                            df=lambda z: np.polynomial.polynomial.polyval(np.asarray(z), dc)
                            if dc.size else np.zeros(np.shape(z), dtype=complex),
                            label="series")


def blaschke_fn(B: BlaschkeProduct) -> AnalyticFunction:
    return AnalyticFunction(kind="blaschke", f=B.eval, df=B.derivative,
                            zeros=B.zeros.copy(), label=f"blaschke[{len(B)}]")


def log_branch_fn() -> AnalyticFunction:
    """f(z) = log(1/(1-z)), principal branch; analytic on the disk."""

    def f(z):
        return -np.log(1.0 - np.asarray(z, dtype=complex))

    def df(z):
        return 1.0 / (1.0 - np.asarray(z, dtype=complex))

    return AnalyticFunction(kind="log_branch", f=f, df=df,
                            singular_directions=np.array([1.0 + 0.0j]),
                            label="log(1/(1-z))")


def test_function(a, p: float, s: float) -> AnalyticFunction:
    """The unit-scale family f_a(z) = (1-|a|^2)^(s/p) / (1 - conj(a) z)^(2s/p)."""
    a = as_complex(a)
    if not (p > 1.0 and 0.0 < s <= 1.0):
        raise ParameterError(f"test family needs p > 1 and 0 < s <= 1, got p={p}, s={s}")
    amp = (1.0 - abs(a) ** 2) ** (s / p)
    q = 2.0 * s / p
    dirs = np.array([a / abs(a)]) if abs(a) > 0 else np.zeros(0, dtype=complex)

    def f(z):
        return amp * (1.0 - np.conj(a) * np.asarray(z, dtype=complex)) ** (-q)

    def df(z):
        return amp * q * np.conj(a) * (1.0 - np.conj(a) * np.asarray(z, dtype=complex)) ** (-q - 1.0)

    return AnalyticFunction(kind="test_fn_a", f=f, df=df,
                            singular_directions=dirs, label=f"f_a(a={a})")


def compose_with_mobius(fn: AnalyticFunction, b, subtract_center: bool = True
                        ) -> AnalyticFunction:
    """g = f o sigma_b - f(sigma_b(0)), the Mobius-shifted representative."""
    b = as_complex(b)
    c0 = complex(np.asarray(fn.f(np.array([mobius_transform(b, 0.0)]))).ravel()[0]) \
        if subtract_center else 0.0

    def f(z):
        return fn.f(mobius_transform(b, np.asarray(z, dtype=complex))) - c0

    def df(z):
        z = np.asarray(z, dtype=complex)
        dphi = (abs(b) ** 2 - 1.0) / (1.0 - np.conj(b) * z) ** 2
        return fn.df(mobius_transform(b, z)) * dphi

    zeros = mobius_transform(b, fn.zeros) if fn.zeros.size else fn.zeros
    dirs = mobius_transform(b, 0.999999 * fn.singular_directions) if \
        fn.singular_directions.size else fn.singular_directions
    dirs = dirs / np.abs(dirs) if dirs.size else dirs
    return AnalyticFunction(kind=fn.kind, f=f, df=df, zeros=zeros,
                            singular_directions=dirs,
                            label=f"{fn.label} o sigma_{b}")


# -- norms and seminorms -----------------------------------------------------

@dataclass
class NormResult:
    value: float
    converged: bool
    rel_change: float
    detail: dict = field(default_factory=dict)

    def to_json_dict(self):
        return {"value": self.value,
                "verdict": "CONVERGED" if self.converged else "INCONCLUSIVE",
                "rel_change": self.rel_change, **self.detail}


def _needs_refinement(fn: AnalyticFunction) -> np.ndarray:
    # deep zeros produce |f'| spikes narrower than the angular cells
    return fn.zeros if fn.zeros.size else ()


def bps_norm(fn: AnalyticFunction, params: SpaceParams,
             config: QuadratureConfig = QuadratureConfig()) -> NormResult:
    """|f(0)| + (integral of |f'|^p (1-|z|^2)^(p-2+s) dA)^(1/p)."""
    params.require_besov()
    p, s = params.p, params.s
    f0 = abs(complex(np.asarray(fn.f(np.zeros(1, dtype=complex))).ravel()[0]))
    grid = build_disk_grid(config, singular_points=_needs_refinement(fn))
    vals = grid.evaluate(lambda z: np.abs(fn.df(z)) ** p)
    vals = vals * grid.boundary_weight(p - 2.0 + s)
    integral, integral_prev = grid.reduce(vals)
    value = f0 + max(integral, 0.0) ** (1.0 / p)
    prev = f0 + max(integral_prev, 0.0) ** (1.0 / p)
    rel = abs(value - prev) / max(value, 1e-300)
    return NormResult(value=value, converged=rel <= config.rel_tol, rel_change=rel,
                      detail={"f0": f0, "integral": integral,
                              "points": grid.n_points})


def default_sup_net(fn_or_points, max_depth: int = 5, coarse: int = 8) -> np.ndarray:
    """Net of automorphism centers: origin, a coarse ring, and rays toward the
    function's distinguished boundary directions (zeros or singularities)."""
    if isinstance(fn_or_points, AnalyticFunction):
        pts = np.concatenate([fn_or_points.zeros,
                              0.999 * fn_or_points.singular_directions])
    else:
        pts = np.atleast_1d(np.asarray(fn_or_points, dtype=complex))
    pts = pts[np.abs(pts) > 0.0]
    if pts.size:
        angles = np.unique(np.mod(np.angle(pts) / (2 * np.pi), 1.0))
        if angles.size > 24:
            angles = angles[:: int(math.ceil(angles.size / 24))]
    else:
        angles = np.array([0.0])
    radii = 1.0 - 2.0 ** (-np.arange(1, max_depth + 1, dtype=float))
    rays = (radii[:, None] * np.exp(2j * np.pi * angles[None, :])).ravel()
    ring = 0.875 * np.exp(2j * np.pi * (np.arange(coarse) + 0.5) / coarse)
    return np.concatenate([np.zeros(1, dtype=complex), rays, ring])


@dataclass
class FppsReport:
    value: float
    classification: str
    growth_slope: float
    extrapolated: bool
    per_a: list
    converged_all: bool
    params: dict = field(default_factory=dict)

    def to_json_dict(self):
        return {"value": self.value, "classification": self.classification,
                "slope": self.growth_slope, "extrapolated": self.extrapolated,
                "converged_all": self.converged_all,
                "per_a": self.per_a, "params": self.params}


def invariant_integrals(fn: AnalyticFunction, p: float, s: float, net,
                        config: QuadratureConfig = QuadratureConfig(),
                        grid: DiskGrid | None = None):
    """integral of |f'|^p (1-|z|^2)^(p-2) (1-|sigma_a|^2)^s dA for each a.

    Returns (entries, grid); each entry carries the value, the coarser-grid
    value, and a convergence flag.  The heavy |f'| map is evaluated once.
    """
    if grid is None:
        grid = build_disk_grid(config, singular_points=_needs_refinement(fn))
    base = grid.evaluate(lambda z: np.abs(fn.df(z)) ** p)
    base = base * grid.boundary_weight(p - 2.0)
    one_minus_sq = grid.one_minus_sq()
    entries = []
    for a in np.atleast_1d(np.asarray(net, dtype=complex)):
        lead = 1.0 - abs(a) ** 2
        wa = (lead * one_minus_sq / np.abs(1.0 - np.conj(a) * grid.z) ** 2) ** s
        val, prev = grid.reduce(base, wa)
        rel = abs(val - prev) / max(abs(val), 1e-300)
        entries.append({"a": [float(np.real(a)), float(np.imag(a))],
                        "integral": val, "coarser": prev,
                        "depth": float(-math.log2(max(1.0 - abs(a), 1e-300))),
                        "converged": bool(rel <= config.rel_tol),
                        "rel_change": rel})
    return entries, grid


def fpps_seminorm(fn: AnalyticFunction, params: SpaceParams,
                  net: np.ndarray | None = None,
                  config: QuadratureConfig = QuadratureConfig(),
                  classifier: ClassifierConfig = ClassifierConfig()) -> FppsReport:
    """sup over the net of the invariant integrals, with growth classification
    against the net depth -log2(1-|a|); the seminorm is the sup to the 1/p."""
    params.require_fpps()
    p, s = params.p, params.s
    if net is None:
        net = default_sup_net(fn)
    entries, _ = invariant_integrals(fn, p, s, net, config)
    depths = np.array([e["depth"] for e in entries])
    vals = np.array([e["integral"] for e in entries])
    levels = []
    for d in sorted(set(np.ceil(np.maximum(depths, 0.0)).tolist())):
        sel = depths <= d + 1e-9
        levels.append((float(d), float(vals[sel].max())))
    cls_, slope, _, extra = classify_growth(levels, classifier)
    sup = float(vals.max()) if vals.size else 0.0
    return FppsReport(value=max(sup, 0.0) ** (1.0 / p), classification=cls_,
                      growth_slope=slope, extrapolated=extra, per_a=entries,
                      converged_all=all(e["converged"] for e in entries),
                      params={"p": p, "s": s, "levels": levels})


def _sup_ring(fn: AnalyticFunction, j: int, per_ring: int = 512) -> np.ndarray:
    r = 1.0 - 2.0 ** (-j)
    if r == 0.0:
        return np.zeros(1, dtype=complex)
    n = min(per_ring, max(8, 8 * 2 ** j))
    ring = r * np.exp(2j * np.pi * (np.arange(n) + 0.5) / n)
    if fn.singular_directions.size:
        ring = np.concatenate([ring, r * fn.singular_directions])
    return ring


def bloch_seminorm(fn: AnalyticFunction, grid: np.ndarray | None = None,
                   depth: int = 16) -> float:
    """sup of (1-|z|^2) |f'(z)| over a boundary-refined grid (plus the zeros)."""
    if grid is None:
        rings = [_sup_ring(fn, j) for j in range(depth + 1)]
        if fn.zeros.size:
            rings.append(fn.zeros)
        pts = np.concatenate(rings)
    else:
        pts = np.atleast_1d(np.asarray(grid, dtype=complex))
    vals = (1.0 - np.abs(pts) ** 2) * np.abs(fn.df(pts))
    return float(np.max(vals))


@dataclass
class HinfReport:
    value: float
    classification: str
    growth_slope: float
    levels: list

    def to_json_dict(self):
        return {"value": self.value, "classification": self.classification,
                "slope": self.growth_slope, "levels": self.levels}


def hinf_norm(fn: AnalyticFunction, grid: np.ndarray | None = None,
              depth: int = 36,
              classifier: ClassifierConfig = ClassifierConfig()) -> HinfReport:
    """sup |f| over a boundary-refined grid; growth classified on log2(depth)."""
    if grid is not None:
        pts = np.atleast_1d(np.asarray(grid, dtype=complex))
        vals = np.abs(fn.f(pts))
        return HinfReport(float(vals.max()), "BOUNDED", 0.0, [])
    levels = []
    sup = 0.0
    for j in range(0, depth + 1):
        sup = max(sup, float(np.max(np.abs(fn.f(_sup_ring(fn, j))))))
        if j >= 1:
            levels.append((math.log2(j) if j > 1 else 0.0, sup))
    cls_, slope, _, _ = classify_growth(levels, classifier)
    return HinfReport(value=sup, classification=cls_, growth_slope=slope,
                      levels=levels)


def test_function_norms(a_list, params: SpaceParams,
                        config: QuadratureConfig = QuadratureConfig()) -> list:
    """Besov norms of the unit-scale family f_a along the given centers."""
    out = []
    for a in np.atleast_1d(np.asarray([as_complex(a) for a in np.atleast_1d(a_list)],
                                      dtype=complex)):
        fn = test_function(a, params.p, params.s)
        out.append(bps_norm(fn, params, config))
    return out


@dataclass
class MultiplierReport:
    verdict: str                 # MEMBER / NOT_MEMBER / INCONCLUSIVE
    hinf: HinfReport
    carleson: CarlesonReport
    discretization_stable: bool
    params: dict = field(default_factory=dict)

    def to_json_dict(self):
        return {"verdict": self.verdict, "hinf": self.hinf.to_json_dict(),
                "carleson": self.carleson.to_json_dict(),
                "discretization_stable": self.discretization_stable,
                "params": self.params}


def multiplier_test(fn: AnalyticFunction, params: SpaceParams,
                    config: QuadratureConfig = QuadratureConfig(),
                    classifier: ClassifierConfig = ClassifierConfig()) -> MultiplierReport:
    """Multiplier membership: bounded (H-inf test) and the derivative measure
    |g'|^p (1-|z|^2)^(p-2+s) dA Carleson for the Besov space, the measure being
    discretized cell-by-cell on the quadrature grid (midpoint rule)."""
    params.require_fpps()
    p, s = params.p, params.s
    h = hinf_norm(fn)
    # the discretized measure only feeds a growth classifier; a moderate grid is enough
    config = replace(config, max_angular=min(config.max_angular, 256),
                     boundary_levels=min(config.boundary_levels, 12))

    def atoms_for(cfg):
        grid = build_disk_grid(cfg, singular_points=_needs_refinement(fn))
        dens = grid.evaluate(lambda z: np.abs(fn.df(z)) ** p)
        dens = dens * grid.boundary_weight(p - 2.0 + s)
        main = (grid.part == PART_MAIN) & (grid.gap >= RIM_CLAMP)
        w = grid.w[main] * dens[main]
        keep = w > 0.0
        return PointMassMeasure(grid.z[main][keep], w[keep])

    mu = atoms_for(config)
    rep = bps_carleson_ratio(mu, s, config=classifier)
    coarse_cfg = replace(config, boundary_levels=max(4, config.boundary_levels - 2))
    rep_coarse = bps_carleson_ratio(atoms_for(coarse_cfg), s, config=classifier)
    stable = rep.classification == rep_coarse.classification
    h_ok = h.classification == "BOUNDED"
    c_ok = rep.classification == "BOUNDED"
    if h.classification == "INCONCLUSIVE" or rep.classification == "INCONCLUSIVE":
        verdict = "INCONCLUSIVE"
    elif h_ok and c_ok:
        verdict = "MEMBER"
    else:
        verdict = "NOT_MEMBER"
    return MultiplierReport(verdict=verdict, hinf=h, carleson=rep,
                            discretization_stable=stable,
                            params={"p": p, "s": s})
