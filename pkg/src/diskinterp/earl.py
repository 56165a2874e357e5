"""Constructive interpolation by a scaled Blaschke product.

Given uniformly separated nodes z_n and bounded targets a_n, the solver finds
zeros zeta_n with rho(z_n, zeta_n) <= delta/3 and a constant `scale` so that
scale * B_zeta(z_n) = a_n to the requested tolerance.  Targets are pre-scaled
down when they are large relative to the separation; the reported scale
absorbs the amplification.  Every returned solution re-verifies its residuals
through the independent product evaluator; the solver never self-certifies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .blaschke import BlaschkeProduct
from .mobius import as_complex, mobius_transform, pseudo_hyperbolic
from .sequences import DiskSequence, uniform_separation_constant

__all__ = [
    "EarlError",
    "InterpolationProblem",
    "EarlSolution",
    "earl_interpolate",
    "verify_perturbation_comparabilities",
]

NODE_CAP = 16


class EarlError(RuntimeError):
    """Solver failure with a machine-readable reason code."""

    def __init__(self, code: str, message: str, best_residual: float | None = None):
        self.code = code
        self.best_residual = best_residual
        super().__init__(f"{code}: {message}")


@dataclass
class InterpolationProblem:
    """Nodes, target values, and the computed uniform separation delta."""

    nodes: DiskSequence
    values: np.ndarray
    delta: float = field(init=False)

    def __init__(self, nodes, values):
        self.nodes = nodes if isinstance(nodes, DiskSequence) else DiskSequence(nodes)
        vals = np.atleast_1d(np.asarray([as_complex(v) for v in np.atleast_1d(values)],
                                        dtype=complex))
        if vals.size != len(self.nodes):
            raise ValueError("values and nodes must have equal length")
        if not np.all(np.isfinite(vals)):
            raise ValueError("target values must be finite")
        self.values = vals
        self.delta = uniform_separation_constant(self.nodes)

    @property
    def sup_value(self) -> float:
        return float(np.max(np.abs(self.values)))

    def to_json_obj(self) -> dict:
        return {"nodes": self.nodes.to_json_obj(),
                "values": [[v.real, v.imag] for v in self.values]}

    @classmethod
    def from_json_obj(cls, obj) -> "InterpolationProblem":
        nodes = DiskSequence.from_json_obj(obj["nodes"])
        vals = [complex(v[0], v[1]) for v in obj["values"]]
        return cls(nodes, vals)


@dataclass
class EarlSolution:
    perturbed_zeros: DiskSequence
    scale: complex
    residuals: np.ndarray
    max_perturbation: float
    amplification: float
    iterations: int

    def interpolant(self):
        """f(z) = scale * B(z) with B the canonical product over the zeros."""
        B = BlaschkeProduct(self.perturbed_zeros.values)
        return lambda z, B=B, c=self.scale: c * B.eval(z)

    def to_json_obj(self) -> dict:
        return {"zeros": self.perturbed_zeros.to_json_obj(),
                "scale": [self.scale.real, self.scale.imag],
                "residuals": self.residuals.tolist(),
                "max_residual": float(self.residuals.max()),
                "max_perturbation": self.max_perturbation,
                "amplification": self.amplification,
                "iterations": self.iterations}


def _plain_product(zeta: np.ndarray, z: np.ndarray) -> np.ndarray:
    """prod_k (zeta_k - z) / (1 - conj(zeta_k) z), no unimodular normalization."""
    fac = (zeta[None, :] - z[:, None]) / (1.0 - np.conj(zeta)[None, :] * z[:, None])
    return np.prod(fac, axis=1)


def _canonical_constant(zeta: np.ndarray) -> complex:
    """c with B_canonical = c * plain product (|a|/a factors; -1 for origin zeros)."""
    c = 1.0 + 0.0j
    for a in zeta:
        c *= -1.0 if a == 0 else abs(a) / a
    return complex(c)


def _solve_scaled(nodes: np.ndarray, targets: np.ndarray, rho_cap: float,
                  tol: float, max_iter: int):
    """Damped Gauss-Newton for plain_product(zeta(w))(z_n) = targets.

    zeta_n = sigma_{z_n}(w_n) keeps rho(z_n, zeta_n) = |w_n|; iterates are
    projected onto |w_n| <= rho_cap.  Returns (w, residual_inf, iterations).
    """
    n = nodes.size
    w = np.zeros(n, dtype=complex)

    def zeta_of(w):
        return mobius_transform(nodes, w)

    def residual(w):
        return _plain_product(zeta_of(w), nodes) - targets

    def project(w):
        mod = np.abs(w)
        over = mod > rho_cap
        if np.any(over):
            w = w.copy()
            w[over] *= (rho_cap * (1.0 - 1e-12)) / mod[over]
        return w

    r = residual(w)
    best = float(np.max(np.abs(r)))
    it = 0
    # balances FD truncation (h^2) against residual cancellation (eps/h)
    h = 3e-6 * max(rho_cap, 1e-2)
    while best > tol and it < max_iter:
        it += 1
        # numerical Jacobian of the 2n real residuals in the 2n real unknowns
        J = np.empty((2 * n, 2 * n))
        for k in range(n):
            for part, dw in ((0, h), (1, 1j * h)):
                wp = w.copy()
                wp[k] += dw
                wm = w.copy()
                wm[k] -= dw
                col = (residual(wp) - residual(wm)) / (2.0 * h)
                J[0::2, 2 * k + part] = col.real
                J[1::2, 2 * k + part] = col.imag
        rhs = np.empty(2 * n)
        rhs[0::2] = -r.real
        rhs[1::2] = -r.imag
        step, *_ = np.linalg.lstsq(J, rhs, rcond=None)
        dstep = step[0::2] + 1j * step[1::2]
        lam = 1.0
        improved = False
        for _ in range(25):
            w_try = project(w + lam * dstep)
            r_try = residual(w_try)
            res_try = float(np.max(np.abs(r_try)))
            if res_try < best:
                w, r, best = w_try, r_try, res_try
                improved = True
                break
            lam *= 0.5
        if not improved:
            break
    return w, best, it


def earl_interpolate(problem: InterpolationProblem, tol: float = 1e-10,
                     max_iter: int = 60) -> EarlSolution:
    """Solve the constrained interpolation and certify the result.

    Raises EarlError(NOT_UNIFORMLY_SEPARATED | NON_CONVERGENCE |
    CONSTRAINT_VIOLATION) on failure.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    nodes = problem.nodes.values
    n = nodes.size
    if n > NODE_CAP:
        raise ValueError(f"at most {NODE_CAP} nodes supported, got {n}")
    delta = problem.delta
    if delta <= 0.0:
        raise EarlError("NOT_UNIFORMLY_SEPARATED",
                        "nodes have uniform separation 0")
    values = problem.values
    M = problem.sup_value
    if M == 0.0:
        return EarlSolution(perturbed_zeros=DiskSequence(nodes.copy(),
                                                         label="earl zeros"),
                            scale=0.0 + 0.0j, residuals=np.zeros(n),
                            max_perturbation=0.0, amplification=1.0, iterations=0)

    # canonical frames: rotate the first nonzero node onto the positive axis and
    # the dominant value onto the positive axis, so the solve is frame-invariant
    anchor = next((x for x in nodes if x != 0), 1.0 + 0.0j)
    rot = anchor / abs(anchor)
    nodes_c = nodes / rot
    k_dom = int(np.argmax(np.abs(values)))
    phase = values[k_dom] / abs(values[k_dom])
    values_c = values / phase

    rho_cap = delta / 3.0
    scale0 = 3.0 * M / delta ** 2
    attempts = 0
    best_overall = math.inf
    while attempts < 7:
        attempts += 1
        targets = values_c / scale0
        if float(np.max(np.abs(targets))) <= rho_cap * delta * 1.05:
            w, res, its = _solve_scaled(nodes_c, targets, rho_cap, tol / scale0,
                                        max_iter)
            best_overall = min(best_overall, res * scale0)
            if res * scale0 <= tol:
                zeta = rot * mobius_transform(nodes_c, w)
                # each plain factor gains one rot under the frame rotation
                c_plain = scale0 * phase / rot ** n
                # fold the canonical normalization into the reported scale
                scale = c_plain / _canonical_constant(zeta)
                B = BlaschkeProduct(zeta)
                resid = np.abs(scale * B.eval(nodes) - values)
                if float(resid.max()) > tol * 4.0:
                    raise EarlError(
                        "NON_CONVERGENCE",
                        f"re-evaluation residual {float(resid.max()):.3e} "
                        f"exceeds tolerance {tol:.1e}",
                        best_residual=float(resid.max()))
                pert = pseudo_hyperbolic(nodes, zeta)
                if float(pert.max()) > rho_cap * (1.0 + 1e-9):
                    raise EarlError(
                        "CONSTRAINT_VIOLATION",
                        f"perturbation {float(pert.max()):.3e} exceeds delta/3",
                        best_residual=float(resid.max()))
                return EarlSolution(
                    perturbed_zeros=DiskSequence(zeta, label="earl zeros"),
                    scale=scale, residuals=resid,
                    max_perturbation=float(pert.max()),
                    amplification=float(scale0 / max(M, 1e-300)),
                    iterations=its)
        scale0 *= 4.0
    raise EarlError("NON_CONVERGENCE",
                    f"no admissible solution within {max_iter} iterations "
                    f"(best residual {best_overall:.3e})",
                    best_residual=best_overall)


def verify_perturbation_comparabilities(nodes, zeros, w_net=None) -> dict:
    """Ratio brackets for smallness of the node-to-zero perturbation.

    Checks, over all n (and a w-net for the kernel comparison), the four
    quantities 1-|z_n|, 1-|zeta_n|, |1 - conj(z_n) zeta_n| pairwise, and
    |1 - conj(z_n) w| vs |1 - conj(zeta_n) w|.
    """
    z = nodes.values if isinstance(nodes, DiskSequence) else \
        np.atleast_1d(np.asarray(nodes, dtype=complex))
    zt = zeros.values if isinstance(zeros, DiskSequence) else \
        np.atleast_1d(np.asarray(zeros, dtype=complex))
    if z.size != zt.size:
        raise ValueError("nodes and zeros must have equal length")
    rho = pseudo_hyperbolic(z, zt)
    gaps_z = 1.0 - np.abs(z)
    gaps_t = 1.0 - np.abs(zt)
    cross = np.abs(1.0 - np.conj(z) * zt)
    if w_net is None:
        rng = np.random.default_rng(0)
        w_net = 0.97 * np.sqrt(rng.uniform(size=64)) * \
            np.exp(2j * np.pi * rng.uniform(size=64))
    w_net = np.atleast_1d(np.asarray(w_net, dtype=complex))
    kernel_ratio = np.abs(1.0 - np.conj(z)[:, None] * w_net[None, :]) / \
        np.abs(1.0 - np.conj(zt)[:, None] * w_net[None, :])

    def bracket(x):
        return [float(np.min(x)), float(np.max(x))]

    return {
        "max_rho": float(rho.max()),
        "gap_ratio": bracket(gaps_z / gaps_t),
        "gap_vs_cross": bracket(gaps_z / cross),
        "zero_gap_vs_cross": bracket(gaps_t / cross),
        "kernel_ratio": bracket(kernel_ratio),
    }
