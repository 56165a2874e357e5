"""Finite Blaschke products: evaluation, derivatives, and inner membership.

A zero at the origin contributes the factor z (the usual normalization |a|/a
is undefined there).  Products with more than DIRECT_PRODUCT_LIMIT factors are
evaluated as exp of a sum of logs for stability, with exact zeros detected and
short-circuited first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .carleson import (CarlesonReport, ClassifierConfig, build_net,
                       kernel_constant, weights_from_sequence)
from .mobius import as_complex, pseudo_hyperbolic
from .sequences import DiskSequence

__all__ = ["BlaschkeProduct", "BlaschkeZeroError", "log_derivative_sum",
           "inner_membership_test"]

DIRECT_PRODUCT_LIMIT = 64
ZERO_GUARD_RHO = 1e-13


class BlaschkeZeroError(ValueError):
    """Raised when an operation is evaluated at or too close to a zero."""

    def __init__(self, index, point):
        self.index = index
        self.point = point
        super().__init__(
            f"point {point!r} is within rho={ZERO_GUARD_RHO} of zero #{index}")


def _zeros_array(zeros) -> np.ndarray:
    if isinstance(zeros, DiskSequence):
        z = zeros.values.copy()
    else:
        z = np.atleast_1d(np.asarray([as_complex(a) for a in np.atleast_1d(zeros)],
                                     dtype=complex))
    if z.size and np.any(np.abs(z) >= 1.0):
        raise ValueError("Blaschke zeros must lie strictly inside the disk")
    return z


def _flatten(z):
    c = as_complex(z)
    scalar = not isinstance(c, np.ndarray) or c.ndim == 0
    flat = np.atleast_1d(np.asarray(c, dtype=complex)).ravel()
    shape = () if scalar else np.asarray(c).shape
    return flat, scalar, shape


@dataclass
class BlaschkeProduct:
    """Finite Blaschke product with the given zero list (repeats = multiplicity)."""

    zeros: np.ndarray

    def __init__(self, zeros):
        self.zeros = _zeros_array(zeros)

    def __len__(self):
        return self.zeros.size

    def _factors(self, z: np.ndarray) -> np.ndarray:
        """Factor matrix of shape (len(z), n_zeros)."""
        a = self.zeros[None, :]
        zz = z[:, None]
        safe = np.where(self.zeros == 0, 1.0, self.zeros)
        unim = np.where(np.abs(self.zeros) > 0.0, np.abs(self.zeros) / safe, 1.0)
        fac = unim[None, :] * (a - zz) / (1.0 - np.conj(a) * zz)
        origin = self.zeros == 0.0
        if np.any(origin):
            fac[:, origin] = zz
        return fac

    def _factor_derivs(self, z: np.ndarray) -> np.ndarray:
        a = self.zeros[None, :]
        zz = z[:, None]
        safe = np.where(self.zeros == 0, 1.0, self.zeros)
        unim = np.where(np.abs(self.zeros) > 0.0, np.abs(self.zeros) / safe, 1.0)
        der = unim[None, :] * (np.abs(a) ** 2 - 1.0) / (1.0 - np.conj(a) * zz) ** 2
        origin = self.zeros == 0.0
        if np.any(origin):
            der[:, origin] = 1.0
        return der

    def eval(self, z):
        """B(z) for |z| <= 1; exactly 0 at the zeros, |B| <= 1 on the closed disk."""
        flat, scalar, shape = _flatten(z)
        if len(self) == 0:
            out = np.ones_like(flat)
        elif len(self) <= DIRECT_PRODUCT_LIMIT:
            out = np.prod(self._factors(flat), axis=1)
        else:
            out = np.empty_like(flat)
            for start in range(0, flat.size, 4096):
                blk = flat[start:start + 4096]
                fac = self._factors(blk)
                dead = np.any(fac == 0.0, axis=1)
                vals = np.zeros_like(blk)
                if np.any(~dead):
                    vals[~dead] = np.exp(np.sum(np.log(fac[~dead]), axis=1))
                out[start:start + 4096] = vals
        return complex(out[0]) if scalar else out.reshape(shape)

    def derivative(self, z):
        """Exact product-rule derivative; finite at and near the zeros."""
        flat, scalar, shape = _flatten(z)
        if len(self) == 0:
            out = np.zeros_like(flat)
        else:
            out = np.empty_like(flat)
            n = len(self)
            for start in range(0, flat.size, 2048):
                blk = flat[start:start + 2048]
                fac = self._factors(blk)
                der = self._factor_derivs(blk)
                # exclusive prefix/suffix products give prod_{j != k} factor_j
                pre = np.ones((blk.size, n), dtype=complex)
                suf = np.ones((blk.size, n), dtype=complex)
                if n > 1:
                    pre[:, 1:] = np.cumprod(fac[:, :-1], axis=1)
                    suf[:, -2::-1] = np.cumprod(fac[:, :0:-1], axis=1)
                out[start:start + 2048] = np.sum(der * pre * suf, axis=1)
        return complex(out[0]) if scalar else out.reshape(shape)

    def log_derivative(self, z):
        """B'(z)/B(z) = sum_n (|z_n|^2 - 1) / ((z_n - z)(1 - conj(z_n) z)).

        Rejects points within pseudo-hyperbolic distance ZERO_GUARD_RHO of a
        zero, naming the offending index.
        """
        flat, scalar, shape = _flatten(z)
        if len(self) == 0:
            raise ValueError("log-derivative of an empty product is undefined")
        chunk = max(1, int(4_000_000 // len(self)))
        for start in range(0, flat.size, chunk):
            blk = flat[start:start + chunk]
            rho = pseudo_hyperbolic(blk[:, None], self.zeros[None, :])
            bad = np.nonzero(rho <= ZERO_GUARD_RHO)
            if bad[0].size:
                raise BlaschkeZeroError(int(bad[1][0]), complex(blk[bad[0][0]]))
        out = log_derivative_sum(self.zeros, flat)
        return complex(out[0]) if scalar else out.reshape(shape)


def log_derivative_sum(zeros: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Unguarded vectorized form of the log-derivative sum (callers guard)."""
    zeros = np.asarray(zeros, dtype=complex)
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    res = np.zeros(flat.shape, dtype=complex)
    chunk = max(1, int(4_000_000 // max(zeros.size, 1)))
    for start in range(0, flat.size, chunk):
        blk = flat[start:start + chunk][:, None]
        a = zeros[None, :]
        res[start:start + chunk] = np.sum(
            (np.abs(a) ** 2 - 1.0) / ((a - blk) * (1.0 - np.conj(a) * blk)), axis=1)
    return res.reshape(z.shape)


def inner_membership_test(B: BlaschkeProduct, p: float, s: float,
                          net: np.ndarray | None = None,
                          config: ClassifierConfig = ClassifierConfig()) -> CarlesonReport:
    """Numerical membership test of a Blaschke product in F(p, p-2, s).

    Valid for 0 < s < 1 and p > max(s, 1-s): membership is equivalent to the
    zero measure sum (1-|z_k|^2)^s delta_{z_k} being s-Carleson, tested here
    through the kernel criterion with t = s.
    """
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must be in (0,1), got {s}")
    if p <= max(s, 1.0 - s):
        raise ValueError(
            f"p must exceed max(s, 1-s) = {max(s, 1.0 - s)}, got p={p}")
    if len(B) == 0:
        report = CarlesonReport(test="kernel", constant_estimate=0.0, witness={},
                                classification="BOUNDED", growth_slope=0.0,
                                stabilized=True, extrapolated=False, levels=[],
                                params={"p": p, "s": s, "membership": True,
                                        "note": "empty product is constant 1"})
        return report
    mu = weights_from_sequence(B.zeros, s)
    if net is None:
        net = build_net(B.zeros)
    report = kernel_constant(mu, s, s, net=net, config=config)
    report.params.update({"p": p, "membership": report.classification == "BOUNDED"})
    return report
