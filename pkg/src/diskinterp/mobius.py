"""Mobius transformations and pseudo-hyperbolic geometry of the open unit disk.

Everything here is a pure function of its inputs.  Functions accept plain
complex scalars, numpy arrays, or :class:`DiskPoint` wrappers and broadcast
like numpy ufuncs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DiskDomainError",
    "DiskPoint",
    "Rotation",
    "as_complex",
    "mobius_transform",
    "pseudo_hyperbolic",
    "invariant_weight",
]

# Points with 1-|z| below this are accepted but flagged: boundary weights
# like (1-|z|^2)^(p-2) amplify roundoff there.
RIM_FLAG_GAP = 1e-14


class DiskDomainError(ValueError):
    """Raised when a point does not lie strictly inside the unit disk."""


@dataclass(frozen=True)
class DiskPoint:
    """A complex number with |value| < 1 (strict).  Construction validates."""

    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise DiskDomainError(f"disk point must be finite, got {v!r}")
        if abs(v) >= 1.0:
            raise DiskDomainError(f"|z| must be < 1, got |{v!r}| = {abs(v)}")
        object.__setattr__(self, "value", v)

    @property
    def flagged(self) -> bool:
        """True when the point sits within RIM_FLAG_GAP of the boundary."""
        return 1.0 - abs(self.value) <= RIM_FLAG_GAP

    def __complex__(self) -> complex:
        return self.value


@dataclass(frozen=True)
class Rotation:
    """Rotation z -> e^(i*theta) z, the unimodular part of a disk automorphism."""

    theta: float

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError("rotation angle must be finite")

    @property
    def factor(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta))

    def apply(self, z):
        return self.factor * as_complex(z)


def as_complex(z):
    """Unwrap DiskPoint / coerce array-likes to complex."""
    if isinstance(z, DiskPoint):
        return z.value
    if isinstance(z, (complex, float, int)):
        return complex(z)
    return np.asarray(z, dtype=complex)


def mobius_transform(a, z):
    """The disk automorphism sigma_a(z) = (a - z) / (1 - conj(a) z).

    sigma_a swaps 0 and a and is an involution: sigma_a(sigma_a(z)) = z.
    """
    a = as_complex(a)
    z = as_complex(z)
    return (a - z) / (1.0 - np.conj(a) * z)


def pseudo_hyperbolic(a, z):
    """Pseudo-hyperbolic distance rho(a, z) = |a - z| / |1 - conj(a) z|.

    Mobius-invariant, valued in [0, 1) for interior points.
    """
    a = as_complex(a)
    z = as_complex(z)
    return np.abs(a - z) / np.abs(1.0 - np.conj(a) * z)


def invariant_weight(a, z):
    """The conformal weight 1 - |sigma_a(z)|^2, computed in product form.

    Returns (1-|a|^2)(1-|z|^2)/|1-conj(a) z|^2, which avoids the cancellation
    of evaluating 1 - |sigma_a(z)|^2 directly near the boundary.
    """
    a = as_complex(a)
    z = as_complex(z)
    num = (1.0 - np.abs(a) ** 2) * (1.0 - np.abs(z) ** 2)
    den = np.abs(1.0 - np.conj(a) * z) ** 2
    return num / den
