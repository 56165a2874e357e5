"""diskinterp: numerics for interpolating sequences and Carleson measures on the unit disk."""

__version__ = "0.1.0"

from .mobius import (DiskDomainError, DiskPoint, Rotation, invariant_weight,
                     mobius_transform, pseudo_hyperbolic)
from .sequences import (DiskSequence, SeparationReport, blaschke_sum,
                        gen_bwy_candidate, gen_clustered, gen_perturbed_radial,
                        gen_radial, gen_stolz, separation_constant,
                        sequence_metrics, uniform_separation_constant)
from .carleson import (BOUNDED, DIVERGENT, INCONCLUSIVE, CarlesonReport,
                       ClassifierConfig, PointMassMeasure, box_constant,
                       bps_carleson_ratio, build_net, kernel_constant,
                       weights_from_sequence)
from .blaschke import BlaschkeProduct, BlaschkeZeroError, inner_membership_test

__all__ = [
    "DiskDomainError", "DiskPoint", "Rotation", "invariant_weight",
    "mobius_transform", "pseudo_hyperbolic",
    "DiskSequence", "SeparationReport", "blaschke_sum", "gen_bwy_candidate",
    "gen_clustered", "gen_perturbed_radial", "gen_radial", "gen_stolz",
    "separation_constant", "sequence_metrics", "uniform_separation_constant",
    "BOUNDED", "DIVERGENT", "INCONCLUSIVE", "CarlesonReport", "ClassifierConfig",
    "PointMassMeasure", "box_constant", "bps_carleson_ratio", "build_net",
    "kernel_constant", "weights_from_sequence",
    "BlaschkeProduct", "BlaschkeZeroError", "inner_membership_test",
]
