"""Exact computations for rank-1 sheaves on anticanonical members of the
quadric surface: classification of the members, splitting tables for direct
images and their verification against honest cohomology, quiver
presentations with relations, and the computable correspondences between
the three moduli descriptions."""

from .bimodules import (
    Descriptor,
    NRSheaf,
    descriptor_of_line_bundle,
    descriptor_of_nr_sheaf,
    hochschild_dims,
    nr_invertible_cohomology,
    nr_split_u,
    nr_split_v,
    split_ab,
    split_ab_prime,
    stability_classify,
)
from .curves import kodaira_classify, member_j
from .errors import DegenerateInstance, SpecialPosition, ValidationError
from .exactmath import QQ, PrimeField
from .linebundles import (
    Curve,
    LineBundle,
    isomorphic,
    section_space,
    split_from_cohomology,
    transport,
)
from .moduli import Quadruple, phi, phi_inverse, psi0, psi1, roundtrip0
from .polyring import MultiPoly

__version__ = "0.1.0"

__all__ = [
    "Curve",
    "DegenerateInstance",
    "Descriptor",
    "LineBundle",
    "MultiPoly",
    "NRSheaf",
    "PrimeField",
    "QQ",
    "Quadruple",
    "SpecialPosition",
    "ValidationError",
    "descriptor_of_line_bundle",
    "descriptor_of_nr_sheaf",
    "hochschild_dims",
    "isomorphic",
    "kodaira_classify",
    "member_j",
    "nr_invertible_cohomology",
    "nr_split_u",
    "nr_split_v",
    "phi",
    "phi_inverse",
    "psi0",
    "psi1",
    "roundtrip0",
    "section_space",
    "split_ab",
    "split_ab_prime",
    "split_from_cohomology",
    "stability_classify",
    "transport",
]
