"""Exact class groups, Picard groups and purity of toric varieties."""

from .abelian import FgAbGroup, GroupElement, contained_in_free_part, subgroup_profile
from .fans import Cone, Fan, FanMatrix
from .linalg import Lattice, hnf, integer_kernel, snf

__all__ = [
    "Cone",
    "Fan",
    "FanMatrix",
    "FgAbGroup",
    "GroupElement",
    "Lattice",
    "contained_in_free_part",
    "hnf",
    "integer_kernel",
    "snf",
    "subgroup_profile",
]

__version__ = "0.1.0"
