"""Combinatorial limits of one-parameter families of hyperplane arrangements.

Vectors live over K = k((z)) with k = Q or F_p.  The package computes stable
and GIT-stable lattices in the affine building, convex hulls there, the
matroid decomposition of the hypersimplex read off from the limit, the dual
complex of the special fiber, the r = 3 limit surface and a tropical
cross-check.  Everything is exact.
"""

from .building import Lattice, LatticeClass, convex_hull, incident, is_convex
from .config import Configuration
from .errors import DomainError, ParseError
from .matroid import (Matroid, MatroidDecomposition, MatroidPolytope, aff_cohomology,
                      central_decomposition, cross_ratio, decomposition_from_limits,
                      dimension_audit, find_lax_order, is_lax, is_unimodular, verify_tiling)
from .membrane import (Arrangement, apartment_stratification, git_stable_classes,
                       in_membrane, limit_configuration, psi, stable_lattices)
from .scalar import QQ, BaseField, ScalarK, parse_scalar
from .specialfiber import enlarge_off_boundary, fiber_complex, limit_surface
from .tropical import circuits, trop_membership, verify_correspondence

__version__ = "0.1.0"

__all__ = [
    "Arrangement", "BaseField", "Configuration", "DomainError", "Lattice", "LatticeClass",
    "Matroid", "MatroidDecomposition", "MatroidPolytope", "ParseError", "QQ", "ScalarK",
    "aff_cohomology", "apartment_stratification", "central_decomposition", "circuits",
    "convex_hull", "cross_ratio", "decomposition_from_limits", "dimension_audit",
    "enlarge_off_boundary", "fiber_complex", "find_lax_order", "git_stable_classes",
    "in_membrane", "incident", "is_convex", "is_lax", "is_unimodular", "limit_configuration",
    "limit_surface", "parse_scalar", "psi", "stable_lattices", "trop_membership",
    "verify_correspondence", "verify_tiling",
]
