"""Exact computations with representations of diagrams.

Intertwiner spaces and their algebras, the dual coalgebras, the bialgebra
structure coming from a graded product, localization, period spaces and the
comparison map to Hom, finite torsors, isometry equations of pairings and
simplicial fixtures. Everything is computed over Q or a number field.
"""

from .diagram import (Diagram, GradedRepresentation, ProductStructure, Report, Representation,
                      validate_diagram, validate_graded, validate_representation)
from .endo import base_change, coalgebra, end_algebra, intertwiners, restrict
from .field import NumberField, ext_arith
from .linalg import Matrix, kernel_basis, rank, rref
from .periods import period_space, psi

__version__ = "0.1.0"

__all__ = [
    "Diagram",
    "GradedRepresentation",
    "Matrix",
    "NumberField",
    "ProductStructure",
    "Report",
    "Representation",
    "base_change",
    "coalgebra",
    "end_algebra",
    "ext_arith",
    "intertwiners",
    "kernel_basis",
    "period_space",
    "psi",
    "rank",
    "restrict",
    "rref",
    "validate_diagram",
    "validate_graded",
    "validate_representation",
]
