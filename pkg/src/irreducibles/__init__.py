"""Combinatorial constants for irreducible elements in rings of integers,
with an exact imaginary quadratic backend for checking them."""

from .errors import IrreduciblesError
from .extremal import MaximizationResult, PolynomialP, build_P, maximize_on_simplex
from .groups import ClassOrdering, FiniteAbelianGroup, canonical_ordering, cyclic, make_group
from .progression import (
    ProgressionConstants,
    ProgressionInstance,
    predicted_progression_count,
    progression_constants,
)
from .typelab import (
    TypeSet,
    davenport,
    enumerate_irreducible_types,
    extend_to_irreducible,
    maximal_types,
    types_maximal_wrt,
)

__version__ = "0.1.0"
