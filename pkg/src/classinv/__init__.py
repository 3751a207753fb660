"""Class invariants from GL(2, Z/MZ) actions on eta quotients.

The pipeline: build the unit-group matrices of an imaginary quadratic
order at the function level, compute the fixed polynomials of the
determinant-one part, split the determinant cocycle to descend to a
rational space of class invariants, then evaluate over the class group
and recognize integral class polynomials.
"""

from .classpoly import (ClassPolynomial, QuadraticForm, class_number,
                        class_polynomial, conjugate_values, eval_invariant,
                        hilbert_class_polynomial, reduced_forms)
from .cyclotomic import CycloContext, CycloNum
from .modmat import ResidueMatrix, STWord, crt_lift_generators, decompose_st, split_det
from .qseries import QExpansion, recognize_linear, recognize_monomial
from .reciprocity import (InvariantPolynomial, OrderContext, ReciprocityGroup,
                          build_group, class_invariant_basis,
                          h_invariant_space, hilbert90_split,
                          min_invariant_degree, verify_class_invariant)
from .weber import ActionMatrix, FunctionBasis, action_of, action_s, action_sigma, action_t

__version__ = "0.1.0"

__all__ = [
    "ActionMatrix", "ClassPolynomial", "CycloContext", "CycloNum",
    "FunctionBasis", "InvariantPolynomial", "OrderContext", "QExpansion",
    "QuadraticForm", "ReciprocityGroup", "ResidueMatrix", "STWord",
    "action_of", "action_s", "action_sigma", "action_t", "build_group",
    "class_invariant_basis", "class_number", "class_polynomial",
    "conjugate_values", "crt_lift_generators", "decompose_st",
    "eval_invariant", "h_invariant_space", "hilbert90_split",
    "hilbert_class_polynomial", "min_invariant_degree", "recognize_linear",
    "recognize_monomial", "reduced_forms", "split_det",
    "verify_class_invariant",
]
