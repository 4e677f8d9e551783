from .exponential import (
    Direction,
    Method,
    Propagator,
    backward_diagonal,
    diagonal_dominance_check,
    exponential_from_spectrum,
    matrix_exponential,
    permutation_times,
    propagator_pair,
    rotation_closed_form,
    rotation_propagator,
    scaling_squaring_exponential,
)
from .extrema import ExtremaRow, extrema_row
from .signs import SignClassification, SignKind, classify_signs, is_cyclic_permutation, rows_with_negative_entry

__all__ = [
    "Direction",
    "ExtremaRow",
    "Method",
    "Propagator",
    "SignClassification",
    "SignKind",
    "backward_diagonal",
    "classify_signs",
    "diagonal_dominance_check",
    "exponential_from_spectrum",
    "extrema_row",
    "is_cyclic_permutation",
    "matrix_exponential",
    "permutation_times",
    "propagator_pair",
    "rotation_closed_form",
    "rotation_propagator",
    "rows_with_negative_entry",
    "scaling_squaring_exponential",
]
