"""Exact computational algebra over fields of characteristic two.

Quadratic spaces, their involutory isometries and Wiitala decompositions,
Clifford algebras with induced involutions, and the constructive
decomposition of split tensor products of quaternion algebras with
involution into split quaternion factors.
"""

from .fields import (
    FieldValue,
    GaloisField,
    RationalFunctionField,
    SquareClass,
    galois_field,
    rational_function_field,
)

__all__ = [
    "FieldValue",
    "GaloisField",
    "RationalFunctionField",
    "SquareClass",
    "galois_field",
    "rational_function_field",
]

__version__ = "0.1.0"
