"""Exact Diophantine approximation and lattice dynamics over F_q((1/X))."""
from .errors import (DegreeMismatch, DimensionMismatch, DivideByZero, FFDiophError,
                     FieldMismatch, InsufficientPrecision, NonConvergent, NotPrime,
                     ParseError, ReducibleModulus, RepeatedPoint, SingularBasis,
                     WitnessTooWeak)
from .field_arith import FieldSpec, Poly, make_field, parse_field
from .laurent import LaurentBall, NormExp

__all__ = [
    "FieldSpec", "Poly", "make_field", "parse_field", "LaurentBall", "NormExp",
    "FFDiophError", "NotPrime", "ReducibleModulus", "DegreeMismatch", "FieldMismatch",
    "DivideByZero", "InsufficientPrecision", "NonConvergent", "SingularBasis",
    "DimensionMismatch", "RepeatedPoint", "WitnessTooWeak", "ParseError",
]
