"""Curves over finite fields: point counting, Jacobians, divisor lattices, and
recovery of function-field embeddings from multiplicative data."""

__version__ = "0.1.0"

from .config import CurveConfig, parse_curve_spec
from .counting import (CurveHandle, divisor_class_sequence, exact_residue_count,
                       is_principal, lefschetz_consistency, relation_lattice,
                       unit_image_lattice)
from .errors import AnabeliaError, OracleRejected, ParseError, ValidationError
from .field import FieldElement, FiniteField, gf
from .function_field import (ConstantTower, Divisor, ExceptionalSet, Mobius, Place,
                             RationalFunction, principal_divisor, unit_sum_decompose)
from .hyperelliptic import (HyperellipticCurve, LPolynomial, MumfordDivisor,
                            p_primary_exponent, torsion_probe)
from .poly import Polynomial

__all__ = [
    "AnabeliaError", "ConstantTower", "CurveConfig", "CurveHandle", "Divisor",
    "ExceptionalSet", "FieldElement", "FiniteField", "HyperellipticCurve", "LPolynomial",
    "Mobius", "MumfordDivisor", "OracleRejected", "ParseError", "Place", "Polynomial",
    "RationalFunction", "ValidationError", "__version__", "divisor_class_sequence",
    "exact_residue_count", "gf", "is_principal", "lefschetz_consistency",
    "p_primary_exponent", "parse_curve_spec", "principal_divisor", "relation_lattice",
    "torsion_probe", "unit_image_lattice", "unit_sum_decompose",
]
