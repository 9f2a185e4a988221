"""Canonical string forms for JSON reports and transcripts.

Field elements are written as their integer codes (base-p digit encodings);
polynomials as code lists, lowest degree first.
"""

from __future__ import annotations

import json

from .field import FieldElement, FiniteField
from .function_field import Divisor, Place, RationalFunction, Residue
from .poly import Polynomial


def poly_str(f: Polynomial) -> str:
    return "[" + ",".join(str(c) for c in f.c) + "]"


def parse_poly(F: FiniteField, s: str) -> Polynomial:
    codes = json.loads(s)
    return Polynomial(F, [F.coerce(int(c)) for c in codes])


def function_str(f: RationalFunction) -> str:
    if f.den.is_one():
        return poly_str(f.num)
    return f"{poly_str(f.num)}/{poly_str(f.den)}"


def parse_function(F: FiniteField, s: str) -> RationalFunction:
    num, _, den = s.partition("/")
    return RationalFunction(parse_poly(F, num), parse_poly(F, den) if den else None)


def place_str(P) -> str:
    if isinstance(P, Place):
        return "inf" if P.poly is None else poly_str(P.poly)
    return repr(P)


def parse_place(F: FiniteField, s: str) -> Place:
    s = s.strip()
    if s == "inf":
        return Place.infinite(F)
    return Place(F, parse_poly(F, s))


def divisor_str(D: Divisor) -> str:
    return "{" + ";".join(f"{place_str(P)}:{n}" for P, n in D.items()) + "}"


def value_str(v) -> str:
    if isinstance(v, Residue):
        return poly_str(v.poly)
    if isinstance(v, FieldElement):
        return str(v.code)
    return str(v)


def jsonable(obj):
    """Recursively convert to JSON-safe data; ints become decimal strings."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, RationalFunction):
        return function_str(obj)
    if isinstance(obj, Polynomial):
        return poly_str(obj)
    if isinstance(obj, Place):
        return place_str(obj)
    if isinstance(obj, Divisor):
        return divisor_str(obj)
    if isinstance(obj, (FieldElement, Residue)):
        return value_str(obj)
    return repr(obj)
