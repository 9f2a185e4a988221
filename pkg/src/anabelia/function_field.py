"""The rational function field F_q(t): places, valuations, divisors, units.

Residue fields are modelled concretely: the value of f at a finite place
(pi) is the class of f in F_q[t]/(pi), stored as a polynomial of degree
< deg(pi); at the infinite place it is a constant.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .errors import (BadAlpha, InfinitePlaceInE, NoFreeRationalPlace,
                     SpecMismatch, ZeroFunction)
from .field import Embedding, FieldElement, FiniteField, embedding, gf
from .poly import (Polynomial, _divmod, _gcd, _mul, _trim, _xgcd,
                   factor, irreducibles)


class _Pole:
    """Value of a function at one of its poles."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Pole"

    def __reduce__(self):
        return (_Pole, ())


POLE = _Pole()


def _poly_str(f: Polynomial, var="t"):
    return repr(f).replace("x", var)


# --- places ---------------------------------------------------------------

class Place:
    """A place of F_q(t): a monic irreducible pi, or the infinite place."""

    __slots__ = ("field", "poly")

    def __init__(self, field: FiniteField, poly: Polynomial | None = None):
        if poly is not None:
            if poly.field is not field:
                raise SpecMismatch("place polynomial over the wrong field")
            if not poly.is_monic() or poly.degree < 1:
                raise ValueError("a finite place needs a monic nonconstant polynomial")
        self.field = field
        self.poly = poly

    @classmethod
    def infinite(cls, field):
        return cls(field, None)

    @classmethod
    def finite(cls, poly: Polynomial):
        return cls(poly.field, poly)

    @classmethod
    def linear(cls, field, a):
        """The place t = a."""
        x = Polynomial.x(field)
        return cls(field, x - a)

    @property
    def is_infinite(self):
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    def sort_key(self):
        if self.poly is None:
            return (1, 1, 0)
        return (self.poly.degree, 0, self.poly.code)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __eq__(self, other):
        if not isinstance(other, Place):
            return NotImplemented
        return self.field is other.field and self.poly == other.poly

    def __hash__(self):
        return hash((self.field.q, None if self.poly is None else self.poly.c))

    def __repr__(self):
        return "inf" if self.poly is None else f"({_poly_str(self.poly)})"

    def uniformizer(self) -> "RationalFunction":
        if self.poly is None:
            return RationalFunction(Polynomial.const(self.field, 1), Polynomial.x(self.field))
        return RationalFunction.from_poly(self.poly)

    def rational_point(self) -> FieldElement | None:
        """The coordinate a of a degree-1 finite place (t - a)."""
        if self.poly is None or self.poly.degree != 1:
            return None
        return -self.poly[0]


def places_of_degree(field: FiniteField, d: int) -> list:
    """All places of degree d, finite ones by code, then infinity when d = 1."""
    out = [Place(field, pi) for pi in irreducibles(field, d)]
    if d == 1:
        out.append(Place.infinite(field))
    return out


# --- residues ----------------------------------------------------------------

class Residue:
    """Element of the residue field at a place."""

    __slots__ = ("place", "c")

    def __init__(self, place: Place, value):
        F = place.field
        if isinstance(value, Polynomial):
            c = value.c
        elif isinstance(value, (int, FieldElement)):
            c = _trim([F.coerce(value)])
        elif isinstance(value, tuple):
            c = _trim(value)
        else:
            raise TypeError(type(value).__name__)
        if place.poly is not None:
            if len(c) >= len(place.poly.c):
                c = _divmod(F, c, place.poly.c)[1]
        elif len(c) > 1:
            raise ValueError("residue at infinity must be a constant")
        self.place = place
        self.c = c

    @property
    def field(self):
        return self.place.field

    @property
    def size(self):
        return self.place.field.q ** self.place.degree

    @property
    def poly(self) -> Polynomial:
        return Polynomial._raw(self.place.field, self.c)

    def is_zero(self):
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def constant(self) -> FieldElement:
        if len(self.c) > 1:
            raise ValueError("residue is not a constant")
        return FieldElement(self.place.field, self.c[0] if self.c else 0)

    def _other(self, other):
        if isinstance(other, Residue):
            if other.place != self.place:
                raise SpecMismatch(f"residues at {self.place} and {other.place}")
            return other.c
        if isinstance(other, (int, FieldElement, Polynomial)):
            return Residue(self.place, other).c
        return None

    def _wrap(self, c):
        return Residue(self.place, c)

    def __add__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return self._wrap((self.poly + Polynomial._raw(self.field, b)).c)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return self._wrap((self.poly - Polynomial._raw(self.field, b)).c)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._wrap((-self.poly).c)

    def __mul__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return self._wrap(_mul(self.field, self.c, b))

    __rmul__ = __mul__

    def inverse(self) -> "Residue":
        if not self.c:
            raise ZeroDivisionError("inverse of zero residue")
        F = self.field
        if self.place.poly is None:
            return self._wrap((F.inv(self.c[0]),))
        g, s, _ = _xgcd(F, self.c, self.place.poly.c)
        return self._wrap(s)

    def __truediv__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return self * Residue(self.place, b).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Residue(self.place, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.place == other.place and self.c == other.c
        if isinstance(other, (int, FieldElement, Polynomial)):
            try:
                return self.c == Residue(self.place, other).c
            except SpecMismatch:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.place, self.c))

    def __repr__(self):
        if len(self.c) <= 1:
            return repr(self.constant())
        return f"[{_poly_str(self.poly)} mod {self.place}]"


# --- rational functions ---------------------------------------------------------

class RationalFunction:
    """num/den with gcd 1 and den monic; zero is 0/1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        F = num.field
        if den is None:
            den = Polynomial._raw(F, (1,))
        if den.field is not F:
            raise SpecMismatch("numerator and denominator over different fields")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, Polynomial._raw(F, (1,))
            return
        nc, dc = num.c, den.c
        if len(dc) > 1:
            g = _gcd(F, nc, dc)
            if len(g) > 1:
                nc = _divmod(F, nc, g)[0]
                dc = _divmod(F, dc, g)[0]
        lc = dc[-1]
        if lc != 1:
            inv = F.inv(lc)
            mul = F.mul
            nc = tuple(mul(x, inv) for x in nc)
            dc = tuple(mul(x, inv) for x in dc)
        self.num = Polynomial._raw(F, nc)
        self.den = Polynomial._raw(F, dc)

    # -- constructors --------------------------------------------------------
    @classmethod
    def from_poly(cls, f: Polynomial):
        return cls(f)

    @classmethod
    def t(cls, field):
        return cls(Polynomial.x(field))

    @classmethod
    def const(cls, field, value):
        return cls(Polynomial.const(field, value))

    @classmethod
    def _raw(cls, num, den):
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @property
    def field(self):
        return self.num.field

    # -- predicates ------------------------------------------------------------
    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_one()

    def constant_value(self) -> FieldElement:
        if not self.is_constant():
            raise ValueError("not a constant function")
        return self.num[0]

    def is_polynomial(self):
        return self.den.is_one()

    @property
    def degree(self) -> int:
        """Degree as a map P^1 -> P^1."""
        if self.is_zero():
            return 0
        return max(len(self.num.c), len(self.den.c)) - 1

    # -- arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.field is not self.field:
                raise SpecMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, FieldElement)):
            return RationalFunction.const(self.field, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction._raw(self.num**n, self.den**n)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, RationalFunction) else other
        if o is None:
            return NotImplemented
        return self.field is o.field and self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __reduce__(self):
        return (RationalFunction, (self.num, self.den))

    def __repr__(self):
        if self.den.is_one():
            return _poly_str(self.num)
        n, d = _poly_str(self.num), _poly_str(self.den)
        if " " in n:
            n = f"({n})"
        if " " in d:
            d = f"({d})"
        return f"{n}/{d}"

    # -- maps ----------------------------------------------------------------------
    def map_coeffs(self, func, field: FiniteField) -> "RationalFunction":
        """Apply a field homomorphism (on codes) to all coefficients."""
        return RationalFunction(self.num.map_coeffs(func, field), self.den.map_coeffs(func, field))

    def lift(self, field: FiniteField, emb: Embedding | None = None):
        if field is self.field:
            return self
        emb = emb or embedding(self.field, field)
        return RationalFunction._raw(self.num.map_coeffs(emb.code, field),
                                     self.den.map_coeffs(emb.code, field))

    def frobenius(self, i: int = 1):
        return RationalFunction._raw(self.num.frobenius(i), self.den.frobenius(i))

    def frobenius_power(self, s: int):
        """self ** (p ** s), computed coefficientwise."""
        if s == 0:
            return self
        F = self.field
        k = F.p**s

        def spread(f):
            c = [0] * ((len(f.c) - 1) * k + 1)
            for i, a in enumerate(f.c):
                c[i * k] = F.frob(a, s)
            return Polynomial._raw(F, tuple(c))

        return RationalFunction._raw(spread(self.num), spread(self.den))

    def compose(self, T: "RationalFunction") -> "RationalFunction":
        """self(T)."""
        if self.is_zero():
            return self
        P, Q = T.num, T.den
        m, n = len(self.num.c) - 1, len(self.den.c) - 1
        A = _homogenize(self.num, P, Q, m)
        B = _homogenize(self.den, P, Q, n)
        if n > m:
            A = A * Q ** (n - m)
        elif m > n:
            B = B * Q ** (m - n)
        return RationalFunction(A, B)

    def __call__(self, x):
        """Value at a point of the coefficient field, or POLE."""
        F = self.field
        a = F.coerce(x)
        d = self.den.eval_code(a)
        if d == 0:
            return POLE
        return FieldElement(F, F.div(self.num.eval_code(a), d))


def _homogenize(A: Polynomial, P: Polynomial, Q: Polynomial, m: int) -> Polynomial:
    F = A.field
    out = Polynomial._raw(F, ())
    Ppow = Polynomial._raw(F, (1,))
    Qpows = [Polynomial._raw(F, (1,))]
    for _ in range(m):
        Qpows.append(Qpows[-1] * Q)
    for i, a in enumerate(A.c):
        if a:
            out = out + (Ppow * Qpows[m - i]).scale(FieldElement(F, a))
        Ppow = Ppow * P
    return out


# --- valuations, evaluation, divisors ---------------------------------------------------

def _multiplicity(F, f, pi):
    k = 0
    c = f
    while True:
        q, r = _divmod(F, c, pi)
        if r:
            return k
        k += 1
        c = q


def ord_at(f: RationalFunction, P: Place) -> int:
    """Valuation of f at P."""
    if f.is_zero():
        raise ZeroFunction("ord of the zero function")
    if P.field is not f.field:
        raise SpecMismatch(f"place over {P.field}, function over {f.field}")
    if P.poly is None:
        return (len(f.den.c) - 1) - (len(f.num.c) - 1)
    F = f.field
    return _multiplicity(F, f.num.c, P.poly.c) - _multiplicity(F, f.den.c, P.poly.c)


def evaluate(f: RationalFunction, P: Place):
    """Residue of f at P, or POLE."""
    if P.field is not f.field:
        raise SpecMismatch(f"place over {P.field}, function over {f.field}")
    if f.is_zero():
        return Residue(P, 0)
    F = f.field
    if P.poly is None:
        dn, dd = len(f.num.c), len(f.den.c)
        if dn > dd:
            return POLE
        if dn < dd:
            return Residue(P, 0)
        return Residue(P, F.div(f.num.c[-1], f.den.c[-1]))
    pi = P.poly.c
    d = _divmod(F, f.den.c, pi)[1]
    if not d:
        k = ord_at(f, P)
        return POLE if k < 0 else Residue(P, 0)
    n = _divmod(F, f.num.c, pi)[1]
    if not n:
        return Residue(P, 0)
    return Residue(P, n) * Residue(P, d).inverse()


class Divisor:
    """Finite formal sum of places with nonzero integer coefficients."""

    __slots__ = ("_items",)

    def __init__(self, coeffs=None):
        items = {}
        for P, n in dict(coeffs or {}).items():
            if n:
                items[P] = items.get(P, 0) + n
        self._items = {P: n for P, n in sorted(items.items(), key=lambda kv: kv[0].sort_key()) if n}

    def items(self):
        return self._items.items()

    def __getitem__(self, P):
        return self._items.get(P, 0)

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    @property
    def support(self):
        return frozenset(self._items)

    @property
    def degree(self) -> int:
        return sum(n * P.degree for P, n in self._items.items())

    def is_zero(self):
        return not self._items

    def is_effective(self):
        return all(n > 0 for n in self._items.values())

    def zeros(self) -> "Divisor":
        return Divisor({P: n for P, n in self._items.items() if n > 0})

    def poles(self) -> "Divisor":
        """The pole part as an effective divisor."""
        return Divisor({P: -n for P, n in self._items.items() if n < 0})

    def __add__(self, other):
        out = dict(self._items)
        for P, n in other.items():
            out[P] = out.get(P, 0) + n
        return Divisor(out)

    def __neg__(self):
        return Divisor({P: -n for P, n in self._items.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        return Divisor({P: k * n for P, n in self._items.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self._items == other._items

    def __hash__(self):
        return hash(frozenset(self._items.items()))

    def __repr__(self):
        if not self._items:
            return "0"
        parts = []
        for P, n in self._items.items():
            parts.append(f"{'-' if n < 0 else '+'} {abs(n)}*{P}" if abs(n) != 1
                         else f"{'-' if n < 0 else '+'} {P}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]


def principal_divisor(f: RationalFunction) -> Divisor:
    if f.is_zero():
        raise ZeroFunction("divisor of the zero function")
    F = f.field
    out = {}
    if not f.num.is_constant():
        for pi, m in factor(f.num):
            out[Place(F, pi)] = m
    if not f.den.is_constant():
        for pi, m in factor(f.den):
            out[Place(F, pi)] = -m
    k = ord_at(f, Place.infinite(F))
    if k:
        out[Place.infinite(F)] = k
    return Divisor(out)


def zeros_of(f: RationalFunction) -> list:
    """Places where f vanishes, by (degree, code), infinity after finite places of degree 1."""
    return sorted(principal_divisor(f).zeros().support, key=Place.sort_key)


def single_pole_function(x0: Place, n: int) -> RationalFunction:
    """Nonconstant f with pole divisor exactly n * x0.

    At infinity this is t^n; at a finite pi of degree k it is z^(nk-1) / pi^n
    with z = t (or t + 1 when pi = t), so f also vanishes simply at infinity.
    """
    if n < 1:
        raise ValueError("pole order must be >= 1")
    F = x0.field
    t = Polynomial.x(F)
    if x0.poly is None:
        return RationalFunction(t**n)
    z = t if x0.poly != t else t + 1
    k = x0.degree
    return RationalFunction(z ** (n * k - 1), x0.poly**n)


# --- exceptional sets, unit groups -----------------------------------------------------

class ExceptionalSet:
    """Finite set of places over one field."""

    __slots__ = ("places", "field")

    def __init__(self, places=(), field: FiniteField | None = None):
        places = frozenset(places)
        fields = {P.field for P in places}
        if len(fields) > 1:
            raise SpecMismatch("places over different fields")
        self.places = places
        self.field = field or (next(iter(fields)) if fields else None)

    def __iter__(self):
        return iter(sorted(self.places, key=Place.sort_key))

    def __len__(self):
        return len(self.places)

    def __contains__(self, P):
        return P in self.places

    def __eq__(self, other):
        if not isinstance(other, ExceptionalSet):
            return NotImplemented
        return self.places == other.places

    def __hash__(self):
        return hash(self.places)

    def __repr__(self):
        return "{" + ", ".join(repr(P) for P in self) + "}"

    def has_infinity(self):
        return any(P.is_infinite for P in self.places)

    def modulus(self, field=None) -> Polynomial:
        """Product of the finite places' polynomials."""
        F = field or self.field
        out = Polynomial._raw(F, (1,))
        for P in self:
            if P.poly is not None:
                out = out * P.poly
        return out


def in_unit_group(f: RationalFunction, E: ExceptionalSet) -> bool:
    if f.is_zero():
        return False
    return all(ord_at(f, P) == 0 for P in E)


def in_semilocal_ring(f: RationalFunction, E: ExceptionalSet) -> bool:
    return f.is_zero() or all(ord_at(f, P) >= 0 for P in E)


def interpolate(E: ExceptionalSet, targets: dict) -> RationalFunction:
    """Least-degree polynomial taking the given residues at the places of E."""
    if E.has_infinity():
        raise InfinitePlaceInE("interpolation needs all places finite; apply mobius_change")
    F = E.field
    if F is None:
        if targets:
            F = next(iter(targets)).field
        else:
            raise ValueError("empty exceptional set without a field")
    M = E.modulus(F)
    acc = Polynomial._raw(F, ())
    for P in E:
        r = targets[P]
        if not isinstance(r, Residue):
            r = Residue(P, r)
        cof = M // P.poly
        inv = Residue(P, cof).inverse()
        acc = acc + cof * (r * inv).poly
    if M.degree >= 1:
        acc = acc % M
    return RationalFunction(acc)


def default_alpha(field: FiniteField) -> FieldElement:
    if field.q <= 2:
        raise BadAlpha("F_2 has no element outside {0, 1}")
    return FieldElement(field, 2)


def unit_sum_decompose(f: RationalFunction, E: ExceptionalSet, alpha=None):
    """Write f in O_E as g + h with g, h units at every place of E.

    g is the least-degree interpolant of eps(x) = f(x) - 1 (or 1 - alpha where
    f(x) = 1).  With E empty any nonzero constant g != f works; -1 is used,
    falling back to 1 (odd characteristic) or alpha (characteristic 2).
    """
    F = f.field
    if E.has_infinity():
        raise InfinitePlaceInE("unit_sum_decompose needs infinity outside E")
    alpha = default_alpha(F) if alpha is None else F(alpha)
    if alpha.code in (0, 1):
        raise BadAlpha(f"alpha = {alpha} must avoid 0 and 1")
    for P in E:
        if not f.is_zero() and ord_at(f, P) < 0:
            raise ValueError(f"{f} has a pole at {P} in E")
    if not len(E):
        minus_one = RationalFunction.const(F, -1)
        if f != minus_one:
            g = minus_one
        elif F.p != 2:
            g = RationalFunction.const(F, 1)
        else:
            g = RationalFunction.const(F, alpha)
        return g, f - g
    eps = {}
    for P in E:
        v = evaluate(f, P)
        eps[P] = v - 1 if v != 1 else Residue(P, 1 - alpha)
    g = interpolate(E, eps)
    return g, f - g


# --- fractional linear substitutions ---------------------------------------------------------

@dataclass(frozen=True)
class Mobius:
    """Substitution t -> (a t + b) / (c t + d); stored as codes."""

    field: FiniteField
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        F = self.field
        if F.sub(F.mul(self.a, self.d), F.mul(self.b, self.c)) == 0:
            raise ValueError("degenerate fractional linear map")

    @classmethod
    def identity(cls, field):
        return cls(field, 1, 0, 0, 1)

    @classmethod
    def of(cls, field, a, b, c, d):
        co = field.coerce
        return cls(field, co(a), co(b), co(c), co(d))

    def is_identity(self):
        return self.b == 0 and self.c == 0 and self.a == self.d

    def as_function(self) -> RationalFunction:
        F = self.field
        return RationalFunction(Polynomial._raw(F, _trim([self.b, self.a])),
                                Polynomial._raw(F, _trim([self.d, self.c])))

    def inverse(self) -> "Mobius":
        F = self.field
        return Mobius(F, self.d, F.neg(self.b), F.neg(self.c), self.a)

    def lift(self, field, emb=None) -> "Mobius":
        if field is self.field:
            return self
        e = (emb or embedding(self.field, field)).code
        return Mobius(field, e(self.a), e(self.b), e(self.c), e(self.d))

    def map_coeffs(self, func, field=None):
        return Mobius(field or self.field, func(self.a), func(self.b), func(self.c), func(self.d))

    def apply(self, f: RationalFunction) -> RationalFunction:
        """f composed with this substitution."""
        return f.compose(self.as_function())

    def pullback_place(self, x: Place) -> Place:
        """The place x' with ord(f, x) = ord(f o s, x') for all f."""
        u = self.apply(x.uniformizer())
        zs = principal_divisor(u).zeros()
        (P,) = zs.support
        return P

    def push_place(self, x: Place) -> Place:
        return self.inverse().pullback_place(x)

    def pullback_divisor(self, D: Divisor) -> Divisor:
        return Divisor({self.pullback_place(P): n for P, n in D.items()})

    def pullback_residue(self, x: Place, v: Residue) -> Residue:
        """Residue isomorphism k(x) -> k(x') induced by f -> f o s."""
        xp = self.pullback_place(x)
        h = RationalFunction(v.poly)
        return evaluate(self.apply(h), xp)


def mobius_change(E: ExceptionalSet):
    """(s, s_inv) such that pulling E back along s avoids the infinite place."""
    F = E.field
    if F is None or not E.has_infinity():
        F = F or gf(2)
        return Mobius.identity(F), Mobius.identity(F)
    for P in places_of_degree(F, 1):
        if P.is_infinite or P in E:
            continue
        b0 = F.coerce(P.rational_point())
        s = Mobius(F, b0, 1, 1, 0)
        return s, s.inverse()
    raise NoFreeRationalPlace("every rational place lies in E; extend the constant field")


# --- constant field tower ----------------------------------------------------------------------

class ConstantTower:
    """F_q = K_0 < K_1 < ... with [K_{i+1} : K_i] = ell, built lazily."""

    def __init__(self, base: FiniteField, ell: int = 2):
        if ell == base.p:
            raise ValueError("tower prime must differ from the characteristic")
        self.base = base
        self.ell = ell
        self._levels = [base]
        self._steps: list = []
        self._lock = threading.Lock()

    def level(self, i: int) -> FiniteField:
        if i < 0:
            raise ValueError("negative tower level")
        while len(self._levels) <= i:
            with self._lock:
                n = len(self._levels)
                if n > i:
                    break
                prev = self._levels[-1]
                nxt = gf(self.base.p, prev.d * self.ell)
                step = embedding(prev, nxt)
                self._steps.append(step)
                self._levels.append(nxt)
        return self._levels[i]

    def index(self, field: FiniteField) -> int:
        for i, F in enumerate(self._levels):
            if F is field:
                return i
        k = 0
        while True:
            F = self.level(k)
            if F is field:
                return k
            if F.d > field.d:
                raise SpecMismatch(f"{field} is not a level of this tower")
            k += 1

    def embed(self, i: int, j: int) -> Embedding:
        """Embedding of level i into level j (composite of consecutive steps)."""
        if j < i:
            raise ValueError("can only lift upwards")
        self.level(j)
        emb = Embedding(self._levels[i], self._levels[i], self._levels[i].gen.code)
        for k in range(i, j):
            emb = self._steps[k].compose(emb)
        return emb

    def _emb_to(self, field_from, j):
        return self.embed(self.index(field_from), j)

    def lift_element(self, x: FieldElement, j: int) -> FieldElement:
        return self._emb_to(x.field, j)(x)

    def lift_poly(self, f: Polynomial, j: int) -> Polynomial:
        e = self._emb_to(f.field, j)
        return f.map_coeffs(e.code, self.level(j))

    def lift_function(self, f: RationalFunction, j: int) -> RationalFunction:
        if f.field is self.level(j):
            return f
        return f.lift(self.level(j), self._emb_to(f.field, j))

    def lift_place(self, P: Place, j: int) -> list:
        """Places of level j lying over P, sorted."""
        F = self.level(j)
        if P.field is F:
            return [P]
        if P.poly is None:
            return [Place.infinite(F)]
        return sorted((Place(F, pi) for pi, _ in factor(self.lift_poly(P.poly, j))),
                      key=Place.sort_key)

    def lift_divisor(self, D: Divisor, j: int) -> Divisor:
        out = {}
        for P, n in D.items():
            for Q in self.lift_place(P, j):
                out[Q] = out.get(Q, 0) + n
        return Divisor(out)

    def lift_exceptional(self, E: ExceptionalSet, j: int) -> ExceptionalSet:
        F = self.level(j)
        return ExceptionalSet([Q for P in E for Q in self.lift_place(P, j)], field=F)

    def lift_residue(self, v: Residue, Q: Place) -> Residue:
        """Image of v under k(P) -> k(Q) for a place Q over v.place."""
        j = self.index(Q.field)
        return Residue(Q, self.lift_poly(v.poly, j))

    def check_transitivity(self, upto: int) -> bool:
        for i in range(upto + 1):
            for j in range(i, upto + 1):
                for k in range(j, upto + 1):
                    direct = self.embed(i, k)
                    via = self.embed(j, k).compose(self.embed(i, j))
                    if direct.image != via.image:
                        return False
        return True


def tower_extend(T: ConstantTower, i: int):
    """Level-i field together with embeddings from every lower level."""
    F = T.level(i)
    return F, {j: T.embed(j, i) for j in range(i + 1)}


def function_with_divisor(D: Divisor, field: FiniteField) -> RationalFunction:
    """The monic-normalized f with div(f) = D, for D of degree 0."""
    if D.degree != 0:
        raise ValueError(f"divisor {D} has degree {D.degree}, not 0")
    f = RationalFunction.const(field, 1)
    for P, n in D.items():
        if P.poly is not None:
            f = f * RationalFunction.from_poly(P.poly) ** n
    return f


def random_unit(field: FiniteField, E: ExceptionalSet, rng, max_degree: int = 3) -> RationalFunction:
    """A random element of O_E^x with numerator and denominator of degree <= max_degree."""
    q = field.q
    inf_in_E = E.has_infinity()
    while True:
        k = rng.randint(0, max_degree)
        kd = k if inf_in_E else rng.randint(0, max_degree)
        lead = rng.randrange(1, q)
        num = Polynomial._raw(field, _trim([rng.randrange(q) for _ in range(k)] + [lead]))
        den = Polynomial._raw(field, _trim([rng.randrange(q) for _ in range(kd)] + [1]))
        f = RationalFunction(num, den)
        if in_unit_group(f, E):
            return f
