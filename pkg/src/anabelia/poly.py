"""Univariate polynomials over finite fields.

Coefficients are stored low degree first as a tuple of field codes, with no
trailing zeros; the zero polynomial is the empty tuple and has degree -inf.
"""

from __future__ import annotations

import functools
import math
import random

from .arith import prime_factors
from .errors import DegreeZero, SpecMismatch
from .field import FieldElement, FiniteField, embedding

NEG_INF = -math.inf

SIEVE_LIMIT = 200_000


# --- code-list kernels ----------------------------------------------------

def _trim(c):
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


def _add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    if F.d == 1:
        p = F.p
        out = list(a)
        for i, y in enumerate(b):
            out[i] = (out[i] + y) % p
        return _trim(out)
    add = F.add
    out = list(a)
    for i, y in enumerate(b):
        out[i] = add(out[i], y)
    return _trim(out)


def _neg(F, a):
    neg = F.neg
    return tuple(neg(x) for x in a)


def _sub(F, a, b):
    return _add(F, a, _neg(F, b))


def _scale(F, a, s):
    if s == 0:
        return ()
    if s == 1:
        return a
    if F.d == 1:
        p = F.p
        return tuple(x * s % p for x in a)
    mul = F.mul
    return tuple(mul(x, s) for x in a)


def _mul(F, a, b):
    if not a or not b:
        return ()
    if F.d == 1:
        p = F.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return _trim([v % p for v in out])
    add, mul = F.add, F.mul
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return _trim(out)


def _divmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    r = list(a)
    db = len(b) - 1
    inv_lc = F.inv(b[-1])
    quot = [0] * (len(a) - db)
    if F.d == 1:
        p = F.p
        for k in range(len(a) - 1, db - 1, -1):
            c = r[k] % p
            if c:
                c = c * inv_lc % p
                quot[k - db] = c
                base = k - db
                for j in range(db + 1):
                    r[base + j] -= c * b[j]
        return _trim(quot), _trim([v % p for v in r[:db]])
    sub, mul = F.sub, F.mul
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k]
        if c:
            c = mul(c, inv_lc)
            quot[k - db] = c
            base = k - db
            for j in range(db + 1):
                if b[j]:
                    r[base + j] = sub(r[base + j], mul(c, b[j]))
    return _trim(quot), _trim(r[:db])


def _mod(F, a, b):
    return _divmod(F, a, b)[1]


def _monic(F, a):
    if not a or a[-1] == 1:
        return a
    return _scale(F, a, F.inv(a[-1]))


def _gcd(F, a, b):
    while b:
        a, b = b, _mod(F, a, b)
    return _monic(F, a)


def _xgcd(F, a, b):
    """(g, s, t) with g = s*a + t*b monic."""
    r0, r1 = a, b
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = _divmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(F, s0, _mul(F, q, s1))
        t0, t1 = t1, _sub(F, t0, _mul(F, q, t1))
    if not r0:
        return (), (), ()
    inv = F.inv(r0[-1])
    return _scale(F, r0, inv), _scale(F, s0, inv), _scale(F, t0, inv)


def _powmod(F, a, n, m):
    result = (1,) if len(m) > 1 else ()
    base = _mod(F, a, m)
    while n:
        if n & 1:
            result = _mod(F, _mul(F, result, base), m)
        n >>= 1
        if n:
            base = _mod(F, _mul(F, base, base), m)
    return result


def _deriv(F, a):
    p = F.p
    out = []
    for i in range(1, len(a)):
        k = i % p
        out.append(_scale(F, (a[i],), k)[0] if k and a[i] else 0)
    return _trim(out)


class Polynomial:
    """Polynomial over a FiniteField; immutable."""

    __slots__ = ("field", "c")

    def __init__(self, field: FiniteField, coeffs=()):
        co = field.coerce
        self.field = field
        self.c = _trim([co(x) for x in coeffs])

    @classmethod
    def _raw(cls, field, c):
        obj = cls.__new__(cls)
        obj.field = field
        obj.c = c
        return obj

    @classmethod
    def x(cls, field):
        return cls._raw(field, (0, 1))

    @classmethod
    def const(cls, field, value):
        return cls(field, [value])

    @classmethod
    def monomial(cls, field, n, coeff=1):
        return cls(field, [0] * n + [coeff])

    @classmethod
    def from_code(cls, field, code, degree):
        """Monic polynomial of given degree whose lower coefficients spell ``code`` in base q."""
        digits = []
        for _ in range(degree):
            code, r = divmod(code, field.q)
            digits.append(r)
        return cls._raw(field, tuple(digits) + (1,))

    # -- basic properties --------------------------------------------------
    @property
    def degree(self):
        return len(self.c) - 1 if self.c else NEG_INF

    def is_zero(self):
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def is_one(self):
        return self.c == (1,)

    def is_constant(self):
        return len(self.c) <= 1

    def is_monic(self):
        return bool(self.c) and self.c[-1] == 1

    @property
    def coeffs(self):
        return tuple(FieldElement(self.field, x) for x in self.c)

    def __getitem__(self, i):
        return FieldElement(self.field, self.c[i] if 0 <= i < len(self.c) else 0)

    def lc(self) -> FieldElement:
        return FieldElement(self.field, self.c[-1] if self.c else 0)

    @property
    def code(self) -> int:
        """Position of a monic polynomial among monic polynomials of its degree."""
        q = self.field.q
        code = 0
        for x in reversed(self.c[:-1]):
            code = code * q + x
        return code

    def sort_key(self):
        return (len(self.c), self.code if self.c else 0, self.c[-1] if self.c else 0)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.field is other.field and self.c == other.c
        if isinstance(other, (int, FieldElement)):
            return self.c == _trim([self.field.coerce(other)])
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.c))

    def __reduce__(self):
        return (Polynomial, (self.field, self.c))

    def __repr__(self):
        if not self.c:
            return "0"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            x = self.c[i]
            if not x:
                continue
            cs = repr(FieldElement(self.field, x))
            if self.field.d > 1 and " " in cs:
                cs = f"({cs})"
            if i == 0:
                terms.append(cs)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if x == 1 else f"{cs}*{mono}")
        return " + ".join(terms)

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.field is not self.field:
                raise SpecMismatch(f"{self.field} vs {other.field}")
            return other.c
        if isinstance(other, (int, FieldElement)):
            return _trim([self.field.coerce(other)])
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Polynomial._raw(self.field, _add(self.field, self.c, b))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.field, _neg(self.field, self.c))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Polynomial._raw(self.field, _sub(self.field, self.c, b))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Polynomial._raw(self.field, _mul(self.field, self.c, b))

    __rmul__ = __mul__

    def __divmod__(self, other):
        b = self._coerce(other)
        q, r = _divmod(self.field, self.c, b)
        return Polynomial._raw(self.field, q), Polynomial._raw(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = (1,), self.c
        F = self.field
        while n:
            if n & 1:
                result = _mul(F, result, base)
            n >>= 1
            if n:
                base = _mul(F, base, base)
        return Polynomial._raw(F, result)

    def powmod(self, n: int, m: "Polynomial") -> "Polynomial":
        return Polynomial._raw(self.field, _powmod(self.field, self.c, n, m.c))

    def scale(self, s) -> "Polynomial":
        return Polynomial._raw(self.field, _scale(self.field, self.c, self.field.coerce(s)))

    def monic(self) -> "Polynomial":
        return Polynomial._raw(self.field, _monic(self.field, self.c))

    def derivative(self) -> "Polynomial":
        return Polynomial._raw(self.field, _deriv(self.field, self.c))

    def divides(self, other: "Polynomial") -> bool:
        if not self.c:
            return not other.c
        return not _mod(self.field, other.c, self.c)

    def __call__(self, x):
        """Horner evaluation at an element of the coefficient field."""
        F = self.field
        a = F.coerce(x)
        add, mul = F.add, F.mul
        acc = 0
        for cf in reversed(self.c):
            acc = add(mul(acc, a), cf)
        return FieldElement(F, acc)

    def eval_code(self, a: int) -> int:
        F = self.field
        add, mul = F.add, F.mul
        acc = 0
        for cf in reversed(self.c):
            acc = add(mul(acc, a), cf)
        return acc

    def compose(self, other: "Polynomial") -> "Polynomial":
        """self(other(x))."""
        F = self.field
        acc = ()
        for cf in reversed(self.c):
            acc = _add(F, _mul(F, acc, other.c), (cf,) if cf else ())
        return Polynomial._raw(F, acc)

    def map_coeffs(self, func, field: FiniteField) -> "Polynomial":
        """Apply ``func`` (code -> code in ``field``) to every coefficient."""
        return Polynomial._raw(field, _trim([func(x) for x in self.c]))

    def lift(self, field: FiniteField) -> "Polynomial":
        if field is self.field:
            return self
        return self.map_coeffs(embedding(self.field, field).code, field)

    def frobenius(self, i: int = 1) -> "Polynomial":
        """Apply x -> x^{p^i} to the coefficients."""
        F = self.field
        return self.map_coeffs(lambda a: F.frob(a, i), F)

    # -- gcd and friends ---------------------------------------------------
    def gcd(self, other):
        return poly_gcd(self, other)

    def xgcd(self, other):
        b = self._coerce(other)
        g, s, t = _xgcd(self.field, self.c, b)
        F = self.field
        return Polynomial._raw(F, g), Polynomial._raw(F, s), Polynomial._raw(F, t)

    def inverse_mod(self, m: "Polynomial") -> "Polynomial":
        g, s, _ = self.xgcd(m)
        if not g.is_one():
            raise ZeroDivisionError("not invertible modulo m")
        return s % m

    def is_squarefree(self) -> bool:
        if not self.c:
            return False
        return poly_gcd(self, self.derivative()).degree == 0

    # -- irreducibility, roots, factoring -----------------------------------
    def is_irreducible(self) -> bool:
        return is_irreducible(self)

    def roots(self, target: FiniteField | None = None) -> list:
        return poly_roots(self, target or self.field)

    def factor(self) -> list:
        return factor(self)


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd; gcd(f, 0) = monic(f) and gcd(0, 0) = 0."""
    if f.field is not g.field:
        raise SpecMismatch(f"{f.field} vs {g.field}")
    return Polynomial._raw(f.field, _gcd(f.field, f.c, g.c))


def _qpow_chain(f: Polynomial, n: int):
    """[x^{q^i} mod f for i = 0..n]."""
    F = f.field
    h = _mod(F, (0, 1), f.c)
    chain = [h]
    for _ in range(n):
        h = _powmod(F, h, F.q, f.c)
        chain.append(h)
    return chain


def is_irreducible(f: Polynomial) -> bool:
    """Rabin's test."""
    n = len(f.c) - 1
    if n < 1:
        raise DegreeZero("irreducibility of a constant")
    if n == 1:
        return True
    F = f.field
    m = _monic(F, f.c)
    if m[0] == 0:
        return False
    g = Polynomial._raw(F, m)
    chain = _qpow_chain(g, n)
    x = _mod(F, (0, 1), m)
    if chain[n] != x:
        return False
    for r in prime_factors(n):
        h = _sub(F, chain[n // r], (0, 1))
        if len(_gcd(F, m, h)) != 1:
            return False
    return True


def _edf(F, g, d, rng):
    """Split a monic product of distinct degree-d irreducibles into its factors."""
    n = len(g) - 1
    if n == d:
        return [g]
    q = F.q
    while True:
        r = _trim([rng.randrange(q) for _ in range(n)])
        if len(r) < 2:
            continue
        if F.p == 2:
            k = F.d * d
            t, s = r, r
            for _ in range(k - 1):
                s = _mod(F, _mul(F, s, s), g)
                t = _add(F, t, s)
            h = t
        else:
            h = _sub(F, _powmod(F, r, (q**d - 1) // 2, g), (1,))
        c = _gcd(F, g, h)
        if 1 < len(c) < len(g):
            other = _divmod(F, g, c)[0]
            return _edf(F, c, d, rng) + _edf(F, _monic(F, other), d, rng)


def poly_roots(f: Polynomial, target: FiniteField) -> list:
    """All roots of f in ``target``, each once, sorted by code."""
    if target.p != f.field.p or target.d % f.field.d:
        raise SpecMismatch(f"{f.field} does not embed in {target}")
    if not f.c:
        raise ValueError("roots of the zero polynomial")
    g = f.lift(target)
    F = target
    m = _monic(F, g.c)
    if len(m) == 1:
        return []
    xq = _powmod(F, (0, 1), F.q, m)
    h = _gcd(F, m, _sub(F, xq, (0, 1)))
    if len(h) == 1:
        return []
    rng = random.Random(len(h) * 7919 + F.q)
    roots = sorted(F.neg(lin[0]) for lin in _edf(F, h, 1, rng))
    return [FieldElement(F, r) for r in roots]


def _pth_root(F, a):
    p = F.p
    return _trim([F.frob(a[i], F.d - 1) for i in range(0, len(a), p)])


def _squarefree(F, f):
    """Squarefree decomposition [(g, multiplicity)] of a monic f."""
    out = []
    d = _deriv(F, f)
    c = _gcd(F, f, d)
    w = _divmod(F, f, c)[0]
    i = 1
    while len(w) > 1:
        y = _gcd(F, w, c)
        z = _divmod(F, w, y)[0]
        if len(z) > 1:
            out.append((_monic(F, z), i))
        i += 1
        w = y
        c = _divmod(F, c, y)[0]
    if len(c) > 1:
        root = _pth_root(F, _monic(F, c))
        out.extend((g, m * F.p) for g, m in _squarefree(F, _monic(F, root)))
    return out


def _ddf(F, f):
    out = []
    i = 1
    h = (0, 1)
    while len(f) - 1 >= 2 * i:
        h = _powmod(F, h, F.q, f)
        g = _gcd(F, f, _sub(F, h, (0, 1)))
        if len(g) > 1:
            out.append((g, i))
            f = _divmod(F, f, g)[0]
            h = _mod(F, h, f)
        i += 1
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def factor(f: Polynomial) -> list:
    """Monic irreducible factorization [(factor, multiplicity)], sorted."""
    F = f.field
    if not f.c:
        raise ValueError("factor of zero")
    m = _monic(F, f.c)
    rng = random.Random(len(m) * 104729 + F.q)
    acc: dict = {}
    for g, mult in _squarefree(F, m):
        for h, d in _ddf(F, g):
            for irr in _edf(F, h, d, rng):
                acc[irr] = acc.get(irr, 0) + mult
    items = [(Polynomial._raw(F, k), v) for k, v in acc.items()]
    items.sort(key=lambda kv: kv[0].sort_key())
    return items


@functools.lru_cache(maxsize=256)
def _irreducibles_cached(field: FiniteField, d: int) -> tuple:
    q = field.q
    if d == 1:
        return tuple(Polynomial.from_code(field, c, 1) for c in range(q))
    if q**d <= SIEVE_LIMIT:
        reducible = set()
        for k in range(1, d // 2 + 1):
            for g in _irreducibles_cached(field, k):
                for code in range(q ** (d - k)):
                    h = Polynomial.from_code(field, code, d - k)
                    reducible.add(Polynomial._raw(field, _mul(field, g.c, h.c)).code)
        return tuple(Polynomial.from_code(field, code, d)
                     for code in range(q**d) if code not in reducible)
    out = []
    for code in range(q**d):
        cand = Polynomial.from_code(field, code, d)
        if is_irreducible(cand):
            out.append(cand)
    return tuple(out)


def irreducibles(field: FiniteField, d: int) -> list:
    """All monic irreducibles of degree d, ordered by code."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    return list(_irreducibles_cached(field, d))
