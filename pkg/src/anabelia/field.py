"""Finite fields F_{p^d} in a polynomial basis.

An element is identified by its *code*: the integer sum(c_i * p**i) built
from its coordinates c_0..c_{d-1} with respect to 1, w, ..., w^{d-1}, where w
is a root of the field modulus.  Codes below p are the prime subfield, so the
code of an integer n in [0, p) is n itself in every F_{p^d}.

The modulus of F_{p^d} is the least monic irreducible of degree d over F_p,
ordering candidates by the code of their non-leading coefficients.  Fields
are cached per (p, d), so ``gf(p, d) is gf(p, d)`` and identity comparison
is field equality.

Small fields (q <= TABLE_LIMIT) use exp/log/Zech tables; characteristic 2
uses XOR for addition at every size.
"""

from __future__ import annotations

import functools
import threading

from .arith import is_prime, prime_factors
from .errors import SpecMismatch, ZeroInverse

TABLE_LIMIT = 1 << 16

_lock = threading.Lock()
_fields: dict = {}


def gf(p: int, d: int = 1) -> "FiniteField":
    """The field with p**d elements."""
    key = (p, d)
    F = _fields.get(key)
    if F is not None:
        return F
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if d < 1:
        raise ValueError("extension degree must be >= 1")
    modulus = None if d == 1 else _least_irreducible(p, d)
    F = FiniteField(p, d, modulus)
    with _lock:
        return _fields.setdefault(key, F)


def _least_irreducible(p: int, d: int) -> tuple:
    from .poly import Polynomial

    Fp = gf(p, 1)
    for code in range(p**d):
        digits = _to_digits(code, p, d)
        f = Polynomial(Fp, list(digits) + [1])
        if f.is_irreducible():
            return tuple(digits) + (1,)
    raise AssertionError("no irreducible polynomial found")


def _to_digits(code: int, p: int, d: int) -> list:
    out = []
    for _ in range(d):
        code, r = divmod(code, p)
        out.append(r)
    return out


def _from_digits(digits, p: int) -> int:
    code = 0
    for c in reversed(digits):
        code = code * p + c
    return code


class FiniteField:
    """F_{p^d}.  Arithmetic methods act on integer codes."""

    def __init__(self, p: int, d: int, modulus):
        self.p = p
        self.d = d
        self.q = p**d
        self.modulus = modulus
        self.order = self.q - 1
        if d == 1:
            self.add = self._add_prime
            self.sub = self._sub_prime
            self.neg = self._neg_prime
            self.mul = self._mul_prime
            self.inv = self._inv_prime
        else:
            if self.q <= TABLE_LIMIT:
                self._build_tables()
                self.mul = self._mul_tab
                self.inv = self._inv_tab
            else:
                self.mul = self._mul_digits
                self.inv = self._inv_generic
            if p == 2:
                self.add = self.sub = self._xor
                self.neg = self._ident
            elif self.q <= TABLE_LIMIT:
                self.add = self._add_tab
                self.sub = self._sub_tab
                self.neg = self._neg_tab
            else:
                self.add = self._add_digits
                self.sub = self._sub_digits
                self.neg = self._neg_digits

    # -- identity ---------------------------------------------------------
    def __repr__(self):
        return f"GF({self.p}^{self.d})" if self.d > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (gf, (self.p, self.d))

    @property
    def characteristic(self):
        return self.p

    # -- element construction ---------------------------------------------
    def __call__(self, x) -> "FieldElement":
        return FieldElement(self, self.coerce(x))

    def coerce(self, x) -> int:
        """Code of x.  Ints in [0, q) are codes; other ints are reduced mod p."""
        if isinstance(x, FieldElement):
            if x.field is not self:
                raise SpecMismatch(f"element of {x.field} used in {self}")
            return x.code
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            if 0 <= x < self.q and (self.d > 1 or x < self.p):
                return x
            return x % self.p
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, code)

    def elements(self):
        """All elements in code order."""
        return [FieldElement(self, c) for c in range(self.q)]

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    @property
    def gen(self) -> "FieldElement":
        """Root w of the modulus (1 for prime fields)."""
        return FieldElement(self, self.p if self.d > 1 else 1)

    def digits(self, code: int) -> list:
        return _to_digits(code, self.p, self.d)

    def from_digits(self, digits) -> int:
        return _from_digits([c % self.p for c in digits], self.p)

    # -- prime field ------------------------------------------------------
    def _add_prime(self, a, b):
        s = a + b
        return s - self.p if s >= self.p else s

    def _sub_prime(self, a, b):
        s = a - b
        return s + self.p if s < 0 else s

    def _neg_prime(self, a):
        return self.p - a if a else 0

    def _mul_prime(self, a, b):
        return a * b % self.p

    def _inv_prime(self, a):
        if a == 0:
            raise ZeroInverse("inverse of zero")
        return pow(a, self.p - 2, self.p)

    # -- characteristic 2 --------------------------------------------------
    @staticmethod
    def _xor(a, b):
        return a ^ b

    @staticmethod
    def _ident(a):
        return a

    # -- generic digit arithmetic -----------------------------------------
    def _add_digits(self, a, b):
        p = self.p
        out, mult = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            s = x + y
            if s >= p:
                s -= p
            out += s * mult
            mult *= p
        return out

    def _neg_digits(self, a):
        p = self.p
        out, mult = 0, 1
        while a:
            a, x = divmod(a, p)
            if x:
                out += (p - x) * mult
            mult *= p
        return out

    def _sub_digits(self, a, b):
        return self._add_digits(a, self._neg_digits(b))

    def _mul_digits(self, a, b):
        if a == 0 or b == 0:
            return 0
        p, d, mod = self.p, self.d, self.modulus
        A = _to_digits(a, p, d)
        B = _to_digits(b, p, d)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(A):
            if x:
                for j, y in enumerate(B):
                    prod[i + j] += x * y
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i] % p
            if c:
                base = i - d
                for j in range(d):
                    prod[base + j] -= c * mod[j]
        return _from_digits([c % p for c in prod[:d]], p)

    def _pow_generic(self, a, n):
        result, base = 1, a
        while n:
            if n & 1:
                result = self._mul_digits(result, base)
            base = self._mul_digits(base, base)
            n >>= 1
        return result

    def _inv_generic(self, a):
        if a == 0:
            raise ZeroInverse("inverse of zero")
        return self._pow_generic(a, self.q - 2)

    # -- tables -----------------------------------------------------------
    def _build_tables(self):
        n = self.q - 1
        factors = prime_factors(n)
        g = None
        for cand in range(2, self.q):
            if all(self._pow_generic(cand, n // r) != 1 for r in factors):
                g = cand
                break
        exp = [0] * (2 * n)
        log = [-1] * self.q
        x = 1
        for k in range(n):
            exp[k] = x
            log[x] = k
            x = self._mul_digits(x, g)
        exp[n:] = exp[:n]
        p = self.p
        zech = [-1] * n
        for k in range(n):
            c = exp[k]
            one_plus = c + 1 if c % p != p - 1 else c - (p - 1)
            zech[k] = log[one_plus] if one_plus else -1
        self.primitive = g
        self._exp, self._log, self._zech = exp, log, zech

    def _mul_tab(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def _inv_tab(self, a):
        if a == 0:
            raise ZeroInverse("inverse of zero")
        la = self._log[a]
        return self._exp[self.order - la] if la else 1

    def _add_tab(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self.order]
        if z < 0:
            return 0
        return self._exp[la + z]

    def _neg_tab(self, a):
        if a == 0:
            return 0
        return self._exp[self._log[a] + self.order // 2]

    def _sub_tab(self, a, b):
        return self._add_tab(a, self._neg_tab(b))

    # -- derived operations on codes ---------------------------------------
    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroInverse("inverse of zero")
            return 1 if n == 0 else 0
        if self.d == 1:
            return pow(a, n % self.order, self.p)
        if self.q <= TABLE_LIMIT:
            return self._exp[(self._log[a] * n) % self.order]
        return self._pow_generic(a, n % self.order)

    def frob(self, a, i: int = 1) -> int:
        """a ** (p ** i)."""
        i %= self.d
        if i == 0 or a < self.p:
            return a
        return self.pow(a, self.p**i)

    def log(self, a) -> int:
        if self.q > TABLE_LIMIT:
            raise NotImplementedError("discrete log only for tabled fields")
        if self.d == 1:
            return self._prime_log()[a]
        return self._log[a]

    @functools.cache
    def _prime_log(self):
        n = self.order
        factors = prime_factors(n) if n > 1 else []
        g = next(c for c in range(1, self.p)
                 if all(pow(c, n // r, self.p) != 1 for r in factors))
        log = [-1] * self.p
        x = 1
        for k in range(n):
            log[x] = k
            x = x * g % self.p
        return log

    def primitive_element(self) -> "FieldElement":
        if self.d > 1 and self.q <= TABLE_LIMIT:
            return FieldElement(self, self.primitive)
        n = self.order
        factors = prime_factors(n) if n > 1 else []
        for c in range(1, self.q):
            if all(self.pow(c, n // r) != 1 for r in factors):
                return FieldElement(self, c)
        raise AssertionError

    def is_square(self, a) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, self.order // 2) == 1

    def sqrt(self, a):
        """A square root of the code a (the smaller code of the two), or None."""
        if a == 0:
            return 0
        if self.p == 2:
            return self.frob(a, self.d - 1)
        if not self.is_square(a):
            return None
        r = _tonelli(a, self.order, self.mul, self.pow, self._nonresidue())
        s = self.neg(r)
        return min(r, s)

    @functools.cache
    def _nonresidue(self):
        return next(c for c in range(2, self.q) if not self.is_square(c))

    def trace(self, a) -> int:
        """Absolute trace to F_p, as an int in [0, p)."""
        s, x = 0, a
        for _ in range(self.d):
            s = self.add(s, x)
            x = self.frob(x, 1)
        return s


def _tonelli(a, order, mul, pw, z):
    """Square root of a residue a in a cyclic group of even order."""
    s, Q = 0, order
    while Q % 2 == 0:
        Q //= 2
        s += 1
    M, c, t, R = s, pw(z, Q), pw(a, Q), pw(a, (Q + 1) // 2)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = mul(tt, tt)
            i += 1
        b = c
        for _ in range(M - i - 1):
            b = mul(b, b)
        M, c = i, mul(b, b)
        t, R = mul(t, c), mul(R, b)
    return R


class FieldElement:
    """Immutable element of a FiniteField."""

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "code", code)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def __reduce__(self):
        return (FieldElement, (self.field, self.code))

    @property
    def coords(self) -> tuple:
        return tuple(self.field.digits(self.code))

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise SpecMismatch(f"{self.field} vs {other.field}")
            return other.code
        if isinstance(other, int):
            return self.field.coerce(other)
        return None

    def __add__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(b, self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(b, self.code))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.code, n))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.code))

    def frobenius(self, i: int = 1):
        return FieldElement(self.field, self.field.frob(self.code, i))

    def is_zero(self):
        return self.code == 0

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int) and not isinstance(other, bool):
            return self.code == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.code))

    def __lt__(self, other):
        return self.code < other.code

    def __int__(self):
        return self.code

    def __repr__(self):
        if self.field.d == 1:
            return str(self.code)
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                mono = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
                coef = "" if c == 1 and i else str(c)
                terms.append(coef + mono if mono else str(c))
        return " + ".join(reversed(terms)) or "0"


# --- cross-level embeddings ----------------------------------------------

class Embedding:
    """Field embedding F_{p^a} -> F_{p^b} sending the generator to ``image``."""

    def __init__(self, src: FiniteField, dst: FiniteField, image: int):
        if src.p != dst.p or dst.d % src.d:
            raise SpecMismatch(f"no embedding {src} -> {dst}")
        self.src, self.dst, self.image = src, dst, image
        self._table = None
        self._powers = None
        if src.d > 1 and src.q <= TABLE_LIMIT:
            self._table = [self._compute(c) for c in range(src.q)]

    def _compute(self, code):
        if code < self.src.p:
            return code
        acc = 0
        add, mul = self.dst.add, self.dst.mul
        for c, pw in zip(self.src.digits(code), self._powers_ready()):
            if c:
                acc = add(acc, mul(c, pw))
        return acc

    def _powers_ready(self):
        if self._powers is None:
            pw, x = [], 1
            for _ in range(self.src.d):
                pw.append(x)
                x = self.dst.mul(x, self.image)
            self._powers = pw
        return self._powers

    def code(self, code: int) -> int:
        if self._table is not None:
            return self._table[code]
        return self._compute(code)

    def __call__(self, x):
        if isinstance(x, FieldElement):
            return FieldElement(self.dst, self.code(self.src.coerce(x)))
        return self.code(x)

    def compose(self, other: "Embedding") -> "Embedding":
        """self after other."""
        return Embedding(other.src, self.dst, self.code(other.image))


@functools.lru_cache(maxsize=None)
def embedding(src: FiniteField, dst: FiniteField) -> Embedding:
    """Generator of src goes to the least root (by code) of src's modulus in dst."""
    if src is dst:
        return Embedding(src, dst, src.gen.code)
    if src.p != dst.p or dst.d % src.d:
        raise SpecMismatch(f"no embedding {src} -> {dst}")
    if src.d == 1:
        return Embedding(src, dst, 1)
    from .poly import Polynomial

    Fp = gf(src.p)
    roots = Polynomial(Fp, src.modulus).roots(dst)
    return Embedding(src, dst, roots[0].code)
