"""Imaginary hyperelliptic curves y^2 = f(x) over F_q, q odd.

Point counts by enumeration, the L-polynomial via Newton identities, and the
Jacobian via Cantor's algorithm on Mumford pairs (u, v).
"""

from __future__ import annotations

import itertools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

from .arith import factorint, valuation
from .errors import (BudgetExceeded, GenusZero, InconsistentCounts,
                     LevelMismatch, OrderMismatch, SpecMismatch, ValidationError)
from .field import FiniteField, _tonelli, embedding, gf
from .function_field import Place, Residue
from .poly import Polynomial, factor, irreducibles

DEFAULT_BUDGET = 10**6
DEFAULT_CLASS_CAP = 10**5


# --- L-polynomials ----------------------------------------------------------

def _newton_power_sums(e: list, n: int) -> list:
    """Power sums p_1..p_n from elementary symmetric e_0..e_k (e_0 = 1)."""
    k = len(e) - 1
    p = [0] * (n + 1)
    for m in range(1, n + 1):
        acc = (-1) ** (m - 1) * m * e[m] if m <= k else 0
        for i in range(1, min(m - 1, k) + 1):
            acc += (-1) ** (i - 1) * e[i] * p[m - i]
        p[m] = acc
    return p


def _newton_elementary(p: list, k: int) -> list:
    """Elementary symmetric e_0..e_k from power sums p_1..p_k; None if not integral."""
    e = [1] + [0] * k
    for m in range(1, k + 1):
        acc = 0
        for i in range(1, m + 1):
            acc += (-1) ** (i - 1) * e[m - i] * p[i]
        if acc % m:
            return None
        e[m] = acc // m
    return e


@dataclass(frozen=True)
class LPolynomial:
    """L(T) = 1 + a_1 T + ... + a_{2g} T^{2g} for a curve over F_q."""

    coeffs: tuple
    q: int

    @property
    def genus(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def __call__(self, T: int) -> int:
        return sum(a * T**i for i, a in enumerate(self.coeffs))

    def elementary(self) -> list:
        return [(-1) ** i * a for i, a in enumerate(self.coeffs)]

    def power_sums(self, n: int) -> list:
        """Sums of m-th powers of the reciprocal roots, index 0..n."""
        return _newton_power_sums(self.elementary(), n)

    def functional_equation_holds(self) -> bool:
        g, a, q = self.genus, self.coeffs, self.q
        return len(a) == 2 * g + 1 and all(a[2 * g - i] == q ** (g - i) * a[i] for i in range(g + 1))

    def weil_bound_holds(self) -> bool:
        g = self.genus
        return g == 0 or self.coeffs[1] ** 2 <= 4 * g * g * self.q

    def root_moduli_ok(self, tol: float = 1e-9) -> bool:
        """Reciprocal roots have absolute value sqrt(q), checked numerically."""
        import mpmath

        if self.genus == 0:
            return True
        with mpmath.workdps(60):
            # reversed coefficients: roots are the reciprocal roots of L
            roots = mpmath.polyroots(list(self.coeffs), maxsteps=500, extraprec=200)
            target = mpmath.sqrt(self.q)
            return all(abs(abs(r) - target) <= tol for r in roots)

    def base_change(self, m: int) -> "LPolynomial":
        g = self.genus
        s = self.power_sums(2 * g * m)
        pm = [0] + [s[k * m] for k in range(1, 2 * g + 1)]
        e = _newton_elementary(pm, 2 * g)
        return LPolynomial(tuple((-1) ** i * x for i, x in enumerate(e)), self.q**m)


def predicted_count(L: LPolynomial, m: int) -> int:
    if m < 1:
        raise ValueError("m >= 1")
    return L.q**m + 1 - L.power_sums(m)[m]


def jacobian_order(L: LPolynomial) -> int:
    return L(1)


def jacobian_order_at(L: LPolynomial, m: int) -> int:
    """|J(F_{q^m})| = prod (1 - alpha_i^m), exact."""
    return L.base_change(m)(1)


def fit_l_polynomial(q: int, counts: list, g: int) -> LPolynomial:
    """L-polynomial from N_1..N_g."""
    if len(counts) < g:
        raise ValueError(f"need {g} counts")
    s = [0] + [q**m + 1 - counts[m - 1] for m in range(1, g + 1)]
    e = _newton_elementary(s, g)
    if e is None:
        raise InconsistentCounts(f"counts {counts} give no integral L-polynomial")
    a = [(-1) ** i * x for i, x in enumerate(e)]
    a += [q ** (g - i) * a[i] for i in range(g - 1, -1, -1)]
    L = LPolynomial(tuple(a), q)
    if L(1) <= 0 or not L.weil_bound_holds():
        raise InconsistentCounts(f"fitted {L.coeffs} violates L(1) > 0 or the Weil bound")
    return L


# --- curves and points -----------------------------------------------------------

@dataclass(frozen=True, order=True)
class CurvePoint:
    """Affine point (x, y) as codes at level m, or the point at infinity (x None)."""

    m: int
    x: int | None
    y: int | None = None

    @property
    def is_infinity(self):
        return self.x is None

    def sort_key(self):
        return (self.m, -1 if self.x is None else self.x, -1 if self.y is None else self.y)

    def __repr__(self):
        return "inf" if self.x is None else f"({self.x},{self.y})"


class HyperellipticCurve:
    """y^2 = f(x), f monic squarefree of odd degree 2g+1 >= 3, p odd."""

    def __init__(self, field: FiniteField, f: Polynomial, *, _base=None, _m: int = 1):
        if field.p == 2:
            raise ValidationError("characteristic 2 is not supported")
        if f.field is not field:
            raise SpecMismatch("f over the wrong field")
        if f.degree < 1 or f.degree % 2 == 0:
            raise ValidationError(f"deg f = {f.degree} must be odd")
        if f.degree == 1:
            raise GenusZero("deg f = 1 gives genus 0")
        if not f.is_monic():
            raise ValidationError("f must be monic")
        if not f.is_squarefree():
            raise ValidationError("f must be squarefree")
        self.field = field
        self.f = f
        self.genus = (f.degree - 1) // 2
        self.m = _m
        self.base = _base or self
        self._levels = {1: self}
        self._lock = threading.Lock()

    @classmethod
    def from_coeffs(cls, p: int, d: int, coeffs):
        F = gf(p, d)
        return cls(F, Polynomial(F, [F.coerce(c) for c in coeffs]))

    def __repr__(self):
        return f"y^2 = {self.f!r} over {self.field}"

    @property
    def q(self):
        return self.field.q

    def level(self, m: int) -> "HyperellipticCurve":
        """Base change to F_{q^m} (m relative to the base curve)."""
        if self.base is not self:
            return self.base.level(m)
        with self._lock:
            C = self._levels.get(m)
            if C is None:
                K = gf(self.field.p, self.field.d * m)
                e = embedding(self.field, K)
                C = HyperellipticCurve(K, self.f.map_coeffs(e.code, K), _base=self, _m=m)
                self._levels[m] = C
        return C

    def is_on_curve(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        K = self.level(P.m).field
        fx = self.level(P.m).f.eval_code(P.x)
        return K.mul(P.y, P.y) == fx

    # -- counting ----------------------------------------------------------------
    def _count_range(self, m, lo, hi):
        C = self.level(m)
        K = C.field
        ev = C.f.eval_code
        sq = K.is_square
        n = 0
        for x in range(lo, hi):
            v = ev(x)
            n += 1 if v == 0 else (2 if sq(v) else 0)
        return n

    def count_points(self, m: int = 1, budget: int = DEFAULT_BUDGET, threads: int = 1) -> int:
        """#C(F_{q^m}) including the point at infinity."""
        if m < 1:
            raise ValueError("m >= 1")
        Q = self.base.q**m
        if Q > budget:
            raise BudgetExceeded(f"q^m = {Q} exceeds budget {budget}")
        if threads <= 1 or Q < 4096:
            return 1 + self._count_range(m, 0, Q)
        self.level(m)
        step = -(-Q // threads)
        chunks = [(lo, min(Q, lo + step)) for lo in range(0, Q, step)]
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda c: self._count_range(m, *c), chunks))
        return 1 + sum(parts)

    def points(self, m: int = 1, budget: int = DEFAULT_BUDGET) -> list:
        """All points over F_{q^m}, infinity first, then by (x, y) codes."""
        Q = self.base.q**m
        if Q > budget:
            raise BudgetExceeded(f"q^m = {Q} exceeds budget {budget}")
        C = self.level(m)
        K = C.field
        out = [CurvePoint(m, None)]
        for x in range(Q):
            v = C.f.eval_code(x)
            if v == 0:
                out.append(CurvePoint(m, x, 0))
            else:
                r = K.sqrt(v)
                if r is not None:
                    s = K.neg(r)
                    out.extend(CurvePoint(m, x, y) for y in sorted((r, s)))
        return out

    @cached_property
    def _lpoly(self):
        counts = [self.count_points(m) for m in range(1, self.genus + 1)]
        return fit_l_polynomial(self.q, counts, self.genus)

    def l_polynomial(self, budget: int = DEFAULT_BUDGET) -> LPolynomial:
        if self.base.q**self.genus > budget:
            raise BudgetExceeded(f"q^g = {self.base.q ** self.genus} exceeds budget {budget}")
        return self._lpoly

    def jacobian_order(self, m: int | None = None) -> int:
        """|J(F_{q^m})|, m relative to the base curve (default: this level)."""
        L = self.base.l_polynomial()
        return jacobian_order_at(L, self.m if m is None else m)

    # -- Jacobian -------------------------------------------------------------------
    def identity(self) -> "MumfordDivisor":
        K = self.field
        return MumfordDivisor(self, Polynomial._raw(K, (1,)), Polynomial._raw(K, ()))

    def point_class(self, P: CurvePoint) -> "MumfordDivisor":
        """Class of P - infinity."""
        C = self.level(P.m) if P.m != self.m else self
        if P.is_infinity:
            return C.identity()
        if not C.is_on_curve(P):
            raise ValueError(f"{P} is not on the curve")
        K = C.field
        u = Polynomial._raw(K, (K.neg(P.x), 1))
        v = Polynomial._raw(K, (P.y,) if P.y else ())
        return MumfordDivisor(C, u, v)

    def class_of_difference(self, P: CurvePoint, Q: CurvePoint) -> "MumfordDivisor":
        if P.m != Q.m:
            raise LevelMismatch(f"points at levels {P.m} and {Q.m}")
        return self.point_class(P) - self.point_class(Q)

    def sqrt_mod(self, a: Residue):
        """Both square roots of a unit residue, or [] if none."""
        pl = a.place
        order = a.size - 1
        if a ** (order // 2) != 1:
            return []
        z = _residue_nonresidue(pl)
        r = _tonelli(a, order, lambda x, y: x * y, lambda x, n: x**n, z)
        return sorted({r.c, (-r).c})

    def _v_candidates(self, pi: Polynomial, e: int) -> list:
        """All v mod pi^e with v^2 = f mod pi^e."""
        K = self.field
        pl = Place(K, pi)
        fr = Residue(pl, self.f)
        if fr.is_zero():
            return [Polynomial._raw(K, ())] if e == 1 else []
        roots = [Polynomial._raw(K, c) for c in self.sqrt_mod(fr)]
        if e == 1:
            return roots
        mod = pi**e
        out = []
        for v in roots:
            for _ in range(e.bit_length() + 1):
                v = (v - (v * v - self.f) * (v.scale(2)).inverse_mod(mod)) % mod
            out.append(v)
        return out

    def divisors_with_support(self, u: Polynomial) -> list:
        """All reduced classes with first Mumford coordinate u."""
        if u.is_one():
            return [self.identity()]
        parts = [(pi**e, self._v_candidates(pi, e)) for pi, e in factor(u)]
        if any(not c for _, c in parts):
            return []
        out = []
        for combo in itertools.product(*(c for _, c in parts)):
            v = _crt([(m, r) for (m, _), r in zip(parts, combo)])
            out.append(MumfordDivisor(self, u, v, reduced=True))
        return out

    def enumerate_jacobian(self, cap: int = DEFAULT_CLASS_CAP) -> list:
        """All of J(F_q) in a deterministic order; size checked against L(1)."""
        N = self.jacobian_order()
        if N > cap:
            raise BudgetExceeded(f"|J| = {N} exceeds class cap {cap}")
        K = self.field
        out = []
        for k in range(self.genus + 1):
            for code in range(K.q**k):
                u = Polynomial.from_code(K, code, k)
                out.extend(self.divisors_with_support(u))
        if len(out) != N:
            raise InconsistentCounts(f"enumerated {len(out)} classes, L(1) = {N}")
        return out

    # -- places -------------------------------------------------------------------------
    def places_of_degree(self, d: int) -> list:
        """Places of degree d over the base of this level."""
        K = self.field
        out = []
        if d == 1:
            out.append(CurvePlace(self, None, None, 1))
        for pi in irreducibles(K, d):
            fr = Residue(Place(K, pi), self.f)
            if fr.is_zero():
                out.append(CurvePlace(self, pi, Polynomial._raw(K, ()), d))
            else:
                rs = self.sqrt_mod(fr)
                for c in rs:
                    out.append(CurvePlace(self, pi, Polynomial._raw(K, c), d))
        if d % 2 == 0:
            for pi in irreducibles(K, d // 2):
                fr = Residue(Place(K, pi), self.f)
                if not fr.is_zero() and not self.sqrt_mod(fr):
                    out.append(CurvePlace(self, pi, None, d))
        return out

    def place_at_point(self, x, y) -> "CurvePlace":
        K = self.field
        x, y = K.coerce(x), K.coerce(y)
        P = CurvePoint(self.m, x, y)
        if not self.is_on_curve(P):
            raise ValueError(f"({x},{y}) is not on the curve")
        pi = Polynomial._raw(K, (K.neg(x), 1))
        return CurvePlace(self, pi, Polynomial._raw(K, (y,) if y else ()), 1)


def _residue_nonresidue(pl: Place) -> Residue:
    K = pl.field
    order = K.q**pl.degree - 1
    for code in itertools.count(1):
        z = Residue(pl, Polynomial.from_code(K, code, pl.degree - 1) if pl.degree > 1
                    else Polynomial.const(K, code))
        if z and z ** (order // 2) != 1:
            return z


def _crt(pairs) -> Polynomial:
    M = None
    acc = None
    for m, r in pairs:
        if M is None:
            M, acc = m, r % m
            continue
        # acc + M * k = r mod m
        k = ((r - acc) * M.inverse_mod(m)) % m
        acc = acc + M * k
        M = M * m
        acc = acc % M
    return acc


@dataclass(frozen=True)
class CurvePlace:
    """A closed point: infinity (pi None, v None), (pi, v) on a split or
    ramified fibre, or an inert fibre (pi, v None) of degree 2 deg pi."""

    curve: HyperellipticCurve
    pi: Polynomial | None
    v: Polynomial | None
    degree: int

    @property
    def is_infinity(self):
        return self.pi is None

    def sort_key(self):
        if self.pi is None:
            return (1, 0, 0, 0)
        return (self.degree, 1, self.pi.code, -1 if self.v is None else self.v.code)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __eq__(self, other):
        if not isinstance(other, CurvePlace):
            return NotImplemented
        return self.curve is other.curve and self.pi == other.pi and self.v == other.v

    def __hash__(self):
        return hash((self.pi, self.v, self.degree))

    def __repr__(self):
        if self.pi is None:
            return "inf"
        if self.degree == 1:
            K = self.curve.field
            return f"({K.neg(self.pi.c[0])},{self.v.c[0] if self.v.c else 0})"
        tag = "inert" if self.v is None else f"v={self.v!r}"
        return f"[{self.pi!r}; {tag}]"

    def divisor_class(self) -> "MumfordDivisor":
        """Class of self - deg(self) * infinity."""
        C = self.curve
        if self.pi is None or self.v is None:
            return C.identity()
        return MumfordDivisor(C, self.pi, self.v)


# --- Mumford divisors ----------------------------------------------------------------

class MumfordDivisor:
    """Reduced class (u, v): u monic, deg v < deg u <= g, u | v^2 - f."""

    __slots__ = ("curve", "u", "v")

    def __init__(self, curve: HyperellipticCurve, u: Polynomial, v: Polynomial, reduced=False):
        self.curve = curve
        if not reduced:
            u, v = _reduce(curve, u, v)
        self.u, self.v = u, v

    @property
    def level(self):
        return self.curve.m

    def is_identity(self):
        return self.u.is_one()

    def key(self):
        return (self.u.c, self.v.c)

    def __eq__(self, other):
        if not isinstance(other, MumfordDivisor):
            return NotImplemented
        return self.curve is other.curve and self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.u.c, self.v.c))

    def __repr__(self):
        return f"<u={self.u!r}, v={self.v!r}>"

    def _check(self, other):
        if self.curve is not other.curve:
            raise LevelMismatch(f"classes at levels {self.level} and {other.level}")

    def __add__(self, other):
        self._check(other)
        return cantor_add(self, other)

    def __neg__(self):
        return negate(self)

    def __sub__(self, other):
        self._check(other)
        return cantor_add(self, negate(other))

    def __mul__(self, n: int):
        return scalar_mul(self, n)

    __rmul__ = __mul__


def _reduce(C: HyperellipticCurve, u: Polynomial, v: Polynomial):
    g, f = C.genus, C.f
    u = u.monic()
    v = v % u if u.degree > 0 else Polynomial._raw(C.field, ())
    while u.degree > g:
        u2 = (f - v * v) // u
        v = (-v) % u2
        u = u2.monic()
        v = v % u if u.degree > 0 else Polynomial._raw(C.field, ())
    return u, v


def cantor_add(D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
    if D1.curve is not D2.curve:
        raise LevelMismatch(f"classes at levels {D1.level} and {D2.level}")
    C = D1.curve
    if D1.is_identity():
        return D2
    if D2.is_identity():
        return D1
    u1, v1, u2, v2 = D1.u, D1.v, D2.u, D2.v
    d0, e1, e2 = u1.xgcd(u2)
    d, c1, c2 = d0.xgcd(v1 + v2)
    s1, s2, s3 = c1 * e1, c1 * e2, c2
    u = (u1 * u2) // (d * d)
    v = ((s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + C.f)) // d) % u if u.degree > 0 \
        else Polynomial._raw(C.field, ())
    return MumfordDivisor(C, u, v)


def negate(D: MumfordDivisor) -> MumfordDivisor:
    return MumfordDivisor(D.curve, D.u, (-D.v) % D.u if D.u.degree > 0 else D.v, reduced=True)


def scalar_mul(D: MumfordDivisor, n: int) -> MumfordDivisor:
    if n < 0:
        return scalar_mul(negate(D), -n)
    result = D.curve.identity()
    base = D
    while n:
        if n & 1:
            result = cantor_add(result, base)
        n >>= 1
        if n:
            base = cantor_add(base, base)
    return result


def class_order(D: MumfordDivisor, N: int) -> int:
    """Exact order of D given a multiple N of it."""
    if not scalar_mul(D, N).is_identity():
        raise OrderMismatch(f"{N} does not kill {D}")
    n = N
    for r, _ in factorint(N).items() if N > 1 else []:
        while n % r == 0 and scalar_mul(D, n // r).is_identity():
            n //= r
    return n


def p_primary_exponent(C: HyperellipticCurve, r: int, cap: int = DEFAULT_CLASS_CAP) -> int:
    """Exponent of the r-primary part of J(F_q)."""
    N = C.jacobian_order()
    k = valuation(N, r)
    if k == 0:
        return 1
    cof = N // r**k
    best = 1
    for D in C.enumerate_jacobian(cap):
        E = scalar_mul(D, cof)
        o = class_order(E, r**k)
        best = max(best, o)
        if best == r**k:
            break
    return best


def sigma_part(n: int, sigma) -> int:
    """Largest divisor of n whose prime factors lie in sigma."""
    if n == 0:
        return 0
    out = 1
    for r in sigma:
        out *= r ** valuation(n, r)
    return out


@dataclass
class ProbeResult:
    pairs: list
    identity_pairs: list
    group_order: int
    points: int


def torsion_probe(C: HyperellipticCurve, m: int, sigma, budget: int = DEFAULT_BUDGET,
                  threads: int = 1) -> ProbeResult:
    """Unordered pairs {P, Q} of F_{q^m}-points with cl(P - Q) of sigma-power order."""
    if C.genus < 1:
        raise GenusZero("probe needs genus >= 1")
    sigma = sorted(set(sigma))
    if not sigma:
        raise ValueError("sigma must be nonempty")
    pts = C.points(m, budget)
    Cm = C.level(m)
    N = C.jacobian_order(m)
    Ns = sigma_part(N, sigma)
    classes = [Cm.point_class(P) for P in pts]

    def row(i):
        hits, ids = [], []
        for j in range(i + 1, len(pts)):
            D = classes[i] - classes[j]
            if D.is_identity():
                ids.append((pts[i], pts[j]))
            elif scalar_mul(D, Ns).is_identity():
                hits.append((pts[i], pts[j]))
        return hits, ids

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            rows = list(ex.map(row, range(len(pts))))
    else:
        rows = [row(i) for i in range(len(pts))]
    pairs = [pr for h, _ in rows for pr in h]
    ids = [pr for _, i in rows for pr in i]
    return ProbeResult(pairs, ids, N, len(pts))
