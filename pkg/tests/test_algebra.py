import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from anabelia.arith import divisors, factorint, is_prime, mobius
from anabelia.errors import ZeroInverse
from anabelia.field import embedding, gf
from anabelia.poly import Polynomial, factor, irreducibles, is_irreducible, poly_gcd, poly_roots

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (5, 2), (7, 1), (2, 4)]


def P(F, coeffs):
    return Polynomial(F, [F.coerce(c) for c in coeffs])


# --- worked examples ----------------------------------------------------------------------

def test_inverse_examples():
    assert gf(5)(2).inverse() == 3
    F4 = gf(2, 2)
    w = F4.gen
    assert w.inverse() == w + 1
    assert F4.one.inverse() == 1


def test_frobenius_examples():
    F4 = gf(2, 2)
    w = F4.gen
    assert w.frobenius(1) == w + 1
    assert w.frobenius(0) == w
    assert gf(5)(2).frobenius(1) == 2


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroInverse):
        gf(7)(0).inverse()


def test_gcd_examples():
    F5, F2 = gf(5), gf(2)
    assert poly_gcd(P(F5, [-1, 0, 1]), P(F5, [-1, 1])) == P(F5, [-1, 1])
    assert poly_gcd(P(F2, [1, 1, 1]), P(F2, [1, 1])) == P(F2, [1])
    f = P(F5, [2, 0, 3])
    assert poly_gcd(f, P(F5, [])) == f.monic()


def test_irreducibility_examples():
    F2 = gf(2)
    assert is_irreducible(P(F2, [1, 1, 1]))
    assert not is_irreducible(P(F2, [1, 0, 1]))
    for p, d in FIELDS[:5]:
        assert is_irreducible(Polynomial.x(gf(p, d)))


def test_root_examples():
    F5, F3 = gf(5), gf(3)
    assert sorted(r.code for r in poly_roots(P(F5, [1, 0, 1]), F5)) == [2, 3]
    assert poly_roots(P(F3, [1, 0, 1]), F3) == []
    assert [r.code for r in poly_roots(P(F5, [-1, 1]), F5)] == [1]


def test_irreducibles_examples():
    F2 = gf(2)
    assert irreducibles(F2, 2) == [P(F2, [1, 1, 1])]
    assert irreducibles(F2, 1) == [P(F2, [0, 1]), P(F2, [1, 1])]
    assert len(irreducibles(F2, 3)) == 2


# --- against independent counts and sympy -----------------------------------------------

@pytest.mark.parametrize("p,d", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)])
def test_necklace_counts(p, d):
    q = p**d
    F = gf(p, d)
    for n in range(1, 5 if q < 5 else 4):
        # Gauss: n * #irreducible monic of degree n = sum_{k|n} mu(k) q^(n/k)
        want = sum(mobius(k) * q ** (n // k) for k in divisors(n)) // n
        assert len(irreducibles(F, n)) == want


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_factor_matches_sympy(p):
    rng = random.Random(p)
    F = gf(p)
    x = sympy.Symbol("x")
    for _ in range(40):
        coeffs = [rng.randrange(p) for _ in range(rng.randint(2, 8))] + [1]
        f = P(F, coeffs)
        ours = sorted((tuple(g.c), e) for g, e in factor(f))
        sp = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
        _, fl = sp.factor_list()
        theirs = sorted((tuple(int(c) % p for c in reversed(g.monic().all_coeffs())), e)
                        for g, e in fl)
        ours = [(tuple(c.code if hasattr(c, "code") else c for c in cs), e) for cs, e in ours]
        assert ours == theirs


@pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (3, 2), (5, 2)])
def test_extension_multiplication_matches_sympy(p, d):
    F = gf(p, d)
    x = sympy.Symbol("x")
    mod = sympy.Poly(list(reversed([c for c in F.modulus])), x, modulus=p)
    rng = random.Random(d)

    def to_poly(code):
        digits = [(code // p**i) % p for i in range(d)]
        return sympy.Poly(list(reversed(digits)), x, modulus=p)

    def to_code(poly):
        cs = [int(c) % p for c in reversed(poly.all_coeffs())]
        return sum(c * p**i for i, c in enumerate(cs))

    for _ in range(100):
        a, b = rng.randrange(F.q), rng.randrange(F.q)
        want = to_code((to_poly(a) * to_poly(b)).rem(mod))
        assert F.mul(a, b) == want


def test_least_moduli_frozen():
    # least irreducible in lexicographic code order, checked by sympy.is_irreducible
    assert list(gf(2, 2).modulus) == [1, 1, 1]
    assert list(gf(3, 2).modulus) == [1, 0, 1]
    assert list(gf(2, 3).modulus) == [1, 1, 0, 1]
    x = sympy.Symbol("x")
    for p, d in [(2, 2), (3, 2), (2, 3), (5, 2), (7, 2)]:
        m = list(gf(p, d).modulus)
        assert sympy.Poly(list(reversed(m)), x, modulus=p).is_irreducible


def test_arith_helpers():
    assert is_prime(13) and not is_prime(1) and not is_prime(91)
    assert factorint(360) == {2: 3, 3: 2, 5: 1}
    assert factorint(2**61 - 1) == {2**61 - 1: 1}
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_embedding_compose_transitive():
    F5, F25, F625 = gf(5), gf(5, 2), gf(5, 4)
    e1, e2 = embedding(F5, F25), embedding(F25, F625)
    direct = embedding(F5, F625)
    assert e2.compose(e1).image == direct.image
    e = embedding(F25, F625)
    for a in range(25):
        for b in range(0, 25, 7):
            assert e(F25.mul(a, b)) == F625.mul(e(a), e(b))
            assert e(F25.add(a, b)) == F625.add(e(a), e(b))


# --- properties -------------------------------------------------------------------------

field_and_elems = st.sampled_from(FIELDS).flatmap(
    lambda pd: st.tuples(st.just(gf(*pd)),
                         st.lists(st.integers(0, pd[0] ** pd[1] - 1), min_size=3, max_size=3)))


@given(field_and_elems)
def test_field_axioms(data):
    F, (a, b, c) = data
    a, b, c = F(a), F(b), F(c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + (-a) == 0
    if a:
        assert a * a.inverse() == 1
    assert a ** F.q == a
    assert (a + b).frobenius(1) == a.frobenius(1) + b.frobenius(1)


@given(field_and_elems)
def test_sqrt_roundtrip(data):
    F, (a, _, _) = data
    r = F.mul(a, a)
    assert F.is_square(r)
    s = F.sqrt(r)
    assert s is not None and F.mul(s, s) == r


poly_strategy = st.sampled_from([(2, 1), (3, 1), (5, 1), (2, 2)]).flatmap(
    lambda pd: st.tuples(st.just(gf(*pd)),
                         st.lists(st.integers(0, pd[0] ** pd[1] - 1), min_size=1, max_size=7),
                         st.lists(st.integers(0, pd[0] ** pd[1] - 1), min_size=1, max_size=7)))


@settings(max_examples=60)
@given(poly_strategy)
def test_poly_division_and_gcd(data):
    F, a, b = data
    f, g = P(F, a), P(F, b)
    if g.degree < 0:
        return
    q, r = divmod(f, g)
    assert q * g + r == f and r.degree < g.degree
    d = poly_gcd(f, g)
    assert (f % d).degree < 0 and (g % d).degree < 0


@settings(max_examples=40)
@given(poly_strategy)
def test_factor_product(data):
    F, a, _ = data
    f = P(F, a + [1])
    if f.degree < 1:
        return
    prod = Polynomial.const(F, 1)
    for g, e in factor(f):
        assert is_irreducible(g) and g.is_monic()
        prod = prod * g**e
    assert prod == f.monic()
