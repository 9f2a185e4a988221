import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anabelia.errors import (BudgetExceeded, GenusZero, InconsistentCounts, LevelMismatch,
                             ValidationError)
from anabelia.field import gf
from anabelia.hyperelliptic import (CurvePoint, HyperellipticCurve, LPolynomial, cantor_add,
                                    class_order, fit_l_polynomial, jacobian_order,
                                    p_primary_exponent, predicted_count, sigma_part,
                                    torsion_probe)
from anabelia.poly import Polynomial


@pytest.fixture(scope="module")
def ell():
    return HyperellipticCurve.from_coeffs(3, 1, [0, 1, 0, 1])


@pytest.fixture(scope="module")
def gen2():
    return HyperellipticCurve.from_coeffs(3, 1, [0, 1, 0, 0, 0, 1])


def brute_count_f9(coeffs):
    """Points of y^2 = f(x) over F_9 = F_3[i], i^2 = -1, written out by hand."""
    els = [(a, b) for a in range(3) for b in range(3)]

    def mul(u, v):
        return ((u[0] * v[0] - u[1] * v[1]) % 3, (u[0] * v[1] + u[1] * v[0]) % 3)

    def add(u, v):
        return ((u[0] + v[0]) % 3, (u[1] + v[1]) % 3)

    squares = {}
    for y in els:
        s = mul(y, y)
        squares[s] = squares.get(s, 0) + 1
    n = 1
    for x in els:
        acc, xp = (0, 0), (1, 0)
        for c in coeffs:
            acc = add(acc, mul((c % 3, 0), xp))
            xp = mul(xp, x)
        n += squares.get(acc, 0)
    return n


def brute_count_prime(p, coeffs):
    n = 1
    for x in range(p):
        v = sum(c * x**i for i, c in enumerate(coeffs)) % p
        n += sum(1 for y in range(p) if y * y % p == v)
    return n


# --- counts and the L-polynomial ------------------------------------------------------------

def test_count_examples(ell, gen2):
    assert ell.count_points(1) == 4
    assert ell.count_points(2) == 16
    assert gen2.count_points(1) == 4


def test_counts_against_brute_force(ell, gen2):
    assert ell.count_points(2) == brute_count_f9([0, 1, 0, 1])
    assert gen2.count_points(2) == brute_count_f9([0, 1, 0, 0, 0, 1])
    for p, cs in [(5, [1, 0, 0, 1]), (7, [0, 2, 0, 1]), (11, [3, 1, 0, 0, 0, 1])]:
        assert HyperellipticCurve.from_coeffs(p, 1, cs).count_points(1) == brute_count_prime(p, cs)


def test_l_polynomial_examples(ell, gen2):
    L = ell.l_polynomial()
    assert L.coeffs == (1, 0, 3)
    assert [predicted_count(L, m) for m in (1, 2, 4)] == [4, 16, 64]
    assert jacobian_order(L) == 4 == ell.count_points(1)
    # frozen from N_1 = 4, N_2 = 14 by Newton's identities, then checked at m = 3..6
    L2 = gen2.l_polynomial()
    assert L2.coeffs == (1, 0, 2, 0, 9)
    assert [gen2.count_points(m) for m in range(1, 7)] == [4, 14, 28, 110, 244, 638]
    assert all(predicted_count(L2, m) == gen2.count_points(m) for m in range(1, 7))


def test_l_polynomial_invariants(ell, gen2):
    for C in (ell, gen2):
        L = C.l_polynomial()
        assert L.functional_equation_holds()
        assert L.weil_bound_holds()
        assert L.root_moduli_ok()
        assert jacobian_order(L) >= 1
        for m in (2, 3):
            assert L.base_change(m).coeffs[:2] == (1, C.count_points(m) - 3**m - 1)


def test_fit_rejects_bad_counts():
    assert fit_l_polynomial(3, [4], 1) == LPolynomial((1, 0, 3), 3)
    with pytest.raises(InconsistentCounts):
        fit_l_polynomial(3, [100], 1)  # |a_1| = 96 breaks the Weil bound
    with pytest.raises(InconsistentCounts):
        fit_l_polynomial(3, [4, 15], 2)


def test_budget(ell):
    with pytest.raises(BudgetExceeded):
        ell.count_points(20)


def test_threads_do_not_change_counts():
    C = HyperellipticCurve.from_coeffs(5, 1, [1, 2, 0, 1])
    assert C.count_points(6, threads=1) == C.count_points(6, threads=4)


def test_constructor_validation():
    with pytest.raises(ValidationError):
        HyperellipticCurve.from_coeffs(5, 1, [0, 0, 1, 1])  # x^2 (x + 1): not squarefree
    with pytest.raises(ValidationError):
        HyperellipticCurve.from_coeffs(5, 1, [1, 0, 0, 0, 1])  # even degree
    with pytest.raises(ValidationError):
        HyperellipticCurve.from_coeffs(5, 1, [1, 0, 0, 2])  # not monic
    with pytest.raises(GenusZero):
        HyperellipticCurve.from_coeffs(5, 1, [1, 1])
    with pytest.raises(ValidationError):
        HyperellipticCurve(gf(2), Polynomial(gf(2), [1, 1, 0, 1]))


# --- the group law ---------------------------------------------------------------------------

def chord_tangent(P, Q, p=3, a=1):
    """Affine group law on y^2 = x^3 + a x over F_p; None is the origin."""
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and (y1 + y2) % p == 0:
        return None
    if P == Q:
        lam = (3 * x1 * x1 + a) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def test_group_law_matches_chord_tangent(ell):
    pts = [None if P.is_infinity else (P.x, P.y) for P in ell.points(1)]

    def cls(P):
        return ell.point_class(CurvePoint(1, None) if P is None else CurvePoint(1, *P))

    for P in pts:
        for Q in pts:
            assert cls(P) + cls(Q) == cls(chord_tangent(P, Q))


def test_cantor_examples(ell):
    P = ell.point_class(CurvePoint(1, 0, 0))
    Q = ell.point_class(CurvePoint(1, 2, 1))
    O = ell.identity()
    assert (P + P).is_identity()
    assert P + O == P
    assert Q + Q == P
    assert class_order(O, 4) == 1
    assert class_order(P, 4) == 2
    assert class_order(Q, 4) == 4
    assert class_order(ell.class_of_difference(CurvePoint(1, 2, 1), CurvePoint(1, None)), 4) == 4


def test_level_mismatch(ell):
    with pytest.raises(LevelMismatch):
        cantor_add(ell.identity(), ell.level(2).identity())
    with pytest.raises(LevelMismatch):
        ell.class_of_difference(CurvePoint(1, 0, 0), CurvePoint(2, 0, 0))


def test_jacobian_sizes(ell, gen2):
    assert len(ell.enumerate_jacobian()) == 4
    assert len(gen2.enumerate_jacobian()) == 12
    assert len(ell.level(2).enumerate_jacobian()) == 16 == ell.jacobian_order(2)
    assert len(gen2.level(2).enumerate_jacobian()) == 144 == gen2.jacobian_order(2)


@pytest.mark.parametrize("which", ["ell", "gen2"])
def test_group_axioms_random(which, request):
    C = request.getfixturevalue(which)
    J = C.enumerate_jacobian()
    N = len(J)
    rng = random.Random(17)
    O = C.identity()
    for _ in range(300):
        a, b, c = (rng.choice(J) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a + O == a and (a + (-a)).is_identity()
        assert (a * N).is_identity()
        assert a * 3 == a + a + a


def test_diagonal_and_antisymmetry(ell, gen2):
    for C in (ell, gen2):
        pts = C.points(1)
        for P in pts:
            for Q in pts:
                D = C.class_of_difference(P, Q)
                assert D.is_identity() == (P == Q)
                assert D == -C.class_of_difference(Q, P)


# --- torsion ---------------------------------------------------------------------------------

def test_primary_exponents(ell, gen2):
    assert p_primary_exponent(ell, 3) == 1
    assert p_primary_exponent(ell, 2) == 4
    assert p_primary_exponent(ell, 5) == 1
    # J(F_3) = Z/2 x Z/6 for the genus-2 curve
    assert p_primary_exponent(gen2, 3) == 3
    assert p_primary_exponent(gen2, 2) == 2


def test_torsion_probe_examples(ell):
    assert torsion_probe(ell, 1, [3]).pairs == []
    pairs = torsion_probe(ell, 1, [2]).pairs
    assert len(pairs) == 6
    assert torsion_probe(ell, 1, [2]).pairs == pairs


def test_sigma_part():
    assert sigma_part(12, [2]) == 4
    assert sigma_part(12, [2, 3]) == 12
    assert sigma_part(12, [5]) == 1


odd_fields = st.sampled_from([(3, 1), (5, 1), (7, 1), (3, 2)])


@settings(max_examples=25, deadline=None)
@given(odd_fields, st.integers(0, 10**6))
def test_random_curve_count_matches_l_polynomial(pd, seed):
    rng = random.Random(seed)
    F = gf(*pd)
    deg = rng.choice([3, 5])
    while True:
        c = [rng.randrange(F.q) for _ in range(deg)] + [1]
        f = Polynomial(F, c)
        if f.is_squarefree():
            break
    C = HyperellipticCurve(F, f)
    L = C.l_polynomial()
    assert L.functional_equation_holds() and L.weil_bound_holds()
    for m in range(C.genus + 1, C.genus + 3):
        if F.q**m <= 20000:
            assert C.count_points(m) == predicted_count(L, m)
