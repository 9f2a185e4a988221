import pytest

from anabelia.counting import (CurveHandle, divisor_class_sequence, exact_residue_count,
                               is_principal, lefschetz_consistency, relation_lattice,
                               unit_image_lattice)
from anabelia.errors import BudgetExceeded
from anabelia.field import gf
from anabelia.function_field import ExceptionalSet, Place
from anabelia.hyperelliptic import HyperellipticCurve
from anabelia.poly import Polynomial


@pytest.fixture(scope="module")
def ell():
    return CurveHandle.hyperelliptic(HyperellipticCurve.from_coeffs(3, 1, [0, 1, 0, 1]))


@pytest.fixture(scope="module")
def gen2():
    return CurveHandle.hyperelliptic(HyperellipticCurve.from_coeffs(3, 1, [0, 1, 0, 0, 0, 1]))


def test_residue_count_examples(ell):
    P1 = CurveHandle.rational(2)
    assert exact_residue_count(P1, 2) == 2
    assert exact_residue_count(P1, 1) == 3
    assert exact_residue_count(ell, 2) == 12


@pytest.mark.parametrize("p", [2, 3, 5])
def test_residue_count_p1_closed_form(p):
    # points of exact degree N on P^1 are N times the number of degree-N places
    from anabelia.function_field import places_of_degree

    h = CurveHandle.rational(p)
    for N in range(1, 5):
        assert exact_residue_count(h, N) == N * len(places_of_degree(gf(p), N))


def test_residue_count_sum(ell, gen2):
    from anabelia.arith import divisors

    for h in (ell, gen2):
        for m in range(1, 6):
            assert sum(exact_residue_count(h, k) for k in divisors(m)) == h.count(m)


def test_lefschetz(ell):
    assert [r[1] for r in lefschetz_consistency(CurveHandle.rational(3), 4)] == [4, 10, 28, 82]
    rows = lefschetz_consistency(ell, 4)
    assert [r[1] for r in rows] == [4, 16, 28, 64]
    assert all(r[1] == r[2] for r in rows)
    assert lefschetz_consistency(ell, 0) == []


def test_class_sequence_examples(ell):
    F3 = gf(3)
    for E in ([], [Place(F3, Polynomial.x(F3))]):
        for sigma in ([2], [3], [2, 3]):
            r = divisor_class_sequence(CurveHandle.rational(3), E, sigma)
            assert r.quotient_invariants == []
    assert divisor_class_sequence(ell, [], [3]).quotient_invariants == []
    r = divisor_class_sequence(ell, [], [2])
    assert r.quotient_invariants == [4] and r.surjective


def test_class_sequence_with_exceptional_places(ell, gen2):
    C = ell.curve
    r = divisor_class_sequence(ell, [C.place_at_point(0, 0)], [2])
    assert r.quotient_invariants == [4]
    r = divisor_class_sequence(gen2, [], [2, 3])
    assert r.image_invariants == [2, 6] and r.quotient_order == 12


def test_lattice_examples(ell):
    F3 = gf(3)
    P1 = CurveHandle.rational(3)
    S = [Place(F3, Polynomial.x(F3)), Place.infinite(F3)]
    basis = unit_image_lattice(P1, S)
    assert basis in ([[1, -1]], [[-1, 1]])
    assert all(is_principal(P1, S, v) for v in basis)
    assert unit_image_lattice(P1, S[:1]) == []
    C = ell.curve
    S = [C.places_of_degree(1)[0], C.place_at_point(2, 1)]
    basis = unit_image_lattice(ell, S)
    assert [[abs(x) for x in v] for v in basis] == [[4, 4]]
    assert all(is_principal(ell, S, v) for v in basis)
    assert not is_principal(ell, S, [1, -1]) and not is_principal(ell, S, [2, -2])


def test_relation_lattice_cyclic(ell):
    C = ell.curve
    Q = C.point_class(C.points(1)[-1])
    rows, table = relation_lattice([Q], C.identity())
    assert rows == [[4]] and len(table) == 4


def test_class_cap(gen2):
    with pytest.raises(BudgetExceeded):
        divisor_class_sequence(gen2, [], [2], cap=5)


def test_budget_on_count():
    with pytest.raises(BudgetExceeded):
        exact_residue_count(CurveHandle.rational(5), 6, budget=1000)


def test_exceptional_set_objects_accepted(ell):
    F3 = gf(3)
    E = ExceptionalSet([Place(F3, Polynomial.x(F3))])
    r = divisor_class_sequence(CurveHandle.rational(3), list(E), [2])
    assert r.quotient_invariants == []
