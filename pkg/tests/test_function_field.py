import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anabelia.errors import BadAlpha, InfinitePlaceInE, NoFreeRationalPlace
from anabelia.field import gf
from anabelia.function_field import (POLE, ConstantTower, Divisor, ExceptionalSet, Mobius,
                                     Place, RationalFunction, Residue, evaluate,
                                     function_with_divisor, in_unit_group, interpolate,
                                     mobius_change, ord_at, places_of_degree, principal_divisor,
                                     random_unit, single_pole_function, tower_extend,
                                     unit_sum_decompose)
from anabelia.poly import Polynomial


def poly(F, coeffs):
    return Polynomial(F, [F.coerce(c) for c in coeffs])


def rf(F, num, den=(1,)):
    return RationalFunction(poly(F, num), poly(F, den))


def pl(F, coeffs):
    return Place(F, poly(F, coeffs))



def test_ord_examples():
    F = gf(3)
    f = rf(F, [0, 0, 1], [1, 1])
    assert ord_at(f, pl(F, [0, 1])) == 2
    assert ord_at(f, Place.infinite(F)) == -1
    assert ord_at(f, pl(F, [1, 1])) == -1


def test_evaluate_examples():
    F5, F2 = gf(5), gf(2)
    assert evaluate(rf(F5, [1, 1], [-1, 1]), pl(F5, [-2, 1])) == 3
    assert evaluate(RationalFunction.t(F5), Place.infinite(F5)) is POLE
    assert evaluate(rf(F2, [0, 1, 1]), pl(F2, [1, 1, 1])) == 1


def test_principal_divisor_examples():
    F2 = gf(2)
    t = RationalFunction.t(F2)
    assert principal_divisor(t) == Divisor({pl(F2, [0, 1]): 1, Place.infinite(F2): -1})
    D = principal_divisor(rf(F2, [1, 1, 1], [0, 0, 1]))
    assert D == Divisor({pl(F2, [1, 1, 1]): 1, pl(F2, [0, 1]): -2})
    assert principal_divisor(RationalFunction.const(gf(11), 7)).is_zero()


def test_places_of_degree_examples():
    F2 = gf(2)
    assert places_of_degree(F2, 1) == [pl(F2, [0, 1]), pl(F2, [1, 1]), Place.infinite(F2)]
    assert places_of_degree(F2, 2) == [pl(F2, [1, 1, 1])]
    assert len(places_of_degree(gf(3), 1)) == 4


def test_single_pole_examples():
    F5, F2 = gf(5), gf(2)
    assert single_pole_function(Place.infinite(F5), 1) == RationalFunction.t(F5)
    assert single_pole_function(pl(F5, [-3, 1]), 1) == rf(F5, [1], [-3, 1])
    f = single_pole_function(pl(F2, [1, 1, 1]), 1)
    assert f == rf(F2, [0, 1], [1, 1, 1])
    assert principal_divisor(f).poles() == Divisor({pl(F2, [1, 1, 1]): 1})


@pytest.mark.parametrize("q", [(2, 1), (3, 1), (2, 2), (5, 1)])
def test_single_pole_has_one_pole(q):
    F = gf(*q)
    for d in (1, 2):
        for x0 in places_of_degree(F, d):
            for n in (1, 2, 3):
                f = single_pole_function(x0, n)
                assert principal_divisor(f).poles() == Divisor({x0: n})


def test_in_unit_group_examples():
    F = gf(3)
    t = RationalFunction.t(F)
    assert in_unit_group(t, ExceptionalSet([pl(F, [1, 1])]))
    assert not in_unit_group(t, ExceptionalSet([pl(F, [0, 1])]))
    assert in_unit_group(rf(F, [0, 1], [1, 1]), ExceptionalSet([Place.infinite(F)]))


def test_interpolate_examples():
    F3 = gf(3)
    E = ExceptionalSet([pl(F3, [0, 1]), pl(F3, [1, 1])])
    f = interpolate(E, {pl(F3, [0, 1]): 1, pl(F3, [1, 1]): 2})
    # f(0) = 1, f(-1) = 2 forces f = 2t + 1 in degree < 2
    assert f == rf(F3, [1, 2])
    assert interpolate(ExceptionalSet([pl(F3, [0, 1])]), {pl(F3, [0, 1]): 2}) == rf(F3, [2])
    F2 = gf(2)
    P = pl(F2, [1, 1, 1])
    assert interpolate(ExceptionalSet([P]), {P: Residue(P, poly(F2, [0, 1]))}) == RationalFunction.t(F2)
    with pytest.raises(InfinitePlaceInE):
        interpolate(ExceptionalSet([Place.infinite(F2)]), {})


def test_unit_sum_decompose_examples():
    F = gf(3)
    E = ExceptionalSet([pl(F, [0, 1])])
    t = RationalFunction.t(F)
    assert unit_sum_decompose(t, E, 2) == (rf(F, [2]), rf(F, [1, 1]))
    assert unit_sum_decompose(t + 1, E, 2) == (rf(F, [2]), rf(F, [2, 1]))
    assert unit_sum_decompose(RationalFunction.const(F, 0), E, 2) == (rf(F, [2]), rf(F, [1]))


def test_decompose_needs_alpha():
    F = gf(2)
    with pytest.raises(BadAlpha):
        unit_sum_decompose(RationalFunction.t(F), ExceptionalSet([pl(F, [1, 1])]))


def test_mobius_change_examples():
    F = gf(3)
    s, _ = mobius_change(ExceptionalSet([pl(F, [0, 1])]))
    assert s.is_identity()
    s, s_inv = mobius_change(ExceptionalSet([Place.infinite(F)]))
    assert s.as_function() == rf(F, [1], [0, 1])
    assert s.pullback_place(Place.infinite(F)) == pl(F, [0, 1])
    with pytest.raises(NoFreeRationalPlace):
        mobius_change(ExceptionalSet(places_of_degree(F, 1)))


def test_tower_examples():
    T = ConstantTower(gf(5), 2)
    assert [T.level(i).q for i in range(3)] == [5, 25, 625]
    two = gf(5)(2)
    for j in range(3):
        assert T.lift_element(two, j) == 2
    P = pl(gf(5), [2, 0, 1])
    above = T.lift_place(P, 1)
    assert len(above) == 2 and all(Q.degree == 1 for Q in above)
    K, embs = tower_extend(T, 2)
    assert K is T.level(2) and set(embs) == {0, 1, 2}
    assert T.check_transitivity(2)


def test_tower_lift_compatibility():
    F = gf(3)
    T = ConstantTower(F, 2)
    rng = random.Random(5)
    E = ExceptionalSet(field=F)
    for _ in range(30):
        f, g = random_unit(F, E, rng), random_unit(F, E, rng)
        for j in (1, 2):
            assert T.lift_function(f * g, j) == T.lift_function(f, j) * T.lift_function(g, j)
            D = principal_divisor(f)
            assert principal_divisor(T.lift_function(f, j)) == T.lift_divisor(D, j)
        x = places_of_degree(F, 2)[rng.randrange(3)]
        if ord_at(f, x) == 0:
            for Q in T.lift_place(x, 1):
                v = T.lift_residue(evaluate(f, x), Q)
                assert evaluate(T.lift_function(f, 1), Q) == v


def test_function_with_divisor():
    F = gf(5)
    D = Divisor({pl(F, [1, 1]): 2, pl(F, [2, 0, 1]): -1, Place.infinite(F): 0})
    f = function_with_divisor(D, F)
    got = principal_divisor(f)
    assert all(ord_at(f, P) == n for P, n in D.items())
    assert got.degree == 0


# --- properties ---------------------------------------------------------------------------

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)]
small = st.sampled_from(FIELDS).flatmap(lambda pd: st.tuples(
    st.just(gf(*pd)), st.integers(0, 10**6)))


@settings(max_examples=60)
@given(small)
def test_divisor_properties(data):
    F, seed = data
    rng = random.Random(seed)
    E = ExceptionalSet(field=F)
    f, g = random_unit(F, E, rng), random_unit(F, E, rng)
    assert principal_divisor(f).degree == 0
    assert principal_divisor(f * g) == principal_divisor(f) + principal_divisor(g)
    for P in places_of_degree(F, 1) + places_of_degree(F, 2)[:3]:
        assert ord_at(f * g, P) == ord_at(f, P) + ord_at(g, P)
        if ord_at(f, P) == 0 and ord_at(g, P) == 0:
            assert evaluate(f * g, P) == evaluate(f, P) * evaluate(g, P)


@settings(max_examples=60)
@given(small)
def test_decompose_and_interpolate(data):
    F, seed = data
    if F.q == 2:
        return  # no alpha outside {0, 1}; see test_decompose_needs_alpha
    rng = random.Random(seed)
    finite = [P for d in (1, 2) for P in places_of_degree(F, d) if not P.is_infinite]
    E = ExceptionalSet(rng.sample(finite, min(len(finite), rng.randint(1, 3))), field=F)
    f = random_unit(F, E, rng)
    g, h = unit_sum_decompose(f, E)
    assert g + h == f
    assert in_unit_group(g, E) and in_unit_group(h, E)
    targets = {}
    for P in E:
        c = [rng.randrange(F.q) for _ in range(P.degree)]
        targets[P] = Residue(P, Polynomial(F, c))
    r = interpolate(E, targets)
    assert all(evaluate(r, P) == targets[P] for P in E)


@settings(max_examples=60)
@given(small)
def test_mobius_preserves_order(data):
    F, seed = data
    rng = random.Random(seed)
    while True:
        a, b, c, d = (rng.randrange(F.q) for _ in range(4))
        if F.sub(F.mul(a, d), F.mul(b, c)):
            break
    s = Mobius.of(F, a, b, c, d)
    f = random_unit(F, ExceptionalSet(field=F), rng)
    fs = s.apply(f)
    for P in places_of_degree(F, 1) + places_of_degree(F, 2)[:2]:
        assert ord_at(f, P) == ord_at(fs, s.pullback_place(P))
    assert s.inverse().apply(fs) == f
