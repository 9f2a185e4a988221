import random

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from anabelia.lattice import hnf_rows, in_row_span, integer_kernel, lattice_index, smith_normal_form


def test_snf_small():
    assert smith_normal_form([[2, 4], [6, 8]]) == [2, 4]
    assert smith_normal_form([[4, -4]]) == [4]
    assert smith_normal_form([[0, 0]]) == []
    assert smith_normal_form([[1, 0], [0, 6], [0, 0]]) == [1, 6]


def test_kernel_and_index():
    assert integer_kernel([[1, 1]]) in ([[1, -1]], [[-1, 1]])
    assert lattice_index([[4, -4]], 2) == 0
    assert lattice_index([[2, 0], [0, 3]], 2) == 6


def test_against_sympy():
    rng = random.Random(1)
    for _ in range(150):
        m, n = rng.randint(1, 4), rng.randint(1, 5)
        A = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
        S = sympy_snf(sympy.Matrix(A), domain=sympy.ZZ)
        want = sorted(abs(S[i, i]) for i in range(min(m, n)) if S[i, i] != 0)
        assert sorted(smith_normal_form(A)) == want
        K = integer_kernel(A)
        assert len(K) == n - sympy.Matrix(A).rank()


mats = st.integers(1, 4).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                       min_size=m, max_size=m)))


@settings(max_examples=80)
@given(mats)
def test_lattice_properties(A):
    d = smith_normal_form(A)
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    K = integer_kernel(A)
    for v in K:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in A)
    # saturated: the kernel basis spans a primitive sublattice
    assert all(x == 1 for x in smith_normal_form(K)) if K else True
    H = hnf_rows(A)
    assert all(in_row_span(H, r) for r in A)
    assert all(in_row_span(A, r) for r in H)
