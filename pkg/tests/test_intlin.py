from fractions import Fraction

import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from vclab import intlin

small = st.integers(min_value=-6, max_value=6)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_xgcd_and_bezout():
    g, s, t = intlin.xgcd(240, 46)
    assert g == 2 and 240 * s + 46 * t == 2
    g, u = intlin.bezout([6, 10, 15])
    assert g == 1 and 6 * u[0] + 10 * u[1] + 15 * u[2] == 1
    assert intlin.bezout([0, 0])[0] == 0


@given(matrices(3, 3))
def test_det_matches_sympy(a):
    assert intlin.det(a) == sp.Matrix(a).det()


@given(matrices(4, 3))
def test_snf_is_a_valid_decomposition(a):
    d, u, v = intlin.smith_normal_form(a)
    assert intlin.matmul(intlin.matmul(u, a), v) == d
    assert abs(intlin.det(u)) == 1 and abs(intlin.det(v)) == 1
    diag = [d[i][i] for i in range(3)]
    assert all(d[i][j] == 0 for i in range(4) for j in range(3) if i != j)
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


@settings(max_examples=40)
@given(matrices(3, 3))
def test_elementary_divisors_match_sympy(a):
    ours = intlin.elementary_divisors(a, 3)
    ref = sympy_snf(sp.Matrix(a), domain=sp.ZZ)
    theirs = sorted((abs(int(ref[i, i])) for i in range(3)), key=lambda x: (x == 0, x))
    assert ours == theirs


@given(matrices(3, 4), st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), small), max_size=6))
def test_hnf_is_canonical_under_row_operations(rows, ops):
    mixed = [list(r) for r in rows]
    for i, j, q in ops:
        if i != j:
            mixed[i] = [x + q * y for x, y in zip(mixed[i], mixed[j])]
    assert intlin.hnf_rows(rows, 4) == intlin.hnf_rows(mixed, 4)


@given(matrices(3, 4), st.lists(small, min_size=3, max_size=3))
def test_lattice_membership(rows, coeffs):
    h = intlin.hnf_rows(rows, 4)
    v = [sum(c * r[k] for c, r in zip(coeffs, rows)) for k in range(4)]
    assert intlin.lattice_contains(h, v)


def test_lattice_non_membership():
    h = intlin.hnf_rows([[2, 0], [0, 2]], 2)
    assert not intlin.lattice_contains(h, [1, 0])
    assert intlin.lattice_contains(h, [4, -2])


def test_rational_solve_and_inverse():
    a = [[2, 1], [1, 1]]
    assert intlin.rational_solve(a, [3, 2]) == [Fraction(1), Fraction(1)]
    assert intlin.rational_solve([[1, 1], [1, 1]], [1, 2]) is None
    inv = intlin.inverse_unimodular(a)
    assert intlin.matmul(a, inv) == intlin.identity(2)
