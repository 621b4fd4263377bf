import itertools
from fractions import Fraction
from math import gcd

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from vclab import intlin, netgeom
from vclab.errors import BadPair, UnsupportedOrder


def test_node_and_cusp_strings():
    node = netgeom.hj_expand(2, 1)
    assert node.bs == (2,) and node.intersection == ((-2,),)
    cusp = netgeom.hj_expand(3, 2)
    assert cusp.bs == (2, 2) and cusp.intersection == ((-2, 1), (1, -2))
    assert netgeom.hj_expand(5, 3).bs == (2, 3)
    assert Fraction(2) - Fraction(1, 3) == Fraction(5, 3)


@pytest.mark.parametrize("n,k", [(4, 2), (3, 3), (3, 0), (2, 5), (0, 1), (3.0, 1)])
def test_bad_pairs(n, k):
    with pytest.raises(BadPair):
        netgeom.hj_expand(n, k)


coprime_pairs = st.integers(2, 400).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(1, n - 1))).filter(lambda p: gcd(*p) == 1)


@given(coprime_pairs)
def test_hj_round_trip_and_shape(pair):
    n, k = pair
    data = netgeom.hj_expand(n, k)
    assert all(b >= 2 for b in data.bs)
    assert netgeom.hj_from_digits(data.bs) == (n, k)
    m = len(data.bs)
    for i in range(m):
        for j in range(m):
            want = -data.bs[i] if i == j else (1 if abs(i - j) == 1 else 0)
            assert data.intersection[i][j] == want


@given(st.lists(st.integers(2, 6), min_size=1, max_size=6))
def test_digits_round_trip(bs):
    n, k = netgeom.hj_from_digits(bs)
    assert netgeom.hj_expand(n, k).bs == tuple(bs)


@given(coprime_pairs)
def test_intersection_matrix_negative_definite(pair):
    mat = netgeom.hj_expand(*pair).intersection
    neg = [[-x for x in row] for row in mat]
    if len(neg) <= 8:
        assert all(intlin.det([row[:r] for row in neg[:r]]) > 0 for r in range(1, len(neg) + 1))
    assert np.linalg.eigvalsh(np.array(mat, dtype=float)).max() < 0


@pytest.mark.parametrize("n", [2, 3, 5])
def test_cyclic_invariant_relation(n):
    model = netgeom.cyclic_invariants(n)
    u, v, w = sp.symbols("u v w")
    x, y = sp.symbols("x y")
    assert sp.expand(model.relation - (u * w - v**n)) == 0
    assert model.relation_holds() and model.pi1_order == n and model.weights == (1, n - 1)
    assert sp.expand(model.relation.subs({u: x**n, v: x * y, w: y**n}, simultaneous=True)) == 0


def test_cyclic_invariants_rejects_small_n():
    with pytest.raises(ValueError):
        netgeom.cyclic_invariants(1)


def test_n5_invariants_are_generated():
    n = 5
    x, y = sp.symbols("x y")
    zeta = sp.exp(2 * sp.pi * sp.I / n)
    mons = netgeom.invariant_monomials(n, (1, n - 1), n)
    # independent invariance check by substituting the group action
    for i, j in itertools.product(range(n + 1), repeat=2):
        if i + j > n:
            continue
        m = x**i * y**j
        moved = m.subs({x: zeta * x, y: zeta ** (n - 1) * y}, simultaneous=True)
        invariant = sp.simplify(moved - m) == 0
        assert invariant == ((i, j) in mons)
    # generation: solve p*n + c = i, q*n + c = j over nonnegative integers by search
    for i, j in mons:
        assert any(p * n + c == i and q * n + c == j
                   for p in range(2) for q in range(2) for c in range(n + 1))
    assert netgeom.generates_invariants(n, 12)


@pytest.mark.parametrize("image,n,expected", [
    (2, 2, "QuotientSingularity(2)"), (1, 2, "Smooth"),
    (1, 3, "Smooth"), (3, 3, "QuotientSingularity(3)"),
])
def test_completion_classification(image, n, expected):
    assert str(netgeom.completion_classify(image, n)) == expected


def test_completion_rejects_intermediate_and_bad_orders():
    with pytest.raises(UnsupportedOrder):
        netgeom.completion_classify(2, 4)
    with pytest.raises(ValueError):
        netgeom.completion_classify(2, 3)


def brute_force_splittings(N):
    """Every degree vector in {0..2}^N with nonnegative digits summing to c_1 = 1, as a multiset."""
    return {tuple(sorted(v, reverse=True)) for v in itertools.product(range(3), repeat=N) if sum(v) == 1}


@pytest.mark.parametrize("N", range(1, 13))
def test_quotient_splitting_exhaustive(N):
    out = netgeom.quotient_splitting(N)
    assert out == [1] + [0] * (N - 1)
    assert sum(out) == 1 and len(out) == N
    if N <= 9:
        assert brute_force_splittings(N) == {tuple(out)}
    assert netgeom.splitting_candidates(N) == [tuple(out)]


def test_quotient_splitting_rejects_bad_rank():
    with pytest.raises(ValueError):
        netgeom.quotient_splitting(0)
