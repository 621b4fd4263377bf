import json

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from vclab import monodromy as mo
from vclab.errors import InconsistentMonodromy, NonTransitive, TrackingCollision

from conftest import curve, mono, pair_orbit


def perm_strategy(n):
    return st.permutations(list(range(n))).map(tuple)


def test_compose_and_words():
    a, b = (1, 0, 2), (0, 2, 1)
    assert mo.compose(a, b) == (2, 0, 1)  # 0 -a-> 1 -b-> 2
    assert mo.eval_word((1, 2), [a, b]) == mo.compose(a, b)
    assert mo.eval_word((1, -1), [a, b]) == (0, 1, 2)
    assert mo.reduce_word((1, 2, -2, 3)) == (1, 3)
    assert mo.invert_word((1, -2)) == (2, -1)


def test_conic_monodromy():
    m = mono("conic")
    assert m.perms == ((1, 0), (1, 0))
    assert m.product() == (0, 1)


@pytest.mark.parametrize("name,d,e", [("cubic", 3, 6), ("quartic", 4, 12)])
def test_shipped_monodromy_invariants(name, d, e):
    m = mono(name)
    assert m.d == d and m.e == e
    assert all(mo.is_transposition(p) for p in m.perms)
    assert m.product() == mo.identity_perm(d)
    assert mo.is_transitive(m.perms, d)
    assert len(mo.group_closure(m.perms)) == sp.factorial(d)
    assert list(m.loop_order) == sorted(m.loop_order)


def test_base_fiber_is_sorted_lexicographically():
    for name in ("conic", "cubic", "quartic"):
        f = mono(name).base_fiber
        assert list(f) == sorted(f, key=lambda z: (z.real, z.imag))


def test_vanishing_action_examples():
    assert mo.vanishing_action((0, 1, 2), 3) == [[1, 0], [0, 1]]
    assert mo.vanishing_action((1, 0, 2), 3) == [[-1, -1], [0, 1]]
    assert mo.vanishing_action((0, 2, 1), 3) == [[0, 1], [1, 0]]


def formal_action(perm, d):
    """Oracle: substitute P_i -> P_perm(i) in P_i - P_0 and read off coordinates."""
    P = sp.symbols(f"P0:{d}")
    basis = [P[i] - P[0] for i in range(1, d)]
    cols = []
    for i in range(1, d):
        img = sp.expand(P[perm[i]] - P[perm[0]])
        # coordinates in the basis P_i - P_0: coefficient of P_i for i >= 1
        cols.append([img.coeff(P[j]) for j in range(1, d)])
    assert all(sp.expand(sum(c * b for c, b in zip(col, basis)) - sp.expand(P[perm[i + 1]] - P[perm[0]])) == 0
               for i, col in enumerate(cols))
    return [[int(cols[j][i]) for j in range(d - 1)] for i in range(d - 1)]


@given(st.integers(2, 5).flatmap(lambda d: st.tuples(st.just(d), perm_strategy(d), perm_strategy(d))))
def test_vanishing_action_functorial_and_signed(data):
    d, s, t = data
    ms, mt = sp.Matrix(mo.vanishing_action(s, d)), sp.Matrix(mo.vanishing_action(t, d))
    # s acts first, then t: matrix(t after s) = M(t) M(s)
    assert sp.Matrix(mo.vanishing_action(mo.compose(s, t), d)) == mt * ms
    assert ms.det() == mo.sign(s)
    assert mo.vanishing_action(s, d) == formal_action(s, d)


def test_pair_stabilizer_conic():
    po = pair_orbit("conic")
    assert po.marked == (0, 1) and po.index == 2
    assert set(po.transversal) == {(0, 1), (1, 0)}


@pytest.mark.parametrize("name", ["cubic", "quartic"])
def test_pair_orbit_index_and_words(name):
    m, po = mono(name), pair_orbit(name)
    d = m.d
    assert po.index <= d * (d - 1)
    direct = {(g[po.marked[0]], g[po.marked[1]]) for g in mo.group_closure(m.perms)}
    assert po.index == len(direct) == len(po.transversal)
    for w in po.stabilizer_words:
        g = mo.eval_word(w, m.perms)
        assert (g[po.marked[0]], g[po.marked[1]]) == po.marked
    # the marked pair is exchanged by the first transposition
    assert mo.is_transposition(m.perms[0]) and m.perms[0][po.marked[0]] == po.marked[1]


def test_cubic_index_is_six():
    assert pair_orbit("cubic").index == 6


@pytest.mark.parametrize("name", ["cubic", "quartic"])
def test_schreier_identity(name):
    m, po = mono(name), pair_orbit(name)
    group = mo.group_closure(m.perms)
    stab_image = mo.group_closure([mo.eval_word(w, m.perms) for w in po.stabilizer_words])
    direct_stab = {g for g in group if g[po.marked[0]] == po.marked[0] and g[po.marked[1]] == po.marked[1]}
    assert stab_image == direct_stab
    assert po.index * len(stab_image) == len(group)


@pytest.mark.parametrize("name", ["conic", "cubic", "quartic"])
def test_orbit_is_pair_cover_component(name):
    po = pair_orbit(name)
    comp = next(c for c in po.orbit if po.marked in c)
    assert set(comp) == set(po.transversal)
    assert len(comp) == po.index


def test_pair_cover_components_for_disconnected_action():
    comps = mo.pair_cover_components([(1, 0, 2, 3), (0, 1, 3, 2)], 4)
    assert sum(len(c) for c in comps) == 12
    assert ((0, 1), (1, 0)) in comps


def test_finish_rejects_bad_data():
    c = curve("cubic")
    b = mono("cubic").branch
    with pytest.raises(InconsistentMonodromy):
        mo._finish(c, b, ((1, 0, 2),) * 5 + ((0, 2, 1),))
    with pytest.raises(TrackingCollision):
        mo._finish(c, b, ((1, 2, 0), (2, 0, 1)) + ((0, 1, 2),) * 4)
    with pytest.raises(NonTransitive):
        mo._finish(c, b, ((1, 0, 2),) * 6)


def test_cache_round_trip(tmp_path):
    c = curve("cubic")
    first = mo.monodromy_rep(c, cache_dir=tmp_path)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    blob = json.loads(files[0].read_text())
    assert set(blob) == {"curve_hash", "branch_points", "basepoint", "perms"}
    second = mo.monodromy_rep(c, cache_dir=tmp_path)
    assert second.perms == first.perms == mono("cubic").perms
    np.testing.assert_allclose(second.branch.points, first.branch.points)


def test_threaded_tracking_is_deterministic():
    c = curve("quartic")
    assert mo.monodromy_rep(c, threads=4).perms == mono("quartic").perms


def test_marked_pair_must_be_distinct():
    with pytest.raises(ValueError):
        mo.pair_stabilizer(mono("cubic"), (1, 1))
