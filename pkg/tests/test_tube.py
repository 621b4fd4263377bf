import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vclab import intlin, monodromy, tube
from vclab.errors import NotInStabilizer

from conftest import cover, mono, pair_orbit


def oracle_chain(word, marked, perms, d, n_edges):
    """Explicit lift bookkeeping: walk each letter on both marked sheets, edge k*d + sheet."""
    chain = [0] * n_edges
    for start, sgn in ((marked[0], 1), (marked[1], -1)):
        s = start
        for letter in word:
            k = abs(letter) - 1
            if letter > 0:
                chain[k * d + s] += sgn
                s = perms[k][s]
            else:
                s = perms[k].index(s)
                chain[k * d + s] -= sgn
        assert s == start
    return chain


def test_empty_word_and_cancelling_word_are_zero():
    cv, po = cover("cubic"), pair_orbit("cubic")
    assert tube.tube_class((), po, cv).cycle == (0, 0)
    w = po.stabilizer_words[0]
    assert tube.tube_class(w + monodromy.invert_word(w), po, cv).cycle == (0, 0)
    assert not any(tube.tube_class(w + monodromy.invert_word(w), po, cv).chain)


def test_word_outside_stabilizer_is_rejected():
    with pytest.raises(NotInStabilizer):
        tube.tube_class((1,), pair_orbit("cubic"), cover("cubic"))


def test_cubic_first_generator_class():
    cv, m, po = cover("cubic"), mono("cubic"), pair_orbit("cubic")
    w = po.stabilizer_words[0]
    assert po.marked == (0, 1) and w == (3, -1)
    tc = tube.tube_class(w, po, cv)
    assert list(tc.chain) == oracle_chain(w, po.marked, m.perms, 3, cv.n_edges)
    assert tc.cycle == (-2, 2)
    # the chain really is homologous to -2 z_0 + 2 z_1
    diff = [c - (-2 * a + 2 * b) for c, a, b in zip(tc.chain, *cv.h1_basis)]
    assert cv.coordinates(diff) == [0, 0]


@pytest.mark.parametrize("name", ["cubic", "quartic"])
def test_classes_match_oracle_chains(name):
    cv, m, po = cover(name), mono(name), pair_orbit(name)
    for w in po.stabilizer_words[:10]:
        tc = tube.tube_class(w, po, cv)
        assert list(tc.chain) == oracle_chain(w, po.marked, m.perms, m.d, cv.n_edges)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["cubic", "quartic"]), st.integers(0, 2**32 - 1))
def test_homomorphism_on_random_words(name, seed):
    cv, po = cover(name), pair_orbit(name)
    rng = np.random.default_rng(seed)
    w1 = tube.random_stabilizer_word(po, rng)
    w2 = tube.random_stabilizer_word(po, rng)
    c1 = tube.tube_class(w1, po, cv).cycle
    c2 = tube.tube_class(w2, po, cv).cycle
    c12 = tube.tube_class(w1 + w2, po, cv).cycle
    assert c12 == tuple(a + b for a, b in zip(c1, c2))
    inv = tube.tube_class(monodromy.invert_word(w1), po, cv).cycle
    assert inv == tuple(-a for a in c1)


def test_max_len_zero_and_conic():
    rep = tube.tube_lattice(mono("cubic"), pair_orbit("cubic"), cover("cubic"), 0)
    assert rep.smith_form == (0, 0) and rep.m is None
    conic = tube.tube_lattice(mono("conic"), pair_orbit("conic"), cover("conic"), 3)
    assert conic.smith_form == () and conic.m == 1
    with pytest.raises(ValueError):
        tube.tube_lattice(mono("cubic"), pair_orbit("cubic"), cover("cubic"), -1)


def contains(outer_hnf, inner_hnf, rank):
    return all(intlin.lattice_contains([list(r) for r in outer_hnf], list(v)) for v in inner_hnf)


@pytest.mark.parametrize("name", ["cubic", "quartic"])
def test_lattice_is_monotone_and_stabilizes_with_equal_divisors(name):
    m, po, cv = mono(name), pair_orbit(name), cover(name)
    rank = 2 * cv.genus
    reps = [tube.tube_lattice(m, po, cv, L) for L in (1, 2)]
    assert contains(reps[1].hnf, reps[0].hnf, rank)
    full = tube.tube_lattice(m, po, cv, 6)
    assert contains(full.hnf, reps[1].hnf, rank)
    assert len(full.smith_form) == rank and len(set(full.smith_form)) == 1
    assert full.m == full.smith_form[0] >= 1
    assert full.to_json() == {"elementary_divisors": list(full.smith_form), "m": full.m,
                              "stabilized_at": full.stabilized_at}


def test_conjugate_generating_set_gives_same_lattice():
    m, po, cv = mono("quartic"), pair_orbit("quartic"), cover("quartic")
    rank = 2 * cv.genus
    s = po.stabilizer_words[1]
    gens = [tube.tube_class(w, po, cv).cycle for w in po.stabilizer_words]
    conj = [tube.tube_class(monodromy.invert_word(s) + w + s, po, cv).cycle for w in po.stabilizer_words]
    assert intlin.hnf_rows(gens, rank) == intlin.hnf_rows(conj, rank)


def test_reversed_marked_pair_gives_same_lattice():
    m, cv = mono("quartic"), cover("quartic")
    po = pair_orbit("quartic")
    rev = monodromy.pair_stabilizer(m, po.marked[::-1])
    a = tube.tube_lattice(m, po, cv, 2)
    b = tube.tube_lattice(m, rev, cv, 2)
    assert a.hnf == b.hnf
