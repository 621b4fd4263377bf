"""Tube classes of stabilizer words and the lattice they generate in H_1.

For a word w fixing both sheets of the marked pair (i+, i-), the lifts of the
base loop starting on i+ and on i- are closed; their difference is the tube
class of w. For point fibers the correcting chain of the general construction
is zero, so no closing step is needed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import intlin
from .covertop import CoverComplex
from .errors import NotInStabilizer
from .monodromy import PairOrbit, compose, eval_word, identity_perm, invert_word, reduce_word


@dataclass(frozen=True)
class TubeClass:
    word: tuple
    cycle: tuple  # coordinates in cover.h1_basis
    chain: tuple  # underlying edge chain


def tube_chain(word, marked, cover: CoverComplex):
    """Edge chain lift(word, i+) - lift(word, i-); raises if a marked sheet moves."""
    plus, minus = marked
    up, end_p = cover.lift_word(word, plus)
    down, end_m = cover.lift_word(word, minus)
    if end_p != plus or end_m != minus:
        raise NotInStabilizer(
            f"word {tuple(word)} sends marked pair {tuple(marked)} to {(end_p, end_m)}")
    return [a - b for a, b in zip(up, down)]


def tube_class(word, pair_orbit: PairOrbit, cover: CoverComplex) -> TubeClass:
    word = tuple(word)
    chain = tube_chain(word, pair_orbit.marked, cover)
    return TubeClass(word, tuple(cover.coordinates(chain)), tuple(chain))


@dataclass(frozen=True)
class TubeLatticeReport:
    generators: tuple  # tube classes (coordinate vectors) of the Schreier generators used
    hnf: tuple  # Hermite basis of the generated sublattice
    smith_form: tuple  # elementary divisors, length 2g, zeros for missing rank
    m: int | None
    stabilized_at: int  # word length after which the divisors stopped changing
    words_tried: int
    max_len: int
    history: tuple  # elementary divisors after each length

    def to_json(self):
        return {"elementary_divisors": list(self.smith_form), "m": self.m,
                "stabilized_at": self.stabilized_at}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def _common_value(divs):
    if divs and divs[0] > 0 and all(x == divs[0] for x in divs):
        return divs[0]
    return None


def tube_lattice(mdata, pair_orbit: PairOrbit, cover: CoverComplex, max_len: int,
                 frontier_cap: int = 20000) -> TubeLatticeReport:
    """Breadth-first products of Schreier generators up to `max_len` factors.

    States are deduplicated by (evaluated permutation, accumulated class). The
    search stops early once the elementary divisors are unchanged for two
    consecutive lengths; `frontier_cap` bounds the number of states kept per
    length (the remaining ones still contribute to the lattice of their level).
    """
    rank = 2 * cover.genus
    d = cover.sheets
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    gens = []
    for w in pair_orbit.stabilizer_words:
        tc = tube_class(w, pair_orbit, cover)
        gens.append((tuple(w), eval_word(w, mdata.perms, d), tc.cycle))
    letters = []
    for w, p, c in gens:
        letters.append((p, c))
        inv_p = [0] * d
        for i, j in enumerate(p):
            inv_p[j] = i
        letters.append((tuple(inv_p), tuple(-x for x in c)))

    zero = tuple([0] * rank)
    history = [tuple([0] * rank)]
    basis = []
    tried = 0
    frontier = {(identity_perm(d), zero)}
    stabilized_at = 0
    for length in range(1, max_len + 1):
        nxt = set()
        new_vecs = []
        for perm, cls in frontier:
            for p, c in letters:
                state = (compose(perm, p), tuple(a + b for a, b in zip(cls, c)))
                tried += 1
                if state not in nxt:
                    nxt.add(state)
                    new_vecs.append(state[1])
        if rank:
            basis = intlin.hnf_rows(basis + [list(v) for v in new_vecs], rank)
        divs = tuple(intlin.elementary_divisors(basis, rank)) if rank else ()
        history.append(divs)
        if divs != history[-2]:
            stabilized_at = length
        frontier = set(sorted(nxt)[:frontier_cap])
        if length >= 2 and history[-1] == history[-2]:
            break
    divs = history[-1]
    m = _common_value(list(divs)) if rank else 1
    return TubeLatticeReport(
        generators=tuple(c for _, _, c in gens),
        hnf=tuple(map(tuple, basis)),
        smith_form=tuple(divs),
        m=m,
        stabilized_at=stabilized_at,
        words_tried=tried,
        max_len=max_len,
        history=tuple(history),
    )


def random_stabilizer_word(pair_orbit: PairOrbit, rng, n_factors=3):
    """Freely reduced product of random Schreier generators and their inverses."""
    gens = pair_orbit.stabilizer_words
    word = ()
    for _ in range(n_factors):
        w = gens[int(rng.integers(len(gens)))]
        if rng.integers(2):
            w = invert_word(w)
        word = word + tuple(w)
    return reduce_word(word)
