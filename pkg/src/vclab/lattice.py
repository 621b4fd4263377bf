"""Picard-Lefschetz transvections and monodromy-stable submodules of a symplectic lattice.

Vectors are integer coordinate tuples (a_1, b_1, ..., a_l, b_l) for
a_1 delta_1 + b_1 gamma_1 + ... with <delta_i, gamma_i> = +1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import intlin
from .covertop import SymplecticLattice
from .errors import ZeroVector


@dataclass(frozen=True)
class VanishingVector:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))

    def __add__(self, other):
        return VanishingVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return VanishingVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, k):
        return VanishingVector(tuple(k * a for a in self.coords))

    def is_zero(self):
        return not any(self.coords)


def _coords(v):
    return tuple(v.coords) if isinstance(v, VanishingVector) else tuple(int(x) for x in v)


def pl_transvection(x, c, sign: int, lattice: SymplecticLattice) -> VanishingVector:
    """x + sign * <x, c> * c."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    x, c = _coords(x), _coords(c)
    k = sign * lattice.pair(x, c)
    return VanishingVector(tuple(a + k * b for a, b in zip(x, c)))


def transvection_matrix(c, sign: int, lattice: SymplecticLattice):
    """Integer matrix (columns are images of basis vectors) of the transvection along c."""
    n = lattice.rank
    cols = [pl_transvection([int(i == j) for i in range(n)], c, sign, lattice).coords for j in range(n)]
    return intlin.transpose([list(col) for col in cols])


def full_transvection_set(lattice: SymplecticLattice):
    """Transvections (both signs) along every e_i and e_i +- e_j."""
    n = lattice.rank
    vecs = []
    for i in range(n):
        vecs.append(tuple(int(k == i) for k in range(n)))
    for i, j in combinations(range(n), 2):
        for s in (1, -1):
            vecs.append(tuple(int(k == i) + s * int(k == j) for k in range(n)))
    return [transvection_matrix(c, s, lattice) for c in vecs for s in (1, -1)]


# ---------------------------------------------------------------- constructive classifier


@dataclass(frozen=True)
class StableSubmodule:
    d: int
    rank: int
    basis: tuple  # Hermite basis of d * H
    steps: tuple = field(default=(), compare=False)  # (description, vector) certificates

    @property
    def index(self):
        return self.d ** self.rank


def stable_saturation(alpha, lattice: SymplecticLattice) -> StableSubmodule:
    """d_alpha = gcd of the coordinates, with the submodule d_alpha * H.

    Follows the gcd argument step by step, producing every intermediate vector
    as an explicit integer combination of transvection differences, so each
    recorded vector lies in the stable module generated by alpha:

    1. a_i gamma_i = T_{gamma_i}(alpha) - alpha and b_i delta_i = -(T_{delta_i}(alpha) - alpha);
    2. a_i delta_i, b_i gamma_i by one more transvection inside the block;
    3. the same multiples on every other block, via the transvection along
       delta_i + delta_k (a vanishing class in the full transvection set);
    4. Bezout on all coefficients gives d_alpha times every basis vector.
    """
    a = _coords(alpha)
    n = lattice.rank
    if len(a) != n:
        raise ValueError(f"vector of length {len(a)} in a lattice of rank {n}")
    if not any(a):
        raise ZeroVector("stable saturation of the zero vector")
    ell = lattice.ell

    def e(label_index):
        return tuple(int(k == label_index) for k in range(n))

    def delta(i):
        return e(2 * i)

    def gamma(i):
        return e(2 * i + 1)

    def diff(x, c):
        return (pl_transvection(x, c, 1, lattice) - VanishingVector(x)).coords

    steps = []
    # multiples[(c, k)] = vector c * (basis vector k), with c one of the coefficients of alpha
    have = {}
    for i in range(ell):
        ai, bi = a[2 * i], a[2 * i + 1]
        if ai:
            v = diff(a, gamma(i))  # <alpha, gamma_i> gamma_i = a_i gamma_i
            steps.append((f"a{i + 1}*gamma{i + 1} = T_gamma{i + 1}(alpha) - alpha", v))
            have[(ai, 2 * i + 1)] = v
            w = tuple(-x for x in diff(v, delta(i)))  # -(<a_i gamma_i, delta_i> delta_i)
            steps.append((f"a{i + 1}*delta{i + 1} = -(T_delta{i + 1}(a{i + 1}*gamma{i + 1}) - .)", w))
            have[(ai, 2 * i)] = w
        if bi:
            v = tuple(-x for x in diff(a, delta(i)))  # -<alpha, delta_i> delta_i = b_i delta_i
            steps.append((f"b{i + 1}*delta{i + 1} = -(T_delta{i + 1}(alpha) - alpha)", v))
            have[(bi, 2 * i)] = v
            w = diff(v, gamma(i))  # <b_i delta_i, gamma_i> gamma_i = b_i gamma_i
            steps.append((f"b{i + 1}*gamma{i + 1} = T_gamma{i + 1}(b{i + 1}*delta{i + 1}) - .", w))
            have[(bi, 2 * i + 1)] = w
        for c in (ai, bi):
            if not c:
                continue
            src = have[(c, 2 * i + 1)]  # c * gamma_i
            for k in range(ell):
                if k == i or (c, 2 * k) in have:
                    continue
                cross = tuple(x + y for x, y in zip(delta(i), delta(k)))
                # <c gamma_i, delta_i + delta_k> = -c, so the difference is -c (delta_i + delta_k)
                t = diff(src, cross)
                vk = tuple(-x - y for x, y in zip(t, have[(c, 2 * i)]))
                steps.append((f"{c}*delta{k + 1} via T_(delta{i + 1}+delta{k + 1})", vk))
                have[(c, 2 * k)] = vk
                wk = diff(vk, gamma(k))
                steps.append((f"{c}*gamma{k + 1} = T_gamma{k + 1}({c}*delta{k + 1}) - .", wk))
                have[(c, 2 * k + 1)] = wk
    g, coeffs = intlin.bezout(a)
    final = []
    for k in range(n):
        vec = [0] * n
        for c, u in zip(a, coeffs):
            if c and u:
                vec = [x + u * y for x, y in zip(vec, have[(c, k)])]
        final.append(tuple(vec))
        steps.append((f"d*e{k + 1} by Bezout", tuple(vec)))
    expected = [tuple(g * x for x in e(k)) for k in range(n)]
    if final != expected:  # pragma: no cover - exact identity
        raise ArithmeticError("constructive saturation did not produce d * H")
    return StableSubmodule(g, n, tuple(map(tuple, intlin.hnf_rows([list(v) for v in final], n))),
                           tuple(steps))


def orbit_closure(alpha, generators, cap: int = 64):
    """Smallest lattice containing alpha and stable under the generators and their inverses.

    Iterates v -> g v on a Hermite basis until the basis stops changing or
    `cap` rounds have run (after r rounds every word of length <= r is applied).
    """
    a = list(_coords(alpha))
    n = len(a)
    mats = []
    for g in generators:
        mats.append(g)
        mats.append(intlin.inverse_unimodular(g))
    basis = intlin.hnf_rows([a], n)
    for _ in range(cap):
        new = list(basis)
        for g in mats:
            for b in basis:
                new.append(intlin.matvec(g, b))
        nxt = intlin.hnf_rows(new, n)
        if nxt == basis:
            break
        basis = nxt
    return tuple(map(tuple, basis))


def is_stable(basis, generators):
    """True when every generator maps the lattice spanned by `basis` into itself."""
    hnf = intlin.hnf_rows([list(b) for b in basis], len(basis[0]) if basis else 0)
    return all(intlin.lattice_contains(hnf, intlin.matvec(g, b)) for g in generators for b in hnf)
