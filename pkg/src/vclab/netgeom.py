"""Local models for the discriminant of a generic net of hyperplane sections.

Hirzebruch-Jung strings, invariant rings of the cyclic groups acting with
weights (1, n-1), completion of the pair cover over a node or cusp, and the
splitting type of the restricted quotient bundle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import sympy as sp

from .errors import BadPair, UnsupportedOrder


@dataclass(frozen=True)
class HJData:
    n: int
    k: int
    bs: tuple
    intersection: tuple

    def value(self) -> Fraction:
        return hj_value(self.bs)


def hj_value(bs) -> Fraction:
    """b_1 - 1/(b_2 - 1/(... - 1/b_m))."""
    acc = Fraction(bs[-1])
    for b in reversed(bs[:-1]):
        acc = b - 1 / acc
    return acc


def hj_intersection_matrix(bs):
    m = len(bs)
    return tuple(tuple(-bs[i] if i == j else (1 if abs(i - j) == 1 else 0) for j in range(m))
                 for i in range(m))


def hj_expand(n: int, k: int) -> HJData:
    """Negative continued fraction n/k = [b_1, ..., b_m] with all b_i >= 2."""
    if not (isinstance(n, int) and isinstance(k, int)) or not 0 < k < n or gcd(n, k) != 1:
        raise BadPair(f"need coprime 0 < k < n, got (n, k) = ({n}, {k})")
    bs = []
    a, b = n, k
    while b:
        q = -(-a // b)  # ceiling
        bs.append(q)
        a, b = b, q * b - a
    data = HJData(n, k, tuple(bs), hj_intersection_matrix(bs))
    if any(x < 2 for x in bs) or data.value() != Fraction(n, k):  # pragma: no cover
        raise ArithmeticError("continued fraction round trip failed")
    return data


def hj_from_digits(bs):
    """(n, k) with n/k = [b_1, ..., b_m]."""
    v = hj_value(list(bs))
    return v.numerator, v.denominator


# ---------------------------------------------------------------- cyclic quotients


@dataclass(frozen=True)
class QuotientModel:
    n: int
    weights: tuple
    generators: tuple  # sympy expressions in x, y
    relation: object  # sympy expression in u, v, w
    pi1_order: int

    def relation_holds(self) -> bool:
        x, y = sp.symbols("x y")
        u, v, w = sp.symbols("u v w")
        sub = self.relation.subs({u: self.generators[0], v: self.generators[1], w: self.generators[2]},
                                 simultaneous=True)
        return sp.expand(sub) == 0


def invariant_monomials(n: int, weights, max_degree: int):
    """Monomials x^i y^j with i*w1 + j*w2 = 0 mod n and i + j <= max_degree."""
    w1, w2 = weights
    return [(i, j) for i in range(max_degree + 1) for j in range(max_degree + 1 - i)
            if (i * w1 + j * w2) % n == 0]


def cyclic_invariants(n: int) -> QuotientModel:
    """C[x, y]^{mu_n} for the weights (1, n-1): generated by x^n, xy, y^n with uw = v^n."""
    if not isinstance(n, int) or n < 2:
        raise ValueError("n must be an integer >= 2")
    x, y = sp.symbols("x y")
    u, v, w = sp.symbols("u v w")
    model = QuotientModel(n, (1, n - 1), (x**n, x * y, y**n), u * w - v**n, n)
    if not model.relation_holds():  # pragma: no cover
        raise ArithmeticError("invariant relation failed")
    return model


def generates_invariants(n: int, max_degree: int) -> bool:
    """Every invariant monomial of degree <= max_degree is a product of x^n, xy, y^n."""
    for i, j in invariant_monomials(n, (1, n - 1), max_degree):
        # x^i y^j = (xy)^c (x^n)^p (y^n)^q with c = min(i, j)
        c = min(i, j)
        if (i - c) % n or (j - c) % n:
            return False
    return True


# ---------------------------------------------------------------- completion


@dataclass(frozen=True)
class Smooth:
    def __str__(self):
        return "Smooth"


@dataclass(frozen=True)
class QuotientSingularity:
    n: int

    def __str__(self):
        return f"QuotientSingularity({self.n})"


def _is_prime(n):
    return n >= 2 and all(n % p for p in range(2, int(n**0.5) + 1))


def completion_classify(image_order: int, n: int):
    """Completion of a covering component over the punctured quotient X_{n,n-1}.

    `image_order` is the order of the local deck image (a divisor of n). The
    component is the trivial cover when the image is everything, giving the
    quotient singularity back; it is the universal cover, a punctured plane,
    when the image is trivial.
    """
    if n < 2 or image_order < 1 or n % image_order:
        raise ValueError(f"image order {image_order} does not divide n = {n}")
    if image_order == n:
        return QuotientSingularity(n)
    if image_order == 1:
        return Smooth()
    if _is_prime(n):  # pragma: no cover - a prime has no proper nontrivial divisor
        raise AssertionError
    raise UnsupportedOrder(f"intermediate cover of order {n // image_order} over 1/{n}(1,{n - 1})")


# ---------------------------------------------------------------- quotient bundle


def splitting_candidates(N: int):
    """All nonincreasing nonnegative N-tuples of degrees with total 1."""
    out = []

    def rec(prefix, remaining, cap):
        if len(prefix) == N:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        for m in range(min(cap, remaining), -1, -1):
            rec(prefix + [m], remaining - m, m)

    rec([], 1, 1)
    return out


def quotient_splitting(N: int):
    """Splitting type of a globally generated rank-N bundle on a line with c_1 = 1."""
    if not isinstance(N, int) or N < 1:
        raise ValueError("N must be a positive integer")
    sols = splitting_candidates(N)
    if len(sols) != 1:  # pragma: no cover - the constraints force uniqueness
        raise ArithmeticError(f"expected a unique splitting, found {sols}")
    return list(sols[0])
