"""Plane curve input, normalization to a generic vertical pencil, branch locus.

A curve is an affine polynomial F(x, y) with exact rational coefficients. The
pencil is the family of vertical lines x = t; after normalization the
coefficient of y^d is a nonzero constant so no fiber escapes to infinity.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import mpmath
import numpy as np
import sympy as sp

from .errors import DegenerateInput, NonLefschetzPencil, NumericalDegeneracy, SingularCurve

X, Y, Z = sp.symbols("x y z")


def parse_rational(value) -> Fraction:
    """Exact rational from an int, a "p/q" string or a decimal string."""
    if isinstance(value, float):
        # floats are accepted only through their shortest decimal repr
        value = repr(value)
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise DegenerateInput(f"bad coefficient {value!r}") from exc


def _fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class PlaneCurve:
    """Validated curve in pencil-generic coordinates.

    `coefficients` maps (i, j) -> coefficient of x^i y^j. `shear` is the
    cumulative integer c of the substitution x -> x + c*y applied to the input.
    """

    coefficients: tuple  # sorted ((i, j), Fraction) pairs, zeros dropped
    degree: int
    shear: int = 0

    @property
    def y_degree(self) -> int:
        return max(j for (_, j), _ in self.coefficients)

    @property
    def genus(self) -> int:
        return (self.degree - 1) * (self.degree - 2) // 2

    @cached_property
    def expr(self):
        return sum(sp.Rational(c.numerator, c.denominator) * X**i * Y**j
                   for (i, j), c in self.coefficients)

    @cached_property
    def numeric(self) -> "CurveEval":
        return CurveEval(self)

    def to_spec(self) -> dict:
        return {
            "degree": self.degree,
            "monomials": [[i, j, _fraction_str(c)] for (i, j), c in self.coefficients],
            "shear": self.shear,
        }

    @cached_property
    def hash(self) -> str:
        blob = json.dumps(self.to_spec(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


class CurveEval:
    """Fast complex evaluation of F, F_x, F_y at a base value t (x = t)."""

    def __init__(self, curve: PlaneCurve):
        d = curve.degree
        c = np.zeros((d + 1, d + 1), dtype=complex)
        for (i, j), q in curve.coefficients:
            c[i, j] = float(q)
        self.d = d
        self.coef = c  # coef[i, j] multiplies x^i y^j
        self.coef_x = np.array([c[i] * i for i in range(1, d + 1)] + [np.zeros(d + 1)])

    def ycoeffs(self, t):
        """Coefficients of F(t, y) in increasing powers of y."""
        return np.polynomial.polynomial.polyval(t, self.coef)

    def xcoeffs(self, t):
        """Coefficients of F_x(t, y) in increasing powers of y."""
        return np.polynomial.polynomial.polyval(t, self.coef_x)

    def fiber(self, t):
        """All d roots of F(t, .), sorted lexicographically by (re, im)."""
        a = self.ycoeffs(t)
        roots = np.roots(a[::-1])
        roots = self.polish(t, roots)
        return sort_fiber(roots)

    def eval(self, t, ys):
        """Return F, F_y, F_x at (t, ys) for a vector of y values."""
        a = self.ycoeffs(t)
        b = self.xcoeffs(t)
        P = np.polynomial.polynomial
        da = P.polyder(a)
        return P.polyval(ys, a), P.polyval(ys, da), P.polyval(ys, b)

    def polish(self, t, ys, iters=6):
        ys = np.array(ys, dtype=complex)
        a = self.ycoeffs(t)
        da = np.polynomial.polynomial.polyder(a)
        for _ in range(iters):
            f = np.polynomial.polynomial.polyval(ys, a)
            fy = np.polynomial.polynomial.polyval(ys, da)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = f / fy
            # near a double root Newton is ill-posed; keep the eigenvalue estimate there
            ys = np.where(np.isfinite(step), ys - step, ys)
        return ys


def sort_fiber(roots):
    roots = np.asarray(roots, dtype=complex)
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


# ---------------------------------------------------------------- loading


def _collect(spec: dict) -> tuple[dict, int, int]:
    if "degree" not in spec or "monomials" not in spec:
        raise DegenerateInput("curve spec needs 'degree' and 'monomials'")
    degree = spec["degree"]
    if not isinstance(degree, int) or degree < 1:
        raise DegenerateInput(f"degree must be a positive integer, got {degree!r}")
    coeffs: dict = {}
    for mono in spec["monomials"]:
        if len(mono) != 3:
            raise DegenerateInput(f"monomial entry must be [i, j, coeff], got {mono!r}")
        i, j, c = mono
        if not (isinstance(i, int) and isinstance(j, int)) or i < 0 or j < 0:
            raise DegenerateInput(f"bad exponents in {mono!r}")
        coeffs[(i, j)] = coeffs.get((i, j), Fraction(0)) + parse_rational(c)
    coeffs = {k: v for k, v in coeffs.items() if v != 0}
    if not coeffs:
        raise DegenerateInput("zero polynomial")
    actual = max(i + j for i, j in coeffs)
    if actual != degree:
        raise DegenerateInput(f"declared degree {degree} but polynomial has degree {actual}")
    return coeffs, degree, int(spec.get("shear", 0))


def _poly_to_coeffs(expr) -> dict:
    poly = sp.Poly(sp.expand(expr), X, Y)
    return {(int(i), int(j)): Fraction(int(c.p), int(c.q)) for (i, j), c in poly.terms() if c != 0}


def _top_form_at(coeffs: dict, d: int, c: int) -> Fraction:
    """Coefficient of y^d after x -> x + c*y, i.e. F_d(c, 1)."""
    return sum((q * c**i for (i, j), q in coeffs.items() if i + j == d), Fraction(0))


def load_curve(spec) -> PlaneCurve:
    """Validate a curve-spec document (dict, JSON text or path) and normalize it."""
    if isinstance(spec, (str, Path)):
        text = Path(spec).read_text() if Path(str(spec)).exists() else str(spec)
        spec = json.loads(text)
    coeffs, d, shear0 = _collect(spec)
    c = 0
    while _top_form_at(coeffs, d, c) == 0:
        # F_d(c, 1) vanishes for at most d values of c
        c += 1
    if c:
        expr = sum(sp.Rational(q.numerator, q.denominator) * X**i * Y**j
                   for (i, j), q in coeffs.items())
        coeffs = _poly_to_coeffs(expr.subs(X, X + c * Y))
    curve = PlaneCurve(tuple(sorted(coeffs.items())), d, shear0 + c)
    check_smooth(curve)
    return curve


def check_smooth(curve: PlaneCurve) -> None:
    F = curve.expr
    Fx, Fy = sp.diff(F, X), sp.diff(F, Y)
    gb = sp.groebner([F, Fx, Fy], X, Y, order="lex", domain="QQ")
    if list(gb.exprs) != [1]:
        witness = None
        try:
            sols = sp.solve([F, Fx, Fy], [X, Y], dict=True)
            if sols:
                witness = (sols[0][X], sols[0][Y])
        except NotImplementedError:
            pass
        raise SingularCurve(f"affine singular point {witness}", witness=witness)
    # points at infinity: common zero of F_d, grad F_d and F_{d-1} on P^1
    d = curve.degree
    Fh = sp.expand(sp.Poly(F, X, Y).homogenize(Z).as_expr())
    forms = [sp.expand(g.subs(Z, 0)) for g in (Fh, sp.diff(Fh, X), sp.diff(Fh, Y), sp.diff(Fh, Z))]
    forms = [g for g in forms if g != 0]
    g = forms[0]
    for h in forms[1:]:
        g = sp.gcd(g, h)
    if sp.Poly(g, X, Y).total_degree() > 0:
        raise SingularCurve(f"singular point at infinity on {sp.factor(g)} = 0", witness=("inf", str(g)))


# ---------------------------------------------------------------- branch locus


def genus(curve: PlaneCurve) -> int:
    return curve.genus


def discriminant(curve: PlaneCurve) -> sp.Poly:
    """Exact discriminant of F(t, y) with respect to y, as a polynomial in t."""
    return sp.Poly(sp.discriminant(curve.expr, Y), X, domain="QQ")


@dataclass(frozen=True)
class BranchSet:
    """Branch points in loop order, with the base point and per-point lasso radii."""

    points: tuple
    basepoint: complex
    radii: tuple = field(default=())

    @property
    def e(self) -> int:
        return len(self.points)

    def safety(self, k: int) -> float:
        """Minimum admissible distance of a tracked path from branch point k."""
        return 0.5 * self.radii[k]

    def to_json(self) -> dict:
        return {
            "points": [[p.real, p.imag] for p in self.points],
            "basepoint": [self.basepoint.real, self.basepoint.imag],
        }


def loop_order_key(t, t0):
    """Counterclockwise angle seen from t0, measured from the empty direction +1."""
    w = t - t0
    return (math.atan2(w.imag, w.real) % (2 * math.pi), abs(w))


def make_branch_set(points) -> BranchSet:
    pts = [complex(p) for p in points]
    R = 2 * max((abs(p) for p in pts), default=0.0) + 1.0
    t0 = complex(R, 0.0)
    pts.sort(key=lambda p: loop_order_key(p, t0))
    radii = []
    for k, p in enumerate(pts):
        others = [abs(p - q) for j, q in enumerate(pts) if j != k] + [abs(p - t0)]
        radii.append(min(others) / 3.0)
    return BranchSet(tuple(pts), t0, tuple(radii))


def branch_points(curve: PlaneCurve, tol: float = 1e-12) -> BranchSet:
    """Roots of disc_y F(t, .), certified simple and separated; e = 2(d+g-1)."""
    d, g = curve.degree, curve.genus
    D = discriminant(curve)
    expected = 2 * (d + g - 1)
    if D.is_zero:
        raise NonLefschetzPencil("discriminant vanishes identically (reducible fibration)")
    if D.degree() != d * (d - 1):
        raise NonLefschetzPencil(
            f"discriminant has degree {D.degree()} < {d * (d - 1)}: branching at infinity")
    if sp.gcd(D, D.diff(X)).degree() > 0:
        raise NonLefschetzPencil("discriminant has a multiple root: a fiber is worse than one node")
    if D.degree() != expected:  # pragma: no cover - degree-genus identity
        raise NonLefschetzPencil(f"branch count {D.degree()} != 2(d+g-1) = {expected}")
    coeffs = [mpmath.mpf(int(c.p)) / int(c.q) for c in D.all_coeffs()]
    if len(coeffs) == 1:
        return make_branch_set([])
    digits = max(30, int(-math.log10(tol)) + 15)
    with mpmath.workdps(digits):
        roots, err = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * digits, error=True)
    pts = [complex(r) for r in roots]
    sep = min((abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:]), default=math.inf)
    if sep < tol or sep < 100 * float(err):
        raise NumericalDegeneracy(f"branch points separated by {sep:.3e} < resolution {tol:.1e}")
    return make_branch_set(pts)
