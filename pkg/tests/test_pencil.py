import json
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from vclab import pencil
from vclab.errors import DegenerateInput, NonLefschetzPencil, NumericalDegeneracy, SingularCurve

from conftest import curve, curve_path

X, Y = pencil.X, pencil.Y


def spec_of(expr, degree):
    poly = sp.Poly(sp.expand(expr), X, Y)
    return {"degree": degree, "monomials": [[int(i), int(j), str(c)] for (i, j), c in poly.terms()]}


def test_conic_is_valid_rational_curve():
    c = curve("conic")
    assert c.degree == 2 and c.genus == 0 and c.shear == 0


def test_weierstrass_cubic_loads_after_shear():
    c = pencil.load_curve(curve_path("weierstrass"))
    assert c.genus == 1 and c.shear == 1 and c.y_degree == 3
    top = dict(c.coefficients)[(0, 3)]
    assert top != 0


def test_weierstrass_pencil_branches_at_infinity():
    # after the shear the line at infinity is still a flex tangent, so t = infinity is a branch value
    with pytest.raises(NonLefschetzPencil, match="infinity"):
        pencil.branch_points(pencil.load_curve(curve_path("weierstrass")))


def test_cuspidal_cubic_is_singular_at_origin():
    with pytest.raises(SingularCurve) as info:
        pencil.load_curve(curve_path("cuspidal"))
    assert tuple(info.value.witness) == (0, 0)


def test_singular_point_at_infinity_is_detected():
    # x*y^2 - 1 is smooth in the affine chart; its closure x*y^2 = z^3 is singular at [1:0:0]
    with pytest.raises(SingularCurve, match="infinity"):
        pencil.load_curve(spec_of(X * Y**2 - 1, 3))


@pytest.mark.parametrize("bad", [
    {"degree": 2, "monomials": []},
    {"degree": 3, "monomials": [[2, 0, "1"], [0, 2, "1"]]},
    {"degree": 2, "monomials": [[1, 1, "1"], [1, 1, "-1"]]},
    {"monomials": [[1, 1, "1"]]},
    {"degree": 2, "monomials": [[2, 0, "one"]]},
])
def test_degenerate_inputs(bad):
    with pytest.raises(DegenerateInput):
        pencil.load_curve(bad)


def test_decimal_coefficients_are_exact():
    assert pencil.parse_rational("0.1") == Fraction(1, 10)
    assert pencil.parse_rational(0.1) == Fraction(1, 10)
    assert pencil.parse_rational("3/7") == Fraction(3, 7)


@pytest.mark.parametrize("name,d,g", [("conic", 2, 0), ("cubic", 3, 1), ("quartic", 4, 3)])
def test_genus_formula(name, d, g):
    c = curve(name)
    assert pencil.genus(c) == g
    b = pencil.branch_points(c)
    assert pencil.genus(c) == b.e // 2 - d + 1


def test_conic_branch_points():
    b = pencil.branch_points(curve("conic"))
    assert b.e == 2
    assert sorted(round(p.real, 12) for p in b.points) == [-1.0, 1.0]
    assert max(abs(p.imag) for p in b.points) < 1e-15


@pytest.mark.parametrize("name,e", [("cubic", 6), ("quartic", 12)])
def test_branch_points_match_independent_solver(name, e):
    c = curve(name)
    b = pencil.branch_points(c)
    assert b.e == e
    # independent route: resultant of F and F_y, roots by numpy eigenvalues
    res = sp.Poly(sp.resultant(c.expr, sp.diff(c.expr, Y), Y), X)
    assert res.degree() == e
    ref = np.roots([float(q) for q in res.all_coeffs()])
    for p in b.points:
        assert np.min(np.abs(ref - p)) < 1e-8


def test_flex_with_vertical_tangent_is_not_lefschetz():
    # x = y^3 near the origin: the fiber t = 0 has a triple point
    c = pencil.load_curve(spec_of(Y**3 - X + X**3, 3))
    with pytest.raises(NonLefschetzPencil, match="multiple root"):
        pencil.branch_points(c)


def test_close_branch_points_raise_numerical_degeneracy():
    c = pencil.load_curve(spec_of(Y**2 - X**2 + sp.Rational(1, 10**14) * X, 2))
    with pytest.raises(NumericalDegeneracy):
        pencil.branch_points(c)


@pytest.mark.parametrize("name", ["conic", "cubic", "quartic", "weierstrass"])
def test_load_is_idempotent(name):
    c = pencil.load_curve(curve_path(name))
    again = pencil.load_curve(json.dumps(c.to_spec()))
    assert again == c and again.hash == c.hash


@pytest.mark.parametrize("name", ["conic", "cubic", "quartic"])
def test_basepoint_is_outside_safety_discs(name):
    b = pencil.branch_points(curve(name))
    for k, p in enumerate(b.points):
        assert abs(b.basepoint - p) >= b.safety(k)
        assert b.radii[k] > 0


@pytest.mark.parametrize("name", ["cubic", "quartic"])
def test_loop_order_is_sorted_by_angle(name):
    b = pencil.branch_points(curve(name))
    keys = [pencil.loop_order_key(p, b.basepoint) for p in b.points]
    assert keys == sorted(keys)


@given(st.integers(min_value=-3, max_value=3).filter(bool), st.integers(min_value=-3, max_value=3).filter(bool))
def test_generic_conics_have_two_branch_points(a, b):
    c = pencil.load_curve(spec_of(a * X**2 + b * Y**2 - 1, 2))
    assert pencil.branch_points(c).e == 2 == 2 * (c.degree + c.genus - 1)
