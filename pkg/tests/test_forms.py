import pytest
import sympy
from hypothesis import given, settings

from msgeo.algebra.exterior_algebra import Form
from msgeo.errors import DegreeError, DimensionMismatchError, NonPolynomialError
from msgeo.symbolic.forms import (
    CoordForm, CoordSpace, connection_contraction, constant_part, d, homotopy_defect,
    homotopy_operator, hodge_volume_face, interior_c, interior_field, volume_form, wedge_c,
)
from msgeo.symbolic.parser import parse

from .strategies import coordinate_forms

PLANE = CoordSpace(["x1", "x2"])
FOUR = CoordSpace(["x1", "x2", "x3", "x4"])
x1, x2 = sympy.symbols("x1 x2")


def dx(space, *names):
    return CoordForm.coordinate_differential(space, *names)


def test_coord_space_rejects_repeats():
    with pytest.raises(ValueError):
        CoordSpace(["x1", "x1"])
    with pytest.raises(DimensionMismatchError):
        PLANE.index("y1")


def test_form_normalizes_order_and_drops_zeros():
    w = CoordForm(PLANE, 2, {(1, 0): x1, (0, 1): x1})
    assert w.is_zero()
    assert dx(PLANE, "x2", "x1") == -dx(PLANE, "x1", "x2")


def test_exterior_derivative_of_function():
    f = CoordForm.constant(PLANE, x1 * x2)
    assert d(f) == x2 * dx(PLANE, "x1") + x1 * dx(PLANE, "x2")


def test_exterior_derivative_of_one_form():
    w = x1 * x2 * dx(PLANE, "x2")
    assert d(w) == x2 * dx(PLANE, "x1", "x2")


def test_wedge_and_interior():
    area = wedge_c(dx(PLANE, "x1"), dx(PLANE, "x2"))
    assert area == volume_form(PLANE, ["x1", "x2"])
    assert interior_c("x1", area) == dx(PLANE, "x2")
    assert interior_field({"x1": x2, "x2": 1}, area) == x2 * dx(PLANE, "x2") - dx(PLANE, "x1")
    with pytest.raises(DegreeError):
        interior_c("x1", CoordForm.constant(PLANE, 1))


def test_volume_faces():
    """Test dx^mu ^ d^(n-1)x_mu = d^n x for each mu."""
    space = CoordSpace(["x1", "x2", "x3", "y1"])
    xs = ["x1", "x2", "x3"]
    for mu, name in enumerate(xs, start=1):
        assert wedge_c(dx(space, name), hodge_volume_face(space, xs, mu)) == volume_form(space, xs)
    assert hodge_volume_face(space, xs, 2) == -dx(space, "x1", "x3")


def test_connection_contraction_of_volume():
    """Test the contraction of d^n x with horizontal lifts is n d^n x."""
    space = CoordSpace(["x1", "x2", "y1"])
    lifts = [{"x1": 1, "y1": x2}, {"x2": 1, "y1": x1}]
    vol = volume_form(space, ["x1", "x2"])
    assert connection_contraction(lifts, vol, ["x1", "x2"]) == 2 * vol
    with pytest.raises(DimensionMismatchError):
        connection_contraction(lifts[:1], vol, ["x1", "x2"])


def test_mixed_spaces_rejected():
    with pytest.raises(DimensionMismatchError):
        dx(PLANE, "x1") + dx(FOUR, "x1")


def test_at_point_freezes_coefficients():
    w = CoordForm(PLANE, 2, {(0, 1): parse("x1^2 + 1/2")})
    assert w.at_point({"x1": 1, "x2": 0}) == Form(2, 2, {(1, 2): sympy.Rational(3, 2)})


def test_from_constant_form():
    assert CoordForm.from_constant_form(PLANE, Form.basis(2, 1, 2)) == dx(PLANE, "x1", "x2")
    with pytest.raises(DimensionMismatchError):
        CoordForm.from_constant_form(PLANE, Form.basis(3, 1))


def test_homotopy_of_one_form():
    """Test I(x1 dx2) = x1 x2 / 2 and the identity I d + d I = id."""
    w = x1 * dx(PLANE, "x2")
    assert homotopy_operator(w) == CoordForm.constant(PLANE, x1 * x2 / 2)
    assert homotopy_operator(d(w)) + d(homotopy_operator(w)) == w


def test_homotopy_of_function_subtracts_value_at_origin():
    f = CoordForm.constant(PLANE, x1 + 3)
    assert homotopy_operator(f).is_zero()
    assert homotopy_operator(d(f)) == f - constant_part(f)
    assert homotopy_defect(f).is_zero()


def test_homotopy_requires_polynomials():
    with pytest.raises(NonPolynomialError):
        homotopy_operator(CoordForm(PLANE, 1, {(1,): sympy.sin(x1)}))


def test_to_json_and_text():
    w = 2 * dx(PLANE, "x1", "x2")
    assert w.to_json() == {"coordinates": ["x1", "x2"], "degree": 2, "terms": [{"d": ["x1", "x2"], "coeff": "2"}]}
    assert w.to_text() == "(2) * dx1^dx2"
    assert CoordForm.zero(PLANE, 1).to_text() == "0"


@settings(max_examples=50, deadline=None)
@given(coordinate_forms(FOUR))
def test_homotopy_identity(w):
    """Test I d + d I = id - ev0 on polynomial forms."""
    assert homotopy_defect(w).is_zero()


@settings(max_examples=30, deadline=None)
@given(coordinate_forms(FOUR, max_degree=2))
def test_d_squared_is_zero(w):
    assert d(d(w)).is_zero()


@settings(max_examples=30, deadline=None)
@given(coordinate_forms(FOUR, max_degree=1), coordinate_forms(FOUR, max_degree=2))
def test_d_is_an_antiderivation(a, b):
    lhs = d(wedge_c(a, b))
    rhs = wedge_c(d(a), b) + (-1) ** a.degree * wedge_c(a, d(b))
    assert lhs == rhs
