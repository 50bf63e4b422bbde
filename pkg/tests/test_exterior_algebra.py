import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Rational

from msgeo.algebra.exterior_algebra import (
    Form, LinearMap, Vector, contraction_matrix, evaluate, interior, interior_iterated,
    pullback, sort_with_sign, to_scalar, wedge,
)
from msgeo.errors import DegreeError, DimensionMismatchError, SingularMapError
from msgeo.utils.sampling import make_rng

from .oracles import evaluate_by_determinants, increasing_tuples, unimodular_map
from .strategies import forms, vectors


def test_to_scalar_accepts_rational_text():
    """Test "p/q" strings, ints and sympy rationals become exact rationals."""
    assert to_scalar("3/6") == Rational(1, 2)
    assert to_scalar(-4) == Rational(-4)
    assert to_scalar(Rational(2, 3)) == Rational(2, 3)


def test_to_scalar_rejects_decimals_and_booleans():
    """Test floats written as text and booleans are not scalars."""
    with pytest.raises(ValueError):
        to_scalar("0.5")
    with pytest.raises(TypeError):
        to_scalar(True)


def test_sort_with_sign():
    """Test the permutation sign of an index tuple."""
    assert sort_with_sign((2, 1)) == (-1, (1, 2))
    assert sort_with_sign((3, 1, 2)) == (1, (1, 2, 3))
    assert sort_with_sign((1, 2, 1))[0] == 0


def test_form_normalizes_keys():
    """Test unsorted keys are reordered with the permutation sign and zeros dropped."""
    w = Form(3, 2, {(2, 1): 1, (1, 3): 0, (3, 3): 5})
    assert dict(w.coeffs) == {(1, 2): Rational(-1)}
    assert w.coefficient((2, 1)) == 1


def test_form_rejects_keys_outside_space():
    with pytest.raises(DimensionMismatchError):
        Form(2, 1, {(3,): 1})
    with pytest.raises(DimensionMismatchError):
        Form(3, 2, {(1,): 1})


def test_form_to_text():
    w = Form(3, 2, {(1, 3): 2, (2, 3): -1})
    assert w.to_text() == "2*dx1^dx3 - dx2^dx3"
    assert Form.zero(3, 2).to_text() == "0"


def test_wedge_of_basis_forms():
    """Test dx1 ^ dx2 and dx2 ^ dx1 differ by sign."""
    dx1, dx2 = Form.basis(3, 1), Form.basis(3, 2)
    assert wedge(dx1, dx2) == Form.basis(3, 1, 2)
    assert wedge(dx2, dx1) == -Form.basis(3, 1, 2)
    assert wedge(dx1, dx1).is_zero()


def test_wedge_above_dimension_is_zero():
    w = Form.volume(2)
    assert wedge(w, Form.basis(2, 1)) == Form.zero(2, 3)


def test_wedge_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        wedge(Form.basis(2, 1), Form.basis(3, 1))


def test_interior_of_area_form():
    """Test i_e1 (dx1^dx2) = dx2 and i_e2 (dx1^dx2) = -dx1."""
    area = Form.basis(2, 1, 2)
    assert interior(Vector.basis(2, 1), area) == Form.basis(2, 2)
    assert interior(Vector.basis(2, 2), area) == -Form.basis(2, 1)


def test_interior_of_scalar_raises():
    with pytest.raises(DegreeError):
        interior(Vector.basis(2, 1), Form.constant(2, 3))


def test_evaluate_is_alternating():
    area = Form.basis(2, 1, 2)
    e1, e2 = Vector.basis(2, 1), Vector.basis(2, 2)
    assert evaluate(area, [e1, e2]) == 1
    assert evaluate(area, [e2, e1]) == -1
    with pytest.raises(DimensionMismatchError):
        evaluate(area, [e1])


def test_interior_iterated_too_many_vectors():
    with pytest.raises(DegreeError):
        interior_iterated([Vector.basis(2, 1)] * 3, Form.basis(2, 1, 2))


def test_pullback_by_swap_changes_sign():
    swap = LinearMap([[0, 1], [1, 0]])
    assert pullback(swap, Form.basis(2, 1, 2)) == -Form.basis(2, 1, 2)
    assert pullback(swap, Form.basis(2, 1)) == Form.basis(2, 2)


def test_pullback_to_lower_dimension():
    """Test the pullback along an inclusion Q^1 -> Q^2."""
    inclusion = LinearMap([[1], [2]])
    assert pullback(inclusion, Form.basis(2, 1) + Form.basis(2, 2)) == Form(1, 1, {(1,): 3})
    assert pullback(inclusion, Form.basis(2, 1, 2)).is_zero()


def test_contraction_matrix_of_area_form():
    matrix = contraction_matrix(Form.basis(2, 1, 2))
    assert matrix.tolist() == [[0, -1], [1, 0]]


def test_linear_map_inverse():
    A = LinearMap([[2, 1], [1, 1]])
    assert (A @ A.inverse()) == LinearMap.identity(2)
    with pytest.raises(SingularMapError):
        LinearMap([[1, 2], [2, 4]]).inverse()


def test_linear_map_apply_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        LinearMap.identity(2).apply(Vector.of(1, 2, 3))


@settings(max_examples=25, deadline=None)
@given(forms(4, 1), forms(4, 2))
def test_wedge_graded_commutative(a, b):
    """Test a ^ b = (-1)^(pq) b ^ a."""
    assert wedge(a, b) == (-1) ** (a.degree * b.degree) * wedge(b, a)


@settings(max_examples=25, deadline=None)
@given(forms(4, 1), forms(4, 1), forms(4, 2))
def test_wedge_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@settings(max_examples=25, deadline=None)
@given(vectors(4), forms(4, 2), forms(4, 1))
def test_interior_is_antiderivation(v, a, b):
    """Test i_v(a ^ b) = i_v a ^ b + (-1)^p a ^ i_v b."""
    lhs = interior(v, wedge(a, b))
    rhs = wedge(interior(v, a), b) + (-1) ** a.degree * wedge(a, interior(v, b))
    assert lhs == rhs


@settings(max_examples=25, deadline=None)
@given(vectors(3), vectors(3), forms(3, 2))
def test_double_interior_alternates(u, v, w):
    assert interior(u, interior(v, w)) == -interior(v, interior(u, w))


def test_coordinate_wedge_face_gives_volume():
    """Test dx2 ^ i_e2(dx1^dx2^dx3) = dx1^dx2^dx3."""
    face = interior(Vector.basis(3, 2), Form.volume(3))
    assert face == -Form.basis(3, 1, 3)
    assert wedge(Form.basis(3, 2), face) == Form.volume(3)


def test_interior_is_linear_in_the_vector():
    assert interior(Vector.of(1, 1), Form.basis(2, 1, 2)) == Form.basis(2, 2) - Form.basis(2, 1)
    assert interior(Vector.basis(1, 1), Form.basis(1, 1)) == Form.constant(1, 1)


def test_evaluate_matches_determinant():
    w = Form.basis(3, 1, 3)
    assert evaluate(w, [Vector.of(1, 0, 1), Vector.of(0, 0, 1)]) == 1
    assert evaluate_by_determinants(w, [Vector.of(1, 0, 1), Vector.of(0, 0, 1)]) == 1


def test_pullback_by_scaling_is_homogeneous():
    doubled = LinearMap([[2, 0], [0, 2]])
    assert pullback(doubled, Form.basis(2, 1, 2)) == 4 * Form.basis(2, 1, 2)
    assert pullback(LinearMap.identity(3), Form.basis(3, 2, 3)) == Form.basis(3, 2, 3)


@settings(max_examples=15, deadline=None)
@given(forms(3, 2), vectors(3), vectors(3), st.integers(min_value=0, max_value=50))
def test_pullback_agrees_with_evaluation(w, u, v, seed):
    """Test (A* w)(u, v) = w(Au, Av) against a determinant oracle."""
    A = unimodular_map(make_rng(seed), 3)
    assert evaluate(pullback(A, w), [u, v]) == evaluate_by_determinants(w, [A.apply(u), A.apply(v)])


@settings(max_examples=15, deadline=None)
@given(forms(3, 1), forms(3, 1), st.integers(min_value=0, max_value=50), st.integers(min_value=0, max_value=50))
def test_pullback_is_functorial_and_multiplicative(a, b, s1, s2):
    A, B = unimodular_map(make_rng(s1), 3), unimodular_map(make_rng(s2), 3)
    assert pullback(A @ B, a) == pullback(B, pullback(A, a))
    assert pullback(A, wedge(a, b)) == wedge(pullback(A, a), pullback(A, b))


@settings(max_examples=15, deadline=None)
@given(forms(4, 2))
def test_evaluate_on_basis_reproduces_coefficients(w):
    for key in increasing_tuples(4, 2):
        assert evaluate(w, [Vector.basis(4, i) for i in key]) == w.coefficient(key)
