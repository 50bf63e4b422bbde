import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from msgeo.errors import EvaluationDomainError, MissingAssignmentError
from msgeo.symbolic.expr import (
    JetSpace, VarName, differentiate, equivalent, evaluate_exact, evaluate_numeric, expr_to_ast,
    simplify, substitute, to_text,
)
from msgeo.symbolic.parser import parse
from msgeo.utils.sampling import make_rng, rational_values, uniform_values

from .oracles import central_difference
from .strategies import SYMBOL_NAMES, expressions, polynomials

y1, x1, z11 = sympy.symbols("y1 x1 z1_1")


def test_varname_printing():
    assert VarName("z", (1, 2)).name == "z1_2"
    assert VarName("z2", (1, 2, 1)).name == "z1_12"
    assert VarName("p", (2, 1)).name == "p2^1"
    assert VarName("pjet", (1, 2, 1)).name == "p1^2_1"
    assert VarName("p0").name == "p"


def test_varname_parse():
    assert VarName.parse("p1^2_1") == VarName("pjet", (1, 2, 1))
    assert VarName.parse("y3_1") == VarName("yjet", (3, 1))
    assert VarName.parse("w1") is None
    assert VarName.parse("x0") is None


def test_jet_space_coordinates():
    jet = JetSpace(2, 1)
    assert [s.name for s in jet.z2s()] == ["z1_11", "z1_12", "z1_22"]
    assert [s.name for s in jet.z_star()] == ["x1", "x2", "y1", "p1^1", "p1^2"]
    assert jet.z2(1, 2, 1) == jet.z2(1, 1, 2)


def test_jet_space_rejects_colliding_parameters():
    with pytest.raises(ValueError):
        JetSpace(1, 1, ("y1",))
    with pytest.raises(ValueError):
        JetSpace(1, 1, ("sin",))
    with pytest.raises(ValueError):
        JetSpace(0, 1)


def test_differentiate_examples():
    assert differentiate(parse("1/2*z1_1^2"), "z1_1") == z11
    assert differentiate(parse("z1_1*y1"), VarName("y", (1,))) == z11


def test_differentiate_exponential_against_finite_differences():
    e = parse("exp(y1*x1)")
    derivative = differentiate(e, "y1")
    assert derivative == x1 * sympy.exp(x1 * y1)
    rng = make_rng(5)
    for _ in range(5):
        point = uniform_values(rng, ["x1", "y1"])
        exact = evaluate_numeric(derivative, point)
        assert abs(central_difference(e, "y1", point) - exact) <= 1e-7 * abs(exact) + 1e-12


def test_simplify_examples():
    assert simplify(y1 + y1) == 2 * y1
    assert simplify(parse("(y1+1)^2 - y1^2 - 2*y1 - 1")) == 0


def test_simplify_leaves_trigonometric_identities():
    e = parse("sin(y1)^2 + cos(y1)^2")
    assert simplify(e) != 1
    assert equivalent(e, 1)


def test_equivalent():
    assert equivalent(parse("sin(2*y1)"), parse("2*sin(y1)*cos(y1)"))
    assert not equivalent(y1, y1 + 1)
    assert not equivalent(parse("sin(y1)"), parse("cos(y1)"))


def test_evaluate_numeric_examples():
    assert evaluate_numeric(y1 ** 2, {"y1": 3}) == 9.0
    assert evaluate_numeric(sympy.Rational(1, 2), {}) == 0.5
    assert evaluate_numeric(parse("exp(x1)"), {x1: 1.0}) == pytest.approx(math.e)


def test_evaluate_numeric_errors():
    with pytest.raises(MissingAssignmentError) as excinfo:
        evaluate_numeric(x1 + y1, {"x1": 1})
    assert excinfo.value.names == ["y1"]
    with pytest.raises(EvaluationDomainError):
        evaluate_numeric(parse("log(y1)"), {"y1": -1.0})


def test_evaluate_exact():
    assert evaluate_exact(parse("y1^2 + 1/2"), {"y1": "1/3"}) == sympy.Rational(11, 18)
    assert evaluate_exact(parse("exp(y1)"), {"y1": 0}) == 1
    with pytest.raises(EvaluationDomainError):
        evaluate_exact(parse("exp(y1)"), {"y1": 1})
    with pytest.raises(EvaluationDomainError):
        evaluate_exact(parse("1/y1"), {"y1": 0})


def test_substitute():
    p11 = sympy.Symbol("p1^1")
    assert substitute(z11 ** 2, {"z1_1": p11}) == p11 ** 2
    assert substitute(y1, {}) == y1
    assert substitute(x1 * y1, {"x1": y1, "y1": x1}) == x1 * y1


def test_expr_to_ast():
    assert expr_to_ast(parse("x1 + 2")) == {"op": "add", "args": [{"var": "x1"}, {"num": "2"}]}
    assert expr_to_ast(sympy.Rational(-3, 4)) == {"num": "-3/4"}
    assert expr_to_ast(sympy.E) == {"op": "exp", "args": [{"num": "1"}]}
    assert expr_to_ast(parse("sin(y1)")) == {"op": "sin", "args": [{"var": "y1"}]}


@settings(max_examples=40, deadline=None)
@given(expressions)
def test_simplify_is_idempotent(e):
    once = simplify(e)
    assert simplify(once) == once


@settings(max_examples=40, deadline=None)
@given(expressions)
def test_print_then_parse_is_identity(e):
    canonical = simplify(e)
    assert simplify(parse(to_text(canonical))) == canonical


@settings(max_examples=30, deadline=None)
@given(expressions, st.sampled_from(SYMBOL_NAMES), st.sampled_from(SYMBOL_NAMES))
def test_mixed_partials_commute(e, u, v):
    assert differentiate(differentiate(e, u), v) == differentiate(differentiate(e, v), u)


@settings(max_examples=20, deadline=None)
@given(polynomials, polynomials, st.integers(min_value=0, max_value=1000))
def test_leibniz_rule_against_finite_differences(a, b, seed):
    """Test d(ab)/dy1 numerically at 5 points."""
    derivative = differentiate(a * b, "y1")
    assert derivative == simplify(differentiate(a, "y1") * b + a * differentiate(b, "y1"))
    rng = make_rng(seed)
    for _ in range(5):
        point = uniform_values(rng, SYMBOL_NAMES)
        exact = evaluate_numeric(derivative, point)
        assert abs(central_difference(a * b, "y1", point) - exact) <= 1e-6 * (1 + abs(exact))


@settings(max_examples=30, deadline=None)
@given(polynomials, st.integers(min_value=0, max_value=1000))
def test_numeric_and_exact_evaluation_agree(e, seed):
    point = rational_values(make_rng(seed), SYMBOL_NAMES)
    exact = evaluate_exact(e, point)
    assert abs(evaluate_numeric(e, point) - float(exact)) <= 1e-12 * (1 + abs(float(exact)))
