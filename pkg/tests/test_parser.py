import pytest
import sympy

from msgeo.errors import ExpressionSyntaxError, UnknownIdentifierError
from msgeo.symbolic.expr import JetSpace
from msgeo.symbolic.parser import parse, tokenize

y1, x1, x2, z11 = sympy.symbols("y1 x1 x2 z1_1")


def test_tokenize_momentum_names():
    """Test p1^2 and p1^2_1 are single identifiers, not powers."""
    kinds = [(t.kind, t.text) for t in tokenize("p1^2_1*p1^2^3")]
    assert kinds == [("ident", "p1^2_1"), ("op", "*"), ("ident", "p1^2"), ("op", "^"), ("int", "3"), ("end", "")]


def test_parse_examples():
    assert parse("1/2*z1_1^2") == sympy.Rational(1, 2) * z11 ** 2
    assert parse("sin(y1)*x2") == sympy.sin(y1) * x2
    assert parse("z1_12", JetSpace(2, 1)) == sympy.Symbol("z1_12")


def test_precedence_and_associativity():
    assert parse("-y1^2") == -y1 ** 2
    assert parse("8/2/2") == 2
    assert parse("2-1-1") == 0
    assert parse("2*(y1+1)") == 2 * y1 + 2
    assert parse("2^-1") == sympy.Rational(1, 2)
    assert parse("y1^(-2)") == y1 ** -2


def test_parameters_need_a_jet_space():
    jet = JetSpace(1, 1, ("m0",))
    assert parse("m0*y1", jet) == sympy.Symbol("m0") * y1
    with pytest.raises(UnknownIdentifierError):
        parse("m0*y1")


def test_index_ranges_are_checked():
    with pytest.raises(UnknownIdentifierError) as excinfo:
        parse("z1_12", JetSpace(1, 1))
    assert excinfo.value.name == "z1_12"
    with pytest.raises(UnknownIdentifierError):
        parse("y2", JetSpace(1, 1))


def test_unknown_identifier_position():
    with pytest.raises(UnknownIdentifierError) as excinfo:
        parse("y1 + q1")
    assert excinfo.value.position == 5


def test_unknown_function():
    with pytest.raises(UnknownIdentifierError):
        parse("foo(y1)")


@pytest.mark.parametrize("text, position", [
    ("y1 +", 4),
    ("y1 $ 2", 3),
    ("1/0", 1),
    ("", 0),
    ("(y1", 3),
    ("y1^x1", 3),
    ("sin", 0),
    ("y1 y1", 3),
])
def test_syntax_errors_carry_positions(text, position):
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse(text)
    assert excinfo.value.position == position


def test_parse_requires_jet_space_type():
    with pytest.raises(TypeError):
        parse("y1", jet=(1, 1))
