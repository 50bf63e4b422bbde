"""
Hypothesis strategies for exact algebra objects and expressions.
"""
from itertools import combinations

from hypothesis import strategies as st
import sympy
from sympy import Rational

from msgeo.algebra.exterior_algebra import Form, Vector
from msgeo.symbolic.forms import CoordForm

rationals = st.builds(Rational, st.integers(min_value=-4, max_value=4), st.integers(min_value=1, max_value=3))


def vectors(dim):
    return st.lists(rationals, min_size=dim, max_size=dim).map(Vector)


def forms(dim, degree, max_terms=4):
    keys = list(combinations(range(1, dim + 1), degree))
    if not keys:
        return st.just(Form.zero(dim, degree))
    return st.dictionaries(st.sampled_from(keys), rationals, max_size=max_terms).map(
        lambda coeffs: Form(dim, degree, coeffs))


SYMBOL_NAMES = ("x1", "y1", "z1_1")

_leaves = st.one_of(
    st.sampled_from([sympy.Symbol(name) for name in SYMBOL_NAMES]),
    st.integers(min_value=-3, max_value=3).map(sympy.Integer),
)


def _combine(children, max_power=3):
    return st.one_of(
        st.tuples(children, children).map(lambda ab: ab[0] + ab[1]),
        st.tuples(children, children).map(lambda ab: ab[0] * ab[1]),
        st.tuples(children, st.integers(min_value=0, max_value=max_power)).map(lambda ae: ae[0] ** ae[1]),
    )


polynomials = st.recursive(_leaves, lambda children: _combine(children, max_power=2), max_leaves=4)


def _with_functions(children):
    return st.one_of(
        _combine(children),
        children.map(sympy.sin),
        children.map(sympy.cos),
    )


expressions = st.recursive(_leaves, _with_functions, max_leaves=5)


def coordinate_forms(space, max_degree=3, max_coefficient_degree=3):
    """Forms on a CoordSpace with polynomial coefficients."""
    monomial = st.tuples(
        st.integers(min_value=-3, max_value=3),
        st.lists(st.sampled_from(space.coordinates), max_size=max_coefficient_degree),
    ).map(lambda cv: cv[0] * sympy.Mul(*cv[1]))
    coefficient = st.lists(monomial, min_size=1, max_size=3).map(lambda ms: sympy.Add(*ms))

    def of_degree(degree):
        keys = list(combinations(range(space.dim), degree))
        return st.dictionaries(st.sampled_from(keys), coefficient, max_size=4).map(
            lambda terms: CoordForm(space, degree, terms))

    return st.integers(min_value=0, max_value=min(max_degree, space.dim)).flatmap(of_degree)
