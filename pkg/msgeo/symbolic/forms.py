"""
Differential forms with expression coefficients on a named coordinate space.

A ``CoordForm`` maps strictly increasing tuples of 0-based coordinate positions
to canonical sympy expressions.
"""
import logging
from types import MappingProxyType

import sympy

from ..algebra.exterior_algebra import Form, sort_with_sign
from ..errors import DimensionMismatchError, DegreeError, NonPolynomialError
from .expr import as_symbol, evaluate_exact, simplify, substitute, to_text

logger = logging.getLogger(__name__)


class CoordSpace:
    """Ordered, distinct coordinate symbols"""

    __slots__ = ("_coords", "_position")

    def __init__(self, coordinates):
        coords = tuple(as_symbol(c) for c in coordinates)
        if len(set(coords)) != len(coords):
            raise ValueError("coordinate names must be distinct")
        self._coords = coords
        self._position = {c: i for i, c in enumerate(coords)}

    @property
    def coordinates(self):
        return self._coords

    @property
    def dim(self):
        return len(self._coords)

    def names(self):
        return [c.name for c in self._coords]

    def index(self, coordinate):
        symbol = as_symbol(coordinate)
        try:
            return self._position[symbol]
        except KeyError:
            raise DimensionMismatchError(f"'{symbol}' is not a coordinate of this space") from None

    def __contains__(self, coordinate):
        return as_symbol(coordinate) in self._position

    def __eq__(self, other):
        return isinstance(other, CoordSpace) and self._coords == other.coordinates

    def __hash__(self):
        return hash(self._coords)

    def __repr__(self):
        return f"CoordSpace({', '.join(self.names())})"


class CoordForm:
    """Differential form sum_I c_I dx^I with expression coefficients"""

    __slots__ = ("_space", "_degree", "_terms")

    def __init__(self, space, degree, terms=None):
        self._space = space
        self._degree = degree
        normalized = {}
        for key, value in (terms or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise DimensionMismatchError(f"key {key} does not match degree {degree}")
            if any(not 0 <= i < space.dim for i in key):
                raise DimensionMismatchError(f"key {key} outside the coordinate space")
            sign, ordered = sort_with_sign(key)
            if sign == 0:
                continue
            normalized[ordered] = normalized.get(ordered, sympy.Integer(0)) + sign * sympy.sympify(value)
        cleaned = {}
        for key in sorted(normalized):
            value = simplify(normalized[key])
            if value != 0:
                cleaned[key] = value
        self._terms = MappingProxyType(cleaned)

    @classmethod
    def zero(cls, space, degree):
        return cls(space, degree)

    @classmethod
    def constant(cls, space, value):
        return cls(space, 0, {(): value})

    @classmethod
    def coordinate_differential(cls, space, *coordinates):
        """d c1 ^ d c2 ^ ..."""
        return cls(space, len(coordinates), {tuple(space.index(c) for c in coordinates): 1})

    @classmethod
    def from_constant_form(cls, space, form):
        """Lift an exterior-algebra Form on Q^dim to constant coefficients."""
        if form.dim != space.dim:
            raise DimensionMismatchError(f"form on Q^{form.dim} lifted to a {space.dim}-coordinate space")
        return cls(space, form.degree, {tuple(i - 1 for i in key): value for key, value in form.coeffs.items()})

    @property
    def space(self):
        return self._space

    @property
    def degree(self):
        return self._degree

    @property
    def terms(self):
        return self._terms

    def coefficient(self, *coordinates):
        key = tuple(self._space.index(c) for c in coordinates)
        sign, ordered = sort_with_sign(key)
        if sign == 0:
            return sympy.Integer(0)
        return sign * self._terms.get(ordered, sympy.Integer(0))

    def is_zero(self):
        return not self._terms

    def _check(self, other):
        if not isinstance(other, CoordForm):
            raise TypeError(f"expected CoordForm, got {type(other).__name__}")
        if other.space != self._space:
            raise DimensionMismatchError("forms live on different coordinate spaces")

    def __add__(self, other):
        self._check(other)
        if other.degree != self._degree:
            raise DimensionMismatchError(f"adding forms of degree {self._degree} and {other.degree}")
        merged = dict(self._terms)
        for key, value in other.terms.items():
            merged[key] = merged.get(key, sympy.Integer(0)) + value
        return CoordForm(self._space, self._degree, merged)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CoordForm(self._space, self._degree, {k: -v for k, v in self._terms.items()})

    def __mul__(self, factor):
        factor = sympy.sympify(factor)
        return CoordForm(self._space, self._degree, {k: factor * v for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge_c(self, other)

    def __eq__(self, other):
        return (isinstance(other, CoordForm) and self._space == other.space
                and self._degree == other.degree and dict(self._terms) == dict(other.terms))

    def __hash__(self):
        return hash((self._space, self._degree, frozenset(self._terms.items())))

    def substitute(self, bindings):
        return CoordForm(self._space, self._degree,
                         {k: substitute(v, bindings) for k, v in self._terms.items()})

    def at_point(self, assignment):
        """Freeze coefficients at a point; an exterior Form on Q^dim with exact coefficients."""
        return Form(self._space.dim, self._degree, {
            tuple(i + 1 for i in key): evaluate_exact(value, assignment) for key, value in self._terms.items()
        })

    def to_text(self):
        """``coeff * d<v1>^d<v2> + ...``"""
        if not self._terms:
            return "0"
        names = self._space.names()
        parts = []
        for key, value in self._terms.items():
            basis = "^".join(f"d{names[i]}" for i in key)
            if not basis:
                parts.append(f"({to_text(value)})")
            else:
                parts.append(f"({to_text(value)}) * {basis}")
        return " + ".join(parts)

    def to_json(self):
        names = self._space.names()
        return {
            "coordinates": names,
            "degree": self._degree,
            "terms": [{"d": [names[i] for i in key], "coeff": to_text(value)} for key, value in self._terms.items()],
        }

    def __repr__(self):
        return f"CoordForm(degree={self._degree}, {self.to_text()})"


def d(w):
    """Exterior derivative."""
    space = w.space
    result = {}
    for key, value in w.terms.items():
        for j, coordinate in enumerate(space.coordinates):
            if j in key:
                continue
            partial = sympy.diff(value, coordinate)
            if partial == 0:
                continue
            sign, ordered = sort_with_sign((j,) + key)
            result[ordered] = result.get(ordered, sympy.Integer(0)) + sign * partial
    return CoordForm(space, w.degree + 1, result)


def wedge_c(a, b):
    """Exterior product of forms on the same coordinate space."""
    a._check(b)
    result = {}
    for ka, va in a.terms.items():
        for kb, vb in b.terms.items():
            sign, key = sort_with_sign(ka + kb)
            if sign == 0:
                continue
            result[key] = result.get(key, sympy.Integer(0)) + sign * va * vb
    return CoordForm(a.space, a.degree + b.degree, result)


def interior_c(direction, w):
    """Interior product with the coordinate field d/d(direction)."""
    return interior_field({direction: 1}, w)


def interior_field(field, w):
    """
    Interior product with a vector field.

    Args:
        field: mapping coordinate -> component expression
        w: CoordForm of degree >= 1
    """
    if w.degree == 0:
        raise DegreeError("interior product of a 0-form")
    components = {w.space.index(c): sympy.sympify(v) for c, v in field.items()}
    result = {}
    for key, value in w.terms.items():
        for position, index in enumerate(key):
            component = components.get(index)
            if component is None or component == 0:
                continue
            rest = key[:position] + key[position + 1:]
            sign = -1 if position % 2 else 1
            result[rest] = result.get(rest, sympy.Integer(0)) + sign * component * value
    return CoordForm(w.space, w.degree - 1, result)


def connection_contraction(lifts, w, base):
    """
    i_h w = sum_mu dx^mu ^ i_{h(d/dx^mu)} w.

    Args:
        lifts: list of n vector fields, the horizontal lifts of the base directions
        w: CoordForm
        base: the n base coordinates x^mu
    """
    if len(lifts) != len(base):
        raise DimensionMismatchError(f"{len(lifts)} horizontal lifts for {len(base)} base coordinates")
    total = CoordForm.zero(w.space, w.degree)
    for x, lift in zip(base, lifts):
        total = total + wedge_c(CoordForm.coordinate_differential(w.space, x), interior_field(lift, w))
    return total


def volume_form(space, xs):
    """d^n x."""
    return CoordForm.coordinate_differential(space, *xs)


def hodge_volume_face(space, xs, mu):
    """d^{n-1}x_mu = i_{d/dx^mu} d^n x (mu is 1-based)."""
    return interior_c(xs[mu - 1], volume_form(space, xs))


def _polynomial(value, coordinates, key):
    try:
        return sympy.Poly(value, *coordinates)
    except sympy.PolynomialError as e:
        raise NonPolynomialError(f"coefficient {value} of d{key} is not polynomial in the coordinates") from e


def homotopy_operator(w):
    """
    Homotopy operator of the Poincare lemma on a star-shaped domain around the origin.

    For a monomial c x^a of total degree m in a k-form term dx^I the result is
    sum over positions j of (-1)^j x^{I_j} c x^a / (k + m) dx^{I without I_j}.
    The identity I(dw) + d(Iw) = w - w(0) holds, with w(0) the constant part of a 0-form.
    A 0-form has no (-1)-form image; it maps to the zero 0-form.

    Raises:
        NonPolynomialError: a coefficient is not polynomial in the coordinates
    """
    k = w.degree
    space = w.space
    coordinates = space.coordinates
    if k == 0:
        for key, value in w.terms.items():
            _polynomial(value, coordinates, key)
        return CoordForm.zero(space, 0)
    result = {}
    for key, value in w.terms.items():
        poly = _polynomial(value, coordinates, key)
        for exponents, coefficient in poly.terms():
            monomial = coefficient
            for c, e in zip(coordinates, exponents):
                monomial = monomial * c ** e
            weight = sympy.Rational(1, k + sum(exponents))
            for position, index in enumerate(key):
                rest = key[:position] + key[position + 1:]
                sign = -1 if position % 2 else 1
                result[rest] = result.get(rest, sympy.Integer(0)) + sign * weight * coordinates[index] * monomial
    return CoordForm(space, k - 1, result)


def constant_part(w):
    """Value at the origin of a 0-form, as a 0-form; zero for higher degrees."""
    if w.degree != 0:
        return CoordForm.zero(w.space, w.degree)
    value = w.terms.get((), sympy.Integer(0))
    origin = {c: 0 for c in w.space.coordinates}
    return CoordForm.constant(w.space, value.xreplace(origin))


def homotopy_defect(w):
    """
    I(dw) + d(Iw) - (w - w(0)); the zero form when the homotopy identity holds.

    For 0-forms the d(Iw) term is absent.
    """
    lhs = homotopy_operator(d(w))
    if w.degree > 0:
        lhs = lhs + d(homotopy_operator(w))
    return lhs - (w - constant_part(w))
