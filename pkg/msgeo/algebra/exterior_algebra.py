"""
Exterior algebra over exact rationals.

Forms on Q^n are stored sparsely: a map from strictly increasing, 1-based index
tuples to nonzero ``sympy.Rational`` coefficients. Every value is immutable and
every operation is pure.
"""
import logging
from fractions import Fraction
from itertools import combinations
from types import MappingProxyType

import sympy
from sympy import ImmutableMatrix, Rational

from ..errors import DegreeError, DimensionMismatchError, SingularMapError

logger = logging.getLogger(__name__)


def to_scalar(value):
    """
    Convert a value to an exact rational scalar.

    Args:
        value: int, fractions.Fraction, sympy rational, or a "p/q" string

    Returns:
        sympy.Rational in lowest terms
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Rational):
        return value
    if isinstance(value, int):
        return Rational(value)
    if isinstance(value, Fraction):
        return Rational(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        try:
            scalar = sympy.Rational(text)
        except (TypeError, ValueError, sympy.SympifyError) as e:
            raise ValueError(f"not a rational scalar: {value!r}") from e
        if "." in text or "e" in text.lower():
            raise ValueError(f"not a rational scalar: {value!r} (write p/q)")
        return scalar
    if isinstance(value, sympy.Basic):
        simplified = sympy.nsimplify(value) if not value.is_Rational else value
        if simplified.is_Rational:
            return simplified
        raise ValueError(f"not a rational scalar: {value}")
    raise TypeError(f"cannot convert {type(value).__name__} to a rational scalar")


def sort_with_sign(indices):
    """Sort an index tuple, returning (sign, sorted tuple); sign 0 on repeats."""
    items = list(indices)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b:
            return 0, tuple(items)
    return sign, tuple(items)


class Vector:
    """Dense vector of exact rationals"""

    __slots__ = ("_components",)

    def __init__(self, components):
        self._components = tuple(to_scalar(c) for c in components)

    @classmethod
    def of(cls, *values):
        return cls(values)

    @classmethod
    def zero(cls, n):
        return cls([0] * n)

    @classmethod
    def basis(cls, n, i):
        """Standard basis vector e_i of Q^n (1-based)."""
        if not 1 <= i <= n:
            raise DimensionMismatchError(f"basis index {i} outside 1..{n}")
        return cls([1 if j == i else 0 for j in range(1, n + 1)])

    @property
    def components(self):
        return self._components

    @property
    def dim(self):
        return len(self._components)

    def __len__(self):
        return len(self._components)

    def __iter__(self):
        return iter(self._components)

    def __getitem__(self, index):
        return self._components[index]

    def _check(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatchError(f"vectors of dimension {self.dim} and {other.dim}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Vector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Vector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return Vector(-a for a in self)

    def __mul__(self, scalar):
        s = to_scalar(scalar)
        return Vector(s * a for a in self)

    __rmul__ = __mul__

    def is_zero(self):
        return all(c == 0 for c in self._components)

    def column(self):
        """The vector as an n x 1 sympy matrix."""
        return ImmutableMatrix(self.dim, 1, list(self._components))

    def __eq__(self, other):
        return isinstance(other, Vector) and self._components == other._components

    def __hash__(self):
        return hash(("Vector", self._components))

    def __repr__(self):
        return "Vector(" + ", ".join(str(c) for c in self._components) + ")"


class LinearMap:
    """
    Linear map Q^domain -> Q^codomain given by its matrix.

    Rows index the codomain and columns the domain.
    """

    __slots__ = ("_matrix",)

    def __init__(self, matrix):
        m = ImmutableMatrix(matrix)
        if any(not entry.is_Rational for entry in m):
            m = m.applyfunc(to_scalar)
        self._matrix = ImmutableMatrix(m)

    @classmethod
    def identity(cls, n):
        return cls(sympy.eye(n))

    @classmethod
    def zero(cls, codomain_dim, domain_dim):
        return cls(sympy.zeros(codomain_dim, domain_dim))

    @classmethod
    def from_rows(cls, rows):
        rows = [[to_scalar(c) for c in row] for row in rows]
        return cls(rows)

    @classmethod
    def from_columns(cls, columns):
        columns = [list(c) for c in columns]
        if not columns:
            raise DimensionMismatchError("a linear map needs at least one column")
        return cls(ImmutableMatrix.hstack(*[ImmutableMatrix(len(c), 1, [to_scalar(x) for x in c]) for c in columns]))

    @classmethod
    def block_diagonal(cls, *maps):
        return cls(sympy.diag(*[m.matrix for m in maps]))

    @property
    def matrix(self):
        return self._matrix

    @property
    def domain_dim(self):
        return self._matrix.cols

    @property
    def codomain_dim(self):
        return self._matrix.rows

    def apply(self, vector):
        if vector.dim != self.domain_dim:
            raise DimensionMismatchError(
                f"map with domain dimension {self.domain_dim} applied to a vector of dimension {vector.dim}")
        return Vector(list(self._matrix * vector.column()))

    __call__ = apply

    def compose(self, other):
        """self o other (other applied first)."""
        if other.codomain_dim != self.domain_dim:
            raise DimensionMismatchError(
                f"cannot compose {self.codomain_dim}x{self.domain_dim} after {other.codomain_dim}x{other.domain_dim}")
        return LinearMap(self._matrix * other.matrix)

    def __matmul__(self, other):
        return self.compose(other)

    def is_invertible(self):
        return self.domain_dim == self.codomain_dim and self._matrix.rank() == self.domain_dim

    def inverse(self):
        if not self.is_invertible():
            raise SingularMapError(f"{self.codomain_dim}x{self.domain_dim} map is not invertible")
        return LinearMap(self._matrix.inv())

    def columns(self):
        return [Vector(list(self._matrix.col(j))) for j in range(self.domain_dim)]

    def rows(self):
        return [Vector(list(self._matrix.row(i))) for i in range(self.codomain_dim)]

    def __eq__(self, other):
        return isinstance(other, LinearMap) and self._matrix == other.matrix

    def __hash__(self):
        return hash(("LinearMap", self._matrix))

    def __repr__(self):
        return f"LinearMap({self._matrix.tolist()})"


class Form:
    """
    Alternating k-form on Q^n with exact coefficients.

    Keys are strictly increasing 1-based index tuples of length ``degree``; zero
    coefficients are never stored.
    """

    __slots__ = ("_dim", "_degree", "_coeffs")

    def __init__(self, dim, degree, coeffs=None):
        if dim < 0 or degree < 0:
            raise DimensionMismatchError(f"invalid form shape: dim={dim}, degree={degree}")
        self._dim = dim
        self._degree = degree
        normalized = {}
        for key, value in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise DimensionMismatchError(f"key {key} does not match degree {degree}")
            if any(not 1 <= i <= dim for i in key):
                raise DimensionMismatchError(f"key {key} outside 1..{dim}")
            sign, ordered = sort_with_sign(key)
            if sign == 0:
                continue
            total = normalized.get(ordered, Rational(0)) + sign * to_scalar(value)
            normalized[ordered] = total
        self._coeffs = MappingProxyType({k: v for k, v in sorted(normalized.items()) if v != 0})

    @classmethod
    def from_terms(cls, dim, degree, mapping):
        """Build a form from possibly unsorted keys; order and sign are normalized."""
        return cls(dim, degree, mapping)

    @classmethod
    def zero(cls, dim, degree):
        return cls(dim, degree)

    @classmethod
    def constant(cls, dim, value):
        return cls(dim, 0, {(): value})

    @classmethod
    def basis(cls, dim, *indices):
        """dx^{i1} ^ ... ^ dx^{ik}."""
        return cls(dim, len(indices), {tuple(indices): 1})

    @classmethod
    def volume(cls, dim):
        return cls(dim, dim, {tuple(range(1, dim + 1)): 1})

    @property
    def dim(self):
        return self._dim

    @property
    def degree(self):
        return self._degree

    @property
    def coeffs(self):
        return self._coeffs

    def coefficient(self, indices):
        sign, key = sort_with_sign(tuple(indices))
        if sign == 0:
            return Rational(0)
        return sign * self._coeffs.get(key, Rational(0))

    def terms(self):
        return list(self._coeffs.items())

    def is_zero(self):
        return not self._coeffs

    def scalar_value(self):
        if self._degree != 0:
            raise DegreeError(f"scalar_value of a degree-{self._degree} form")
        return self._coeffs.get((), Rational(0))

    def _check_compatible(self, other):
        if not isinstance(other, Form):
            raise TypeError(f"expected Form, got {type(other).__name__}")
        if other.dim != self._dim or other.degree != self._degree:
            raise DimensionMismatchError(
                f"forms of shape ({self._dim}, {self._degree}) and ({other.dim}, {other.degree})")

    def __add__(self, other):
        self._check_compatible(other)
        merged = dict(self._coeffs)
        for key, value in other.coeffs.items():
            merged[key] = merged.get(key, Rational(0)) + value
        return Form(self._dim, self._degree, merged)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Form(self._dim, self._degree, {k: -v for k, v in self._coeffs.items()})

    def __mul__(self, scalar):
        s = to_scalar(scalar)
        return Form(self._dim, self._degree, {k: s * v for k, v in self._coeffs.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        return (isinstance(other, Form) and self._dim == other.dim
                and self._degree == other.degree and dict(self._coeffs) == dict(other.coeffs))

    def __hash__(self):
        return hash((self._dim, self._degree, frozenset(self._coeffs.items())))

    def to_text(self, names=None):
        """Readable text such as ``2*dx1^dx3 - dx2^dx3``."""
        if not self._coeffs:
            return "0"
        label = (lambda i: f"d{names[i - 1]}") if names else (lambda i: f"dx{i}")
        out = []
        for key, value in self._coeffs.items():
            basis = "^".join(label(i) for i in key)
            if not basis:
                term = str(value)
            elif value == 1:
                term = basis
            elif value == -1:
                term = f"-{basis}"
            else:
                term = f"{value}*{basis}"
            out.append(term)
        return " + ".join(out).replace("+ -", "- ")

    def __repr__(self):
        return f"Form(dim={self._dim}, degree={self._degree}, {self.to_text()})"


def _check_same_dim(dim_a, dim_b):
    if dim_a != dim_b:
        raise DimensionMismatchError(f"ambient dimensions {dim_a} and {dim_b} differ")


def wedge(a, b):
    """
    Exterior product a ^ b.

    Args:
        a: Form on Q^n
        b: Form on Q^n

    Returns:
        Form of degree a.degree + b.degree (zero when that exceeds n)
    """
    _check_same_dim(a.dim, b.dim)
    degree = a.degree + b.degree
    if degree > a.dim:
        return Form.zero(a.dim, degree)
    result = {}
    for ka, va in a.coeffs.items():
        for kb, vb in b.coeffs.items():
            sign, key = sort_with_sign(ka + kb)
            if sign == 0:
                continue
            result[key] = result.get(key, Rational(0)) + sign * va * vb
    return Form(a.dim, degree, result)


def interior(v, w):
    """
    Interior product i_v w.

    Args:
        v: Vector in Q^n
        w: Form on Q^n of degree >= 1

    Returns:
        Form of degree w.degree - 1
    """
    _check_same_dim(v.dim, w.dim)
    if w.degree == 0:
        raise DegreeError("interior product of a degree-0 form")
    result = {}
    for key, value in w.coeffs.items():
        for position, index in enumerate(key):
            component = v[index - 1]
            if component == 0:
                continue
            rest = key[:position] + key[position + 1:]
            sign = -1 if position % 2 else 1
            result[rest] = result.get(rest, Rational(0)) + sign * component * value
    return Form(w.dim, w.degree - 1, result)


def interior_iterated(vs, w):
    """
    Contract w with the wedge vs[0] ^ vs[1] ^ ...

    The first vector fills the first slot, so contracting with all ``w.degree``
    vectors gives the constant w(vs[0], ..., vs[k-1]).
    """
    vs = list(vs)
    if len(vs) > w.degree:
        raise DegreeError(f"{len(vs)} vectors inserted into a form of degree {w.degree}")
    result = w
    for v in vs:
        result = interior(v, result)
    return result


def pullback(A, w):
    """
    Pullback A* w along a linear map A: Q^d -> Q^n.

    The coefficient at J is sum over I of w_I * det(A[I, J]).
    """
    if A.codomain_dim != w.dim:
        raise DimensionMismatchError(
            f"map with codomain dimension {A.codomain_dim} cannot pull back a form on Q^{w.dim}")
    d = A.domain_dim
    k = w.degree
    if k == 0:
        return Form(d, 0, dict(w.coeffs))
    matrix = A.matrix
    result = {}
    for J in combinations(range(d), k):
        total = Rational(0)
        for I, value in w.coeffs.items():
            minor = matrix.extract([i - 1 for i in I], list(J))
            total += value * minor.det(method="bareiss")
        if total != 0:
            result[tuple(j + 1 for j in J)] = total
    return Form(d, k, result)


def evaluate(w, vs):
    """
    Evaluate w on a list of exactly ``w.degree`` vectors.

    Returns:
        sympy.Rational
    """
    vs = list(vs)
    if len(vs) != w.degree:
        raise DimensionMismatchError(f"form of degree {w.degree} evaluated on {len(vs)} vectors")
    for v in vs:
        _check_same_dim(v.dim, w.dim)
    return interior_iterated(vs, w).scalar_value()


def contraction_matrix(w):
    """
    Matrix of v -> i_v w.

    Rows follow the increasing (degree-1)-tuples in lexicographic order, columns
    the standard basis of Q^n.
    """
    if w.degree == 0:
        raise DegreeError("contraction matrix of a degree-0 form")
    rows = list(combinations(range(1, w.dim + 1), w.degree - 1))
    row_of = {key: r for r, key in enumerate(rows)}
    entries = sympy.zeros(len(rows), w.dim)
    for j in range(1, w.dim + 1):
        contracted = interior(Vector.basis(w.dim, j), w)
        for key, value in contracted.coeffs.items():
            entries[row_of[key], j - 1] = value
    return ImmutableMatrix(entries)
