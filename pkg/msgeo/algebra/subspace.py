"""
Subspaces of Q^n with exact membership, sum and intersection.

A subspace keeps the basis it was given together with the nonzero rows of its
reduced row-echelon form, which serve as the canonical representative for
equality.
"""
import logging

import sympy
from sympy import ImmutableMatrix

from ..errors import DimensionMismatchError
from .exterior_algebra import Vector, to_scalar

logger = logging.getLogger(__name__)


def _as_vector(v):
    return v if isinstance(v, Vector) else Vector(v)


def _echelon_rows(vectors, ambient):
    if not vectors:
        return ()
    rref, pivots = sympy.Matrix([list(v) for v in vectors]).rref()
    return tuple(Vector(list(rref.row(i))) for i in range(len(pivots)))


class Subspace:
    """Subspace of Q^ambient given by an ordered basis of independent vectors"""

    __slots__ = ("_ambient", "_basis", "_echelon")

    def __init__(self, ambient, basis=()):
        vectors = [_as_vector(v) for v in basis]
        for v in vectors:
            if v.dim != ambient:
                raise DimensionMismatchError(f"vector of dimension {v.dim} in a subspace of Q^{ambient}")
        echelon = _echelon_rows(vectors, ambient)
        if len(echelon) != len(vectors):
            raise ValueError(f"basis vectors are linearly dependent (rank {len(echelon)} of {len(vectors)})")
        self._ambient = ambient
        self._basis = tuple(vectors)
        self._echelon = echelon

    @classmethod
    def span(cls, ambient, vectors):
        """Span of arbitrary (possibly dependent) vectors; keeps the first independent ones."""
        chosen = []
        rank = 0
        for v in (_as_vector(v) for v in vectors):
            if v.dim != ambient:
                raise DimensionMismatchError(f"vector of dimension {v.dim} in a subspace of Q^{ambient}")
            trial = chosen + [v]
            new_rank = sympy.Matrix([list(u) for u in trial]).rank()
            if new_rank > rank:
                chosen = trial
                rank = new_rank
        return cls(ambient, chosen)

    @classmethod
    def zero(cls, ambient):
        return cls(ambient, ())

    @classmethod
    def full(cls, ambient):
        return cls(ambient, [Vector.basis(ambient, i) for i in range(1, ambient + 1)])

    @classmethod
    def coordinate(cls, ambient, indices):
        """Span of the standard vectors e_i for the given 1-based indices."""
        return cls(ambient, [Vector.basis(ambient, i) for i in indices])

    @classmethod
    def from_rows(cls, rows, ambient=None):
        rows = [[to_scalar(c) for c in row] for row in rows]
        if ambient is None:
            if not rows:
                raise DimensionMismatchError("empty row list needs an explicit ambient dimension")
            ambient = len(rows[0])
        return cls.span(ambient, rows)

    @property
    def ambient(self):
        return self._ambient

    @property
    def basis(self):
        return self._basis

    @property
    def echelon(self):
        return self._echelon

    @property
    def dim(self):
        return len(self._basis)

    def matrix(self):
        """Basis vectors as the rows of a matrix."""
        if not self._basis:
            return ImmutableMatrix(sympy.zeros(0, self._ambient))
        return ImmutableMatrix([list(v) for v in self._basis])

    def _check(self, other):
        if other.ambient != self._ambient:
            raise DimensionMismatchError(f"subspaces of Q^{self._ambient} and Q^{other.ambient}")

    def contains_vector(self, v):
        v = _as_vector(v)
        if v.dim != self._ambient:
            raise DimensionMismatchError(f"vector of dimension {v.dim} tested against Q^{self._ambient}")
        if v.is_zero():
            return True
        if not self._basis:
            return False
        return sympy.Matrix([list(u) for u in self._echelon] + [list(v)]).rank() == self.dim

    def contains(self, other):
        """Inclusion other <= self."""
        self._check(other)
        return all(self.contains_vector(v) for v in other.echelon)

    def __contains__(self, item):
        if isinstance(item, Subspace):
            return self.contains(item)
        return self.contains_vector(item)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self._ambient == other.ambient and self._echelon == other.echelon

    def __hash__(self):
        return hash((self._ambient, self._echelon))

    def __add__(self, other):
        self._check(other)
        return Subspace.span(self._ambient, list(self._basis) + list(other.basis))

    def intersection(self, other):
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self._ambient)
        stacked = sympy.Matrix.hstack(self.matrix().T, -other.matrix().T)
        vectors = []
        for null in stacked.nullspace():
            coefficients = null[:self.dim]
            combo = Vector.zero(self._ambient)
            for c, u in zip(coefficients, self._basis):
                combo = combo + u * c
            vectors.append(combo)
        return Subspace.span(self._ambient, vectors)

    def is_transversal_to(self, other):
        """True when self (+) other is the whole space and the sum is direct."""
        self._check(other)
        return self.dim + other.dim == self._ambient and (self + other).dim == self._ambient

    def complement_basis(self):
        """Standard vectors completing the basis, chosen greedily in index order."""
        current = self
        extra = []
        for i in range(1, self._ambient + 1):
            if current.dim == self._ambient:
                break
            e = Vector.basis(self._ambient, i)
            if not current.contains_vector(e):
                extra.append(e)
                current = Subspace(self._ambient, list(current.basis) + [e])
        return extra

    def coordinates_of(self, v):
        """
        Exact coordinates of v in the stored basis.

        Raises:
            ValueError: if v is not in the subspace
        """
        v = _as_vector(v)
        if not self.contains_vector(v):
            raise ValueError(f"{v} is not in the subspace")
        if not self._basis:
            return []
        solution, _ = self.matrix().T.gauss_jordan_solve(v.column())
        return [to_scalar(c) for c in solution]

    def __repr__(self):
        rows = "; ".join(" ".join(str(c) for c in v) for v in self._basis)
        return f"Subspace(Q^{self._ambient}, [{rows}])"


def nullspace_subspace(matrix, ambient):
    """Kernel of an exact matrix with ``ambient`` columns."""
    matrix = sympy.Matrix(matrix)
    if matrix.rows == 0:
        return Subspace.full(ambient)
    if matrix.cols != ambient:
        raise DimensionMismatchError(f"matrix with {matrix.cols} columns has no kernel in Q^{ambient}")
    vectors = [Vector(list(v)) for v in matrix.nullspace()]
    return Subspace(ambient, vectors)
