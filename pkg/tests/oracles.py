"""
Independent reference computations used to cross-check the library.
"""
from itertools import combinations, product

import numpy as np
import sympy

from msgeo.algebra.exterior_algebra import LinearMap, pullback
from msgeo.algebra.multisymplectic_linear import MultisymplecticSpace
from msgeo.algebra.subspace import Subspace
from msgeo.symbolic.expr import evaluate_numeric


def unimodular_map(rng, n, spread=2):
    """Random integer matrix L*U with unit diagonals, so det = 1."""
    lower = sympy.eye(n)
    upper = sympy.eye(n)
    for i in range(n):
        for j in range(i):
            lower[i, j] = int(rng.integers(-spread, spread + 1))
            upper[j, i] = int(rng.integers(-spread, spread + 1))
    return LinearMap(lower * upper)


def scramble(S, A, *subspaces):
    """
    Transport a space along A.

    The new form is A* omega, and each subspace W becomes A^-1 W, so A maps
    the scrambled data back onto the original.
    """
    inverse = A.inverse()
    moved = [Subspace(W.ambient, [inverse.apply(v) for v in W.basis]) for W in subspaces]
    return MultisymplecticSpace(pullback(A, S.omega)), moved


def perturb(rng, A, spread=2):
    """A plus a random nonzero entry change, redrawn until the result is invertible."""
    n = A.domain_dim
    while True:
        i, j = (int(k) for k in rng.integers(0, n, size=2))
        delta = int(rng.integers(1, spread + 1)) * int(rng.choice([-1, 1]))
        bump = sympy.zeros(n, n)
        bump[i, j] = delta
        candidate = LinearMap(A.matrix + bump)
        if candidate.is_invertible():
            return candidate


def evaluate_by_determinants(w, vectors):
    """w(v1, ..., vk) as the sum over keys I of c_I times the I-rows minor."""
    columns = sympy.Matrix.hstack(*[v.column() for v in vectors]) if vectors else None
    total = sympy.Integer(0)
    for key, value in w.coeffs.items():
        if not key:
            total += value
            continue
        total += value * columns.extract([i - 1 for i in key], list(range(len(vectors)))).det()
    return total


def increasing_tuples(n, k):
    return list(combinations(range(1, n + 1), k))


def central_difference(e, name, point, step=1e-5):
    """Central finite difference of an expression in one variable at a point."""
    forward = dict(point)
    backward = dict(point)
    forward[name] = point[name] + step
    backward[name] = point[name] - step
    return (evaluate_numeric(e, forward) - evaluate_numeric(e, backward)) / (2 * step)


FIVE_POINT = ((-2, 1), (-1, -8), (1, 8), (2, -1))


def _five_point(values, node, axis, h):
    """Fourth-order central difference along one grid axis; exact on polynomials of degree <= 4."""
    total = 0.0
    for offset, weight in FIVE_POINT:
        shifted = list(node)
        shifted[axis] += offset
        total += weight * values[tuple(shifted)]
    return total / (12 * h)


def _section_jet(jet, section, point):
    """Second-order jet of a section at a point, keyed by coordinate name."""
    xs = jet.xs()
    at = dict(zip(xs, point))
    jets = {x.name: float(value) for x, value in at.items()}
    for i, y in zip(jet.fibers, section):
        jets[jet.y(i).name] = float(y.subs(at))
        for mu in jet.mus:
            jets[jet.z(i, mu).name] = float(sympy.diff(y, xs[mu - 1]).subs(at))
            for nu in range(mu, jet.n + 1):
                jets[jet.z2(i, mu, nu).name] = float(sympy.diff(y, xs[mu - 1], xs[nu - 1]).subs(at))
    return jets


def discrete_action_gradient(P, section, nodes=16, step=1e-5):
    """
    Gradient of the discretized action with respect to interior nodal values.

    The action is sum_k L(x_k, y_k, Dy_k) h^n over a grid on [0, 1]^n, Dy being the
    five-point difference. Each nodal value is moved by +/- step and the cells whose
    stencil touches it are summed again. Gradients are divided by h^n.

    Args:
        P: FieldTheoryProblem without unbound parameters
        section: m expressions y^i(x) in x1..xn
        nodes: grid points per axis

    Returns:
        list of (second-order jet of the section at the node, [gradient per fiber])
        for every node at distance >= 4 from the boundary
    """
    jet = P.jet
    n, m = jet.n, jet.m
    h = 1.0 / (nodes - 1)
    grid = np.linspace(0.0, 1.0, nodes)
    lagrangian = sympy.lambdify(jet.first_order(), P.bind(P.L), "math")
    fields = [sympy.lambdify(jet.xs(), y, "math") for y in section]
    values = [np.zeros((nodes,) * n) for _ in range(m)]
    for node in product(range(nodes), repeat=n):
        for i in range(m):
            values[i][node] = fields[i](*[grid[a] for a in node])

    def cell(node):
        arguments = [grid[a] for a in node]
        arguments += [values[i][node] for i in range(m)]
        arguments += [_five_point(values[i], node, mu, h) for i in range(m) for mu in range(n)]
        return lagrangian(*arguments)

    def touched(node):
        cells = [node]
        for axis in range(n):
            for offset, _ in FIVE_POINT:
                shifted = list(node)
                shifted[axis] += offset
                cells.append(tuple(shifted))
        return cells

    results = []
    for node in product(range(4, nodes - 4), repeat=n):
        gradient = []
        for i in range(m):
            original = values[i][node]
            values[i][node] = original + step
            forward = sum(cell(c) for c in touched(node))
            values[i][node] = original - step
            backward = sum(cell(c) for c in touched(node))
            values[i][node] = original
            gradient.append((forward - backward) / (2 * step))
        results.append((_section_jet(jet, section, [grid[a] for a in node]), gradient))
    return results
