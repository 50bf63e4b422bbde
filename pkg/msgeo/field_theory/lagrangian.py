"""
Lagrangian side of first-order field theory.

Poincare-Cartan form, Euler-Lagrange and De Donder equations, Legendre maps
and the lagrangian submanifold N_L of the reduced jet space of Z*.
"""
import logging
from dataclasses import dataclass

import numpy as np
import sympy

from ..algebra.exterior_algebra import Vector, to_scalar
from ..algebra.multisymplectic_linear import MultisymplecticSpace, classify
from ..algebra.subspace import Subspace
from ..errors import EvaluationDomainError, PreconditionError
from ..symbolic.expr import differentiate, evaluate_exact, evaluate_numeric, simplify, substitute, to_text
from ..symbolic.forms import (
    CoordForm, CoordSpace, connection_contraction, d, hodge_volume_face, volume_form, wedge_c,
)
from ..utils.sampling import nearest_rational, rational_values, uniform_values
from .problems import RESIDUAL_TOLERANCE, Connection, EquationSet, JetPoint

logger = logging.getLogger(__name__)

REGULARITY_THRESHOLD = 1e-9


def _z_pairs(jet):
    return [(i, mu) for i in jet.fibers for mu in jet.mus]


def momenta(P):
    """dL/dz^i_mu keyed by (i, mu)."""
    jet = P.jet
    return {(i, mu): differentiate(P.L, jet.z(i, mu)) for i, mu in _z_pairs(jet)}


def energy_slot(P):
    """L - z^i_mu dL/dz^i_mu"""
    jet = P.jet
    pairs = momenta(P)
    return simplify(P.L - sum((jet.z(i, mu) * pairs[(i, mu)] for i, mu in pairs), sympy.Integer(0)))


def poincare_cartan(P):
    """
    Poincare-Cartan n-form on (x, y, z).

    Theta_L = (L - z dL/dz) d^n x + dL/dz^i_mu dy^i ^ d^{n-1}x_mu

    Args:
        P: FieldTheoryProblem

    Returns:
        CoordForm of degree n
    """
    jet = P.jet
    space = CoordSpace(jet.first_order())
    xs = jet.xs()
    theta = volume_form(space, xs) * energy_slot(P)
    for (i, mu), value in momenta(P).items():
        if value == 0:
            continue
        dy = CoordForm.coordinate_differential(space, jet.y(i))
        theta = theta + wedge_c(dy, hodge_volume_face(space, xs, mu)) * value
    return theta


def omega_lagrangian(P):
    return -d(poincare_cartan(P))


def hessian(P):
    """(n m) x (n m) matrix d^2 L / dz^i_mu dz^j_nu, rows and columns ordered by (i, mu)."""
    jet = P.jet
    pairs = _z_pairs(jet)
    return sympy.Matrix([[differentiate(differentiate(P.L, jet.z(*a)), jet.z(*b)) for b in pairs] for a in pairs])


def numeric_matrix(matrix, point):
    return np.array([[evaluate_numeric(entry, point) for entry in row] for row in matrix.tolist()], dtype=float)


def _assignment(point):
    if isinstance(point, JetPoint):
        return point.as_assignment()
    return {str(k): v for k, v in point.items()}


def is_regular_at(P, point):
    """Whether |det Hessian| > REGULARITY_THRESHOLD at a point of Z."""
    H = P.bind(hessian(P))
    value = float(np.linalg.det(numeric_matrix(H, _assignment(point))))
    return abs(value) > REGULARITY_THRESHOLD


def total_derivative(P, e, mu):
    """
    Formal total derivative on second-order jet coordinates.

    D_mu = d/dx^mu + z^i_mu d/dy^i + z^i_{nu mu} d/dz^i_nu
    """
    jet = P.jet
    result = sympy.diff(e, jet.x(mu))
    for i in jet.fibers:
        result += jet.z(i, mu) * sympy.diff(e, jet.y(i))
        for nu in jet.mus:
            result += jet.z2(i, nu, mu) * sympy.diff(e, jet.z(i, nu))
    return simplify(result)


def euler_lagrange(P):
    """
    dL/dy^i - sum_mu D_mu(dL/dz^i_mu), one expression per fiber index.

    Returns:
        EquationSet on second-order jet coordinates
    """
    jet = P.jet
    pairs = momenta(P)
    expressions = []
    for i in jet.fibers:
        expression = differentiate(P.L, jet.y(i))
        for mu in jet.mus:
            expression = expression - total_derivative(P, pairs[(i, mu)], mu)
        expressions.append(expression)
    return EquationSet(expressions, "second_order", {"kind": "euler_lagrange", "problem": P.name})


def holonomic_connection(P):
    return Connection.holonomic(P.jet)


def _d2(P, a, b):
    return differentiate(differentiate(P.L, a), b)


def _divergence_residual(P, i, y_coefficient, z_coefficient):
    jet = P.jet
    expression = differentiate(P.L, jet.y(i))
    for mu in jet.mus:
        expression -= _d2(P, jet.x(mu), jet.z(i, mu))
        for j in jet.fibers:
            expression -= y_coefficient(j, mu) * _d2(P, jet.y(j), jet.z(i, mu))
            for nu in jet.mus:
                expression -= z_coefficient(j, mu, nu) * _d2(P, jet.z(j, mu), jet.z(i, nu))
    return expression


def de_donder_residuals(P, h):
    """
    Coordinate expansion of i_h Omega_L = (n - 1) Omega_L for a connection on Z.

    The first m*n expressions, indexed by (i, mu), are
        sum_{j,nu} (y^j_nu - z^j_nu) d^2L/dz^i_mu dz^j_nu;
    the last m, indexed by i, are
        dL/dy^i - d^2L/dx^mu dz^i_mu - y^j_mu d^2L/dy^j dz^i_mu
        - C^j_{mu nu} d^2L/dz^j_mu dz^i_nu + (y^j_nu - z^j_nu) d^2L/dy^i dz^j_nu
    where C^j_{mu nu} is the d/dz^j_mu component of h(d/dx^nu).
    """
    jet = P.jet
    mismatch = {(j, nu): h.y_coefficient(j, nu) - jet.z(j, nu) for j in jet.fibers for nu in jet.mus}
    velocity = []
    for i, mu in _z_pairs(jet):
        velocity.append(sum((mismatch[(j, nu)] * _d2(P, jet.z(i, mu), jet.z(j, nu)) for j, nu in _z_pairs(jet)),
                            sympy.Integer(0)))
    divergence = []
    for i in jet.fibers:
        expression = _divergence_residual(P, i, h.y_coefficient, h.z_coefficient)
        for j, nu in _z_pairs(jet):
            expression += mismatch[(j, nu)] * _d2(P, jet.y(i), jet.z(j, nu))
        divergence.append(expression)
    return EquationSet(velocity + divergence, "second_order",
                       {"kind": "de_donder", "problem": P.name, "velocity_block": len(velocity)})


def de_donder_reduced(P, h=None):
    """
    The De Donder divergence residual with y^i_mu = z^i_mu.

        dL/dy^i - d^2L/dx^mu dz^i_mu - z^j_mu d^2L/dy^j dz^i_mu - C^j_{mu nu} d^2L/dz^j_mu dz^i_nu

    The residuals of ``de_donder_residuals`` are taken for a connection with free
    y^i_mu (the jet symbols y<i>_<mu>) and ``h``'s C, then y^i_mu = z^i_mu is
    substituted into the divergence block. The holonomic connection is the default ``h``.
    """
    jet = P.jet
    h = h or holonomic_connection(P)
    free = Connection("Z", y={(i, mu): jet.yjet(i, mu) for i, mu in _z_pairs(jet)}, z=h.z)
    residuals = de_donder_residuals(P, free)
    on_velocities = {jet.yjet(i, mu): jet.z(i, mu) for i, mu in _z_pairs(jet)}
    block = residuals.meta["velocity_block"]
    expressions = [substitute(e, on_velocities) for e in residuals.expressions[block:]]
    return EquationSet(expressions, "second_order", {"kind": "de_donder_reduced", "problem": P.name})


def de_donder_form(P, h):
    """i_h Omega_L - (n - 1) Omega_L as an (n+1)-form on Z."""
    jet = P.jet
    omega = omega_lagrangian(P)
    return connection_contraction(h.lifts(jet), omega, jet.xs()) - omega * (jet.n - 1)


@dataclass
class LegendreMaps:
    """
    Extended and reduced Legendre transformations as coordinate expressions on Z.

    leg_L(x, y, z) = (x, y, p = L - z dL/dz, p_i^mu = dL/dz^i_mu); Leg_L drops the p slot.
    Both map target coordinate symbols to expressions.
    """
    problem: object
    leg: dict
    Leg: dict
    momenta: dict
    energy_slot: sympy.Expr

    def momentum_expressions(self):
        jet = self.problem.jet
        return [self.Leg[jet.p(i, mu)] for i, mu in _z_pairs(jet)]

    def jacobian(self):
        """z-block of the Jacobian of Leg_L; equals the Hessian of L."""
        jet = self.problem.jet
        return sympy.Matrix(self.momentum_expressions()).jacobian(jet.zs()).applyfunc(simplify)

    def is_local_diffeomorphism_at(self, point):
        return is_regular_at(self.problem, point)

    def to_lines(self):
        lines = [f"leg_L: {name} = {to_text(value)}" for name, value in self.leg.items()]
        lines += [f"Leg_L: {name} = {to_text(value)}" for name, value in self.Leg.items()]
        return lines


def legendre(P):
    jet = P.jet
    base = {x: x for x in jet.xs()}
    base.update({y: y for y in jet.ys()})
    pairs = momenta(P)
    fibre = {jet.p(i, mu): pairs[(i, mu)] for i, mu in _z_pairs(jet)}
    energy = energy_slot(P)
    leg = dict(base)
    leg[jet.p0()] = energy
    leg.update(fibre)
    Leg = dict(base)
    Leg.update(fibre)
    return LegendreMaps(P, leg, Leg, pairs, energy)


def _on_jet_coordinates(P, e):
    """Rename z^i_mu to the jet coordinates y^i_mu of Z* sections."""
    jet = P.jet
    return substitute(P.bind(e), {jet.z(i, mu): jet.yjet(i, mu) for i, mu in _z_pairs(jet)})


def n_l_sources(P):
    """dL/dy^i and dL/dz^i_mu on the jet coordinates of Z*, ordered by i and (i, mu)."""
    jet = P.jet
    pairs = momenta(P)
    divergence = [_on_jet_coordinates(P, differentiate(P.L, jet.y(i))) for i in jet.fibers]
    momentum = [_on_jet_coordinates(P, pairs[key]) for key in _z_pairs(jet)]
    return divergence, momentum


def n_l_equations(P):
    """
    Defining equations of N_L on the jet coordinates of Z*.

    The first m expressions are sum_mu p_i^mu_mu - dL/dy^i, the remaining m*n are
    p_i^mu - dL/dz^i_mu, both with z^i_mu read as y^i_mu.
    """
    jet = P.jet
    divergence_sources, momentum_sources = n_l_sources(P)
    divergence = []
    for i, source in zip(jet.fibers, divergence_sources):
        trace = sum((jet.pjet(i, mu, mu) for mu in jet.mus), sympy.Integer(0))
        divergence.append(trace - source)
    momentum = [jet.p(i, mu) - source for (i, mu), source in zip(_z_pairs(jet), momentum_sources)]
    return EquationSet(divergence + momentum, "z_star_jet", {"kind": "n_lagrangian", "problem": P.name})


def eliminate_momenta(P):
    """
    Substitute p_i^mu = dL/dz^i_mu into the divergence block of N_L and differentiate formally.

    The result is minus the Euler-Lagrange system, with y^i_mu renamed to z^i_mu.
    """
    jet = P.jet
    pairs = momenta(P)
    bindings = {jet.yjet(i, nu): jet.z(i, nu) for i, nu in _z_pairs(jet)}
    for i, mu in _z_pairs(jet):
        bindings[jet.pjet(i, mu, mu)] = total_derivative(P, P.bind(pairs[(i, mu)]), mu)
    divergence = n_l_equations(P).expressions[:jet.m]
    return EquationSet([substitute(e, bindings) for e in divergence], "second_order",
                       {"kind": "eliminated", "problem": P.name})


def _value(e, assignment, exact):
    if not exact:
        return evaluate_numeric(e, assignment)
    try:
        return evaluate_exact(e, assignment)
    except EvaluationDomainError:
        return nearest_rational(evaluate_numeric(e, assignment))


def sample_lagrangian_point(P, rng, exact=False):
    """
    A point of N_L on the jet coordinates of Z*.

    x, y and y^i_mu are drawn uniformly from [-1, 1] (rationals k/16 when ``exact``);
    p and the traces follow from N_L, off-trace p_i^mu_nu are free.

    Returns:
        JetPoint tagged ``z_star_jet``
    """
    jet = P.jet
    draw = rational_values if exact else uniform_values
    values = draw(rng, jet.xs() + jet.ys() + jet.yjets())
    base = dict(values)
    divergence_sources, momentum_sources = n_l_sources(P)
    for (i, mu), source in zip(_z_pairs(jet), momentum_sources):
        values[jet.p(i, mu).name] = _value(source, base, exact)
    for i, source in zip(jet.fibers, divergence_sources):
        off_trace = [jet.pjet(i, mu, nu) for mu in jet.mus for nu in jet.mus if mu != nu]
        values.update(draw(rng, off_trace))
        diagonal = [jet.pjet(i, mu, mu) for mu in jet.mus]
        values.update(draw(rng, diagonal[:-1]))
        partial = sum((values[s.name] for s in diagonal[:-1]), 0)
        values[diagonal[-1].name] = _value(source, base, exact) - partial
    return JetPoint(values, "z_star_jet")


def _exact(value):
    if isinstance(value, str):
        return to_scalar(value)
    return nearest_rational(value)


def _reduced_values(P, assignment):
    jet = P.jet
    names = [s.name for s in jet.xs() + jet.ys() + jet.ps() + jet.yjets()]
    missing = [name for name in names if name not in assignment]
    if missing:
        raise PreconditionError(f"point lacks coordinates {', '.join(missing)}")
    values = {name: assignment[name] for name in names}
    for i in jet.fibers:
        div = jet.div(i).name
        if div in assignment:
            values[div] = assignment[div]
        else:
            values[div] = sum(assignment.get(jet.pjet(i, mu, mu).name, 0) for mu in jet.mus)
    return values


def lagrangian_tangency_check(P, point):
    """
    Pointwise certificate that N_L is (n+1)-lagrangian.

    The tangent space of N_L at the point, in the reduced coordinates (x, y, p, y_jet, div),
    is spanned by e_c + d(dL/dy)/dc e_div + d(dL/dz)/dc e_p for c among x, y and y_jet. It is
    classified against the constant form -d(div_i dy^i ^ d^n x + p_i^mu dy^i_mu ^ d^n x).

    Args:
        P: FieldTheoryProblem
        point: JetPoint or mapping on the jet coordinates of Z* (or with div<i> in place of traces)

    Raises:
        PreconditionError: the point is not on N_L
    """
    jet = P.jet
    values = _reduced_values(P, _assignment(point))
    numeric = {name: float(to_scalar(v)) if isinstance(v, str) else float(v) for name, v in values.items()}
    divergence_sources, momentum_sources = n_l_sources(P)
    residuals = [numeric[jet.div(i).name] - evaluate_numeric(e, numeric) for i, e in zip(jet.fibers, divergence_sources)]
    residuals += [numeric[jet.p(i, mu).name] - evaluate_numeric(e, numeric)
                  for (i, mu), e in zip(_z_pairs(jet), momentum_sources)]
    worst = max((abs(r) for r in residuals), default=0.0)
    if worst > RESIDUAL_TOLERANCE:
        logger.error(f"Point is off N_L for {P.name}: residual {worst:.3e}")
        raise PreconditionError(f"point is not on N_L (residual {worst:.3e})")

    space = CoordSpace(jet.reduced_z_star_jet())
    xs = jet.xs()
    volume = volume_form(space, xs)
    theta = CoordForm.zero(space, jet.n + 1)
    for i in jet.fibers:
        theta = theta + wedge_c(CoordForm.coordinate_differential(space, jet.y(i)), volume) * jet.div(i)
    for i, mu in _z_pairs(jet):
        theta = theta + wedge_c(CoordForm.coordinate_differential(space, jet.yjet(i, mu)), volume) * jet.p(i, mu)
    omega = (-d(theta)).at_point({})

    exact = {name: _exact(v) for name, v in values.items()}
    tangents = []
    for c in jet.xs() + jet.ys() + jet.yjets():
        components = [sympy.Integer(0)] * space.dim
        components[space.index(c)] = sympy.Integer(1)
        for i, source in zip(jet.fibers, divergence_sources):
            components[space.index(jet.div(i))] = _value(differentiate(source, c), exact, True)
        for (i, mu), source in zip(_z_pairs(jet), momentum_sources):
            components[space.index(jet.p(i, mu))] = _value(differentiate(source, c), exact, True)
        tangents.append(Vector(components))
    W = Subspace.span(space.dim, tangents)
    result = classify(MultisymplecticSpace(omega, check=False), W, jet.n + 1)
    logger.debug(f"Tangency check for {P.name}: {result.labels()}")
    return result.lagrangian
