"""
Hamiltonian side of first-order field theory.

Covers the passage from a lagrangian to a hamiltonian (exact for constant
z-Hessian, Newton otherwise), the forms Theta_h and Omega_h, the Hamilton
equations and the beta map with its lagrangian submanifold N_h.
"""
import logging

import numpy as np
import sympy

from ..errors import ConvergenceError, SingularHessianError, SymbolicBranchUnavailableError
from ..symbolic.expr import differentiate, evaluate_exact, evaluate_numeric, simplify, substitute
from ..symbolic.forms import CoordForm, CoordSpace, connection_contraction, d, hodge_volume_face, volume_form, wedge_c
from ..utils.sampling import uniform_values
from .lagrangian import REGULARITY_THRESHOLD, hessian, momenta, numeric_matrix
from .problems import Connection, EquationSet, HamiltonianProblem, JetPoint

logger = logging.getLogger(__name__)

NEWTON_TOLERANCE = 1e-12
NEWTON_MAX_ITERATIONS = 50


def _pairs(jet):
    return [(i, mu) for i in jet.fibers for mu in jet.mus]


def hamiltonian_from_lagrangian(P, name=None):
    """
    Exact hamiltonian of a lagrangian whose z-Hessian is constant and invertible.

    dL/dz = A z + b(x, y) is inverted to z = A^{-1}(p - b) and H = p_i^mu z^i_mu - L.

    Args:
        P: FieldTheoryProblem
        name: name of the resulting problem (defaults to the lagrangian's)

    Returns:
        HamiltonianProblem carrying the same parameters

    Raises:
        SymbolicBranchUnavailableError: the Hessian depends on the coordinates
        SingularHessianError: the constant Hessian is singular
    """
    jet = P.jet
    A = hessian(P)
    coordinates = set(jet.first_order())
    if any(entry.free_symbols & coordinates for entry in A):
        logger.error(f"Hessian of {P.name} is not constant")
        raise SymbolicBranchUnavailableError(
            f"the z-Hessian of {P.name} depends on the coordinates; use the numeric Legendre inversion")
    if simplify(P.bind(A).det()) == 0:
        logger.error(f"Hessian of {P.name} is singular")
        raise SingularHessianError(f"the constant z-Hessian of {P.name} is singular")

    pairs = momenta(P)
    at_rest = {z: 0 for z in jet.zs()}
    b = sympy.Matrix([substitute(pairs[key], at_rest) for key in _pairs(jet)])
    p = sympy.Matrix(jet.ps())
    velocities = A.inv() * (p - b)
    solution = {z: simplify(v) for z, v in zip(jet.zs(), velocities)}
    H = simplify(sum((pk * solution[z] for pk, z in zip(jet.ps(), jet.zs())), sympy.Integer(0))
                 - substitute(P.L, solution))
    logger.debug(f"Hamiltonian of {P.name}: {H}")
    return HamiltonianProblem(P.n, P.m, H, dict(P.parameters), name or P.name)


def legendre_inverse_at(P, point):
    """
    Solve dL/dz(x, y, z) = p for z by Newton's method, starting from z = 0.

    Args:
        P: FieldTheoryProblem
        point: mapping name -> value containing x^mu, y^i and p_i^mu

    Returns:
        dict z-name -> float

    Raises:
        SingularHessianError: the Hessian is singular along the iteration
        ConvergenceError: no convergence within NEWTON_MAX_ITERATIONS steps
    """
    jet = P.jet
    point = {str(k): float(v) for k, v in point.items()}
    keys = _pairs(jet)
    gradients = [P.bind(e) for e in momenta(P).values()]
    H = P.bind(hessian(P))
    names = [jet.z(i, mu).name for i, mu in keys]
    targets = np.array([point[jet.p(i, mu).name] for i, mu in keys])
    z = np.zeros(len(keys))

    def residual(values):
        current = dict(point)
        current.update(zip(names, values))
        return current, np.array([evaluate_numeric(e, current) for e in gradients]) - targets

    for iteration in range(NEWTON_MAX_ITERATIONS + 1):
        current, F = residual(z)
        if np.max(np.abs(F)) <= NEWTON_TOLERANCE:
            logger.debug(f"Newton converged after {iteration} iterations")
            return dict(zip(names, z.tolist()))
        if iteration == NEWTON_MAX_ITERATIONS:
            break
        J = numeric_matrix(H, current)
        if abs(np.linalg.det(J)) <= REGULARITY_THRESHOLD:
            logger.error(f"Singular Hessian during Legendre inversion of {P.name}")
            raise SingularHessianError(f"singular Hessian at Newton iteration {iteration}")
        z = z - np.linalg.solve(J, F)
    logger.error(f"Legendre inversion of {P.name} did not converge: residual {np.max(np.abs(F)):.3e}")
    raise ConvergenceError(f"Legendre inversion did not converge in {NEWTON_MAX_ITERATIONS} iterations")


def hamiltonian_at(P, point):
    """H = p_i^mu z^i_mu - L at (x, y, p), with z from legendre_inverse_at."""
    jet = P.jet
    values = {str(k): float(v) for k, v in point.items()}
    values.update(legendre_inverse_at(P, values))
    pairing = sum(values[jet.p(i, mu).name] * values[jet.z(i, mu).name] for i, mu in _pairs(jet))
    return pairing - evaluate_numeric(P.bind(P.L), values)


def z_star_space(HP):
    return CoordSpace(HP.jet.z_star())


def theta_h(HP):
    """Theta_h = -H d^n x + p_i^mu dy^i ^ d^{n-1}x_mu"""
    jet = HP.jet
    space = z_star_space(HP)
    xs = jet.xs()
    theta = volume_form(space, xs) * (-HP.H)
    for i, mu in _pairs(jet):
        dy = CoordForm.coordinate_differential(space, jet.y(i))
        theta = theta + wedge_c(dy, hodge_volume_face(space, xs, mu)) * jet.p(i, mu)
    return theta


def omega_h(HP):
    """
    Omega_h = dH ^ d^n x - dp_i^mu ^ dy^i ^ d^{n-1}x_mu

    Built term by term; ``-d(theta_h(HP))`` gives the same form.
    """
    jet = HP.jet
    space = z_star_space(HP)
    xs = jet.xs()
    omega = wedge_c(d(CoordForm.constant(space, HP.H)), volume_form(space, xs))
    for i, mu in _pairs(jet):
        dp_dy = CoordForm.coordinate_differential(space, jet.p(i, mu), jet.y(i))
        omega = omega - wedge_c(dp_dy, hodge_volume_face(space, xs, mu))
    return omega


def _trace(jet, i, coefficient=None):
    coefficient = coefficient or (lambda i, nu, mu: jet.pjet(i, nu, mu))
    return sum((coefficient(i, mu, mu) for mu in jet.mus), sympy.Integer(0))


def hamilton_equations(HP):
    """
    y^i_mu - dH/dp_i^mu and sum_mu p_i^mu_mu + dH/dy^i on the jet coordinates of Z*.

    The velocity block comes first, ordered by (i, mu).
    """
    jet = HP.jet
    velocity = [jet.yjet(i, mu) - differentiate(HP.H, jet.p(i, mu)) for i, mu in _pairs(jet)]
    divergence = [_trace(jet, i) + differentiate(HP.H, jet.y(i)) for i in jet.fibers]
    return EquationSet(velocity + divergence, "z_star_jet", {"kind": "hamilton", "problem": HP.name})


def hamilton_de_donder_residuals(HP, h):
    """Residuals of i_h Omega_h = (n - 1) Omega_h for a connection on Z*, in the layout of hamilton_equations."""
    jet = HP.jet
    if h.role != "Z*":
        raise ValueError("hamilton_de_donder_residuals needs a connection on Z*")
    velocity = [h.y_coefficient(i, mu) - differentiate(HP.H, jet.p(i, mu)) for i, mu in _pairs(jet)]
    divergence = [_trace(jet, i, h.p_coefficient) + differentiate(HP.H, jet.y(i)) for i in jet.fibers]
    return EquationSet(velocity + divergence, "z_star_jet", {"kind": "hamilton_de_donder", "problem": HP.name})


def beta_coefficients(HP):
    """
    A_i = sum_mu p_i^mu_mu + dH/dy^i and B^i_mu = -y^i_mu + dH/dp_i^mu.

    Returns:
        (A, B) with A a list over i and B a list over (i, mu)
    """
    jet = HP.jet
    A = [simplify(_trace(jet, i) + differentiate(HP.H, jet.y(i))) for i in jet.fibers]
    B = [simplify(-jet.yjet(i, mu) + differentiate(HP.H, jet.p(i, mu))) for i, mu in _pairs(jet)]
    return A, B


def n_h_equations(HP):
    """Zero set of the last two blocks of beta: A_i = 0 followed by B^i_mu = 0."""
    A, B = beta_coefficients(HP)
    return EquationSet(A + B, "z_star_jet", {"kind": "n_hamiltonian", "problem": HP.name})


def _evaluate(e, assignment):
    if all(isinstance(v, (int, sympy.Rational)) for v in assignment.values()):
        return evaluate_exact(e, assignment)
    return evaluate_numeric(e, assignment)


def beta_labels(jet):
    labels = [s.name for s in jet.xs() + jet.ys() + jet.ps()]
    labels += [f"a{i}" for i in jet.fibers]
    labels += [f"b{i}^{mu}" for i, mu in _pairs(jet)]
    return labels


def beta_map(HP, point):
    """
    beta(x, y, p, y_jet, p_jet) = (x, y, p, A, B) at one point.

    Exact when every coordinate is rational, numeric otherwise.

    Args:
        HP: HamiltonianProblem
        point: JetPoint or mapping on the jet coordinates of Z*

    Returns:
        dict label -> value in the order of beta_labels
    """
    jet = HP.jet
    assignment = point.as_assignment() if isinstance(point, JetPoint) else {str(k): v for k, v in point.items()}
    assignment.update(HP.parameters)
    A, B = beta_coefficients(HP)
    values = [assignment[s.name] for s in jet.xs() + jet.ys() + jet.ps()]
    values += [_evaluate(e, assignment) for e in A + B]
    return dict(zip(beta_labels(jet), values))


def beta_from_connection(HP, h=None):
    """
    i_h Omega_h - (n - 1) Omega_h for a connection on Z*.

    With the default jet-section connection this is A_i dy^i ^ d^n x + B^i_mu dp_i^mu ^ d^n x.
    """
    jet = HP.jet
    h = h or Connection.jet_section(jet)
    omega = omega_h(HP)
    return connection_contraction(h.lifts(jet), omega, jet.xs()) - omega * (jet.n - 1)


def beta_form(HP):
    """A_i dy^i ^ d^n x + B^i_mu dp_i^mu ^ d^n x on Z*, coefficients on the jet coordinates."""
    jet = HP.jet
    space = z_star_space(HP)
    volume = volume_form(space, jet.xs())
    A, B = beta_coefficients(HP)
    form = CoordForm.zero(space, jet.n + 1)
    for i, a in zip(jet.fibers, A):
        form = form + wedge_c(CoordForm.coordinate_differential(space, jet.y(i)), volume) * a
    for (i, mu), b in zip(_pairs(jet), B):
        form = form + wedge_c(CoordForm.coordinate_differential(space, jet.p(i, mu)), volume) * b
    return form


def sample_hamiltonian_point(HP, rng):
    """
    A point of N_h: x, y, p uniform in [-1, 1], y_jet = dH/dp, trace of p_jet = -dH/dy.

    Returns:
        JetPoint tagged ``z_star_jet``
    """
    jet = HP.jet
    H = HP.bind(HP.H)
    values = uniform_values(rng, jet.z_star())
    base = dict(values)
    for i, mu in _pairs(jet):
        values[jet.yjet(i, mu).name] = evaluate_numeric(differentiate(H, jet.p(i, mu)), base)
    for i in jet.fibers:
        off_trace = [jet.pjet(i, mu, nu) for mu in jet.mus for nu in jet.mus if mu != nu]
        values.update(uniform_values(rng, off_trace))
        diagonal = [jet.pjet(i, mu, mu) for mu in jet.mus]
        values.update(uniform_values(rng, diagonal[:-1]))
        partial = sum(values[s.name] for s in diagonal[:-1])
        values[diagonal[-1].name] = -evaluate_numeric(differentiate(H, jet.y(i)), base) - partial
    return JetPoint(values, "z_star_jet")
