"""
Coordinate maps alpha and beta on the jet space of Z*, and verification that
the lagrangian and hamiltonian descriptions define the same submanifold.
"""
import logging
from dataclasses import dataclass, field

import sympy

from ..errors import PreconditionError, SingularHessianError
from ..symbolic.expr import to_text
from ..symbolic.forms import CoordForm, CoordSpace, d, volume_form, wedge_c
from ..utils.sampling import make_rng, run_ordered
from .hamiltonian import (
    beta_coefficients, hamiltonian_from_lagrangian, legendre_inverse_at, n_h_equations, sample_hamiltonian_point,
)
from .lagrangian import n_l_equations, sample_lagrangian_point
from .problems import RESIDUAL_TOLERANCE, JetPoint

logger = logging.getLogger(__name__)


def _pairs(jet):
    return [(i, mu) for i in jet.fibers for mu in jet.mus]


def _assignment(point):
    if isinstance(point, JetPoint):
        return point.as_assignment()
    return {str(k): v for k, v in point.items()}


def alpha_labels(jet):
    labels = [s.name for s in jet.xs() + jet.ys()]
    labels += [jet.z(i, mu).name for i, mu in _pairs(jet)]
    labels += [f"a{i}" for i in jet.fibers]
    labels += [f"b{i}^{mu}" for i, mu in _pairs(jet)]
    return labels


def jet_reduce(jet, point):
    """
    Representative of a jet of Z* in the reduced space: (x, y, p, y_jet, div).

    div_i is the trace sum_mu p_i^mu_mu; off-trace entries are forgotten.
    """
    values = _assignment(point)
    reduced = {s.name: values[s.name] for s in jet.xs() + jet.ys() + jet.ps() + jet.yjets()}
    for i in jet.fibers:
        reduced[jet.div(i).name] = sum((values[jet.pjet(i, mu, mu).name] for mu in jet.mus), 0)
    return reduced


def alpha_tilde(jet, reduced):
    """(x, y, p, y_jet, div) -> (x, y, z = y_jet, a = div, b = p)"""
    values = [reduced[s.name] for s in jet.xs() + jet.ys()]
    values += [reduced[jet.yjet(i, mu).name] for i, mu in _pairs(jet)]
    values += [reduced[jet.div(i).name] for i in jet.fibers]
    values += [reduced[jet.p(i, mu).name] for i, mu in _pairs(jet)]
    return dict(zip(alpha_labels(jet), values))


def alpha_tilde_inverse(jet, image):
    reduced = {s.name: image[s.name] for s in jet.xs() + jet.ys()}
    for i, mu in _pairs(jet):
        reduced[jet.p(i, mu).name] = image[f"b{i}^{mu}"]
    for i, mu in _pairs(jet):
        reduced[jet.yjet(i, mu).name] = image[jet.z(i, mu).name]
    for i in jet.fibers:
        reduced[jet.div(i).name] = image[f"a{i}"]
    return reduced


def alpha_map(jet, point):
    """
    alpha(x, y, p, y_jet, p_jet) = (x, y, y_jet, sum_mu p_i^mu_mu, p).

    Factors through jet_reduce, so jets with the same divergence share an image.
    """
    return alpha_tilde(jet, jet_reduce(jet, point))


def jet_space(jet):
    return CoordSpace(jet.z_star_jet())


def theta_alpha(jet):
    """sum_mu p_i^mu_mu dy^i ^ d^n x + p_i^mu dy^i_mu ^ d^n x on the jet coordinates of Z*."""
    space = jet_space(jet)
    volume = volume_form(space, jet.xs())
    theta = CoordForm.zero(space, jet.n + 1)
    for i in jet.fibers:
        trace = sum((jet.pjet(i, mu, mu) for mu in jet.mus), sympy.Integer(0))
        theta = theta + wedge_c(CoordForm.coordinate_differential(space, jet.y(i)), volume) * trace
    for i, mu in _pairs(jet):
        dy = CoordForm.coordinate_differential(space, jet.yjet(i, mu))
        theta = theta + wedge_c(dy, volume) * jet.p(i, mu)
    return theta


def theta_beta(HP):
    """A_i dy^i ^ d^n x + B^i_mu dp_i^mu ^ d^n x on the jet coordinates of Z*."""
    jet = HP.jet
    space = jet_space(jet)
    volume = volume_form(space, jet.xs())
    A, B = beta_coefficients(HP)
    theta = CoordForm.zero(space, jet.n + 1)
    for i, a in zip(jet.fibers, A):
        theta = theta + wedge_c(CoordForm.coordinate_differential(space, jet.y(i)), volume) * a
    for (i, mu), b in zip(_pairs(jet), B):
        theta = theta + wedge_c(CoordForm.coordinate_differential(space, jet.p(i, mu)), volume) * b
    return theta


def triple_primitive(HP):
    """(p_i^mu y^i_mu - H) d^n x; its differential is theta_alpha - theta_beta."""
    jet = HP.jet
    space = jet_space(jet)
    pairing = sum((jet.p(i, mu) * jet.yjet(i, mu) for i, mu in _pairs(jet)), sympy.Integer(0))
    return volume_form(space, jet.xs()) * (pairing - HP.H)


def primitive_identity(HP):
    return theta_alpha(HP.jet) - theta_beta(HP) == d(triple_primitive(HP))


def omega_identity(HP):
    return d(theta_alpha(HP.jet)) == d(theta_beta(HP))


@dataclass
class SampleResult:
    """Residuals at one sampled point of N_L and one of N_h"""
    index: int
    point: dict
    residual_max: float
    converse_residual_max: float

    def to_json(self):
        return {
            "index": self.index,
            "point": self.point,
            "residual_max": self.residual_max,
            "converse_residual_max": self.converse_residual_max,
        }


@dataclass
class TripleReport:
    problem: str
    seed: int
    omega_identity: bool
    primitive_identity: bool
    hamiltonian: str
    samples: list = field(default_factory=list)
    tolerance: float = RESIDUAL_TOLERANCE

    @property
    def max_residual(self):
        return max((max(s.residual_max, s.converse_residual_max) for s in self.samples), default=0.0)

    @property
    def passed(self):
        return self.omega_identity and self.primitive_identity and self.max_residual <= self.tolerance

    def to_json(self):
        return {
            "problem": self.problem,
            "seed": self.seed,
            "hamiltonian": self.hamiltonian,
            "omega_identity": self.omega_identity,
            "primitive_identity": self.primitive_identity,
            "samples": [s.to_json() for s in self.samples],
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _with_parameters(point, parameters):
    assignment = point.as_assignment()
    assignment.update({name: float(value) for name, value in parameters.items()})
    return assignment


def verify_triple(P, samples=20, seed=0, parallel=False, workers=1):
    """
    Check that N_L and N_h coincide for a lagrangian with constant invertible z-Hessian.

    Symbolically: theta_alpha - theta_beta is exact with primitive (p y_jet - H) d^n x, so the
    two (n+2)-forms agree. Numerically: seeded points of N_L satisfy the equations of N_h and
    seeded points of N_h map into N_L under the inverse Legendre map.

    Args:
        P: FieldTheoryProblem
        samples: number of points drawn on each side
        seed: seed of the point generator
        parallel: evaluate the sampled points on a thread pool
        workers: thread pool size

    Returns:
        TripleReport

    Raises:
        PreconditionError: the lagrangian is degenerate
        SymbolicBranchUnavailableError: the z-Hessian is not constant
    """
    try:
        HP = hamiltonian_from_lagrangian(P)
    except SingularHessianError as e:
        logger.error(f"Cannot verify {P.name}: {e}")
        raise PreconditionError(f"{P.name} is not regular: {e}") from e

    jet = P.jet
    report = TripleReport(
        problem=P.name,
        seed=seed,
        omega_identity=omega_identity(HP),
        primitive_identity=primitive_identity(HP),
        hamiltonian=to_text(HP.H),
    )
    logger.info(f"Sampling {samples} points per side for {P.name} with seed {seed}")
    rng = make_rng(seed)
    forward = [sample_lagrangian_point(P, rng) for _ in range(samples)]
    converse = [sample_hamiltonian_point(HP, rng) for _ in range(samples)]
    n_h = n_h_equations(HP)
    n_l = n_l_equations(P)

    def evaluate(index):
        forward_residual = n_h.max_residual(_with_parameters(forward[index], HP.parameters))
        point = converse[index]
        assignment = _with_parameters(point, P.parameters)
        velocities = legendre_inverse_at(P, {s.name: assignment[s.name] for s in jet.z_star()})
        mismatch = max(abs(velocities[jet.z(i, mu).name] - assignment[jet.yjet(i, mu).name]) for i, mu in _pairs(jet))
        converse_residual = max(mismatch, n_l.max_residual(assignment))
        return SampleResult(index, forward[index].to_json(), forward_residual, converse_residual)

    report.samples = run_ordered(evaluate, range(samples), parallel=parallel, workers=workers)
    if report.passed:
        logger.info(f"Triple verified for {P.name}: max residual {report.max_residual:.3e}")
    else:
        logger.error(f"Triple verification failed for {P.name}: max residual {report.max_residual:.3e}")
    return report
