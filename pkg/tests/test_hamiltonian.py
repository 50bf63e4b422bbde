import pytest
import sympy

from msgeo.errors import ConvergenceError, SingularHessianError, SymbolicBranchUnavailableError
from msgeo.field_theory.hamiltonian import (
    beta_coefficients, beta_form, beta_from_connection, beta_labels, beta_map, hamilton_de_donder_residuals,
    hamilton_equations, hamiltonian_at, hamiltonian_from_lagrangian, legendre_inverse_at, n_h_equations,
    omega_h, sample_hamiltonian_point, theta_h,
)
from msgeo.field_theory.problems import Connection, EquationSet, FieldTheoryProblem, HamiltonianProblem
from msgeo.symbolic.expr import evaluate_numeric, simplify
from msgeo.symbolic.forms import d
from msgeo.symbolic.parser import parse
from msgeo.utils.sampling import make_rng

y1, p11, p12 = sympy.symbols("y1 p1^1 p1^2")
m0 = sympy.Symbol("m0")


@pytest.fixture
def quartic():
    """A lagrangian with non-constant Hessian 3 z^2 + 1."""
    return FieldTheoryProblem.from_text(1, 1, "1/4*z1_1^4 + 1/2*z1_1^2", name="quartic")


def test_klein_gordon_hamiltonian(klein_gordon):
    HP = hamiltonian_from_lagrangian(klein_gordon)

    assert isinstance(HP, HamiltonianProblem)
    assert simplify(HP.H - (p11 ** 2 / 2 + p12 ** 2 / 2 + m0 * y1 ** 2 / 2)) == 0
    assert HP.parameters == {"m0": 1}
    assert HP.name == "klein-gordon"


def test_hamiltonian_with_linear_momentum_shift():
    """p = z + y inverts to z = p - y, so H = (p - y)^2 / 2."""
    P = FieldTheoryProblem.from_text(1, 1, "1/2*z1_1^2 + y1*z1_1")
    HP = hamiltonian_from_lagrangian(P, name="shifted")
    assert simplify(HP.H - (p11 - y1) ** 2 / 2) == 0
    assert HP.name == "shifted"


def test_hamiltonian_needs_constant_hessian(quartic):
    with pytest.raises(SymbolicBranchUnavailableError, match="numeric Legendre inversion"):
        hamiltonian_from_lagrangian(quartic)


def test_hamiltonian_of_singular_lagrangian():
    P = FieldTheoryProblem.from_text(1, 1, "y1*z1_1")
    with pytest.raises(SingularHessianError):
        hamiltonian_from_lagrangian(P)


def test_legendre_inverse_by_newton(quartic):
    """z^3 + z = 2 has the root z = 1."""
    velocities = legendre_inverse_at(quartic, {"x1": 0, "y1": 0, "p1^1": 2})
    assert velocities["z1_1"] == pytest.approx(1.0, abs=1e-10)


def test_legendre_inverse_singular_start():
    P = FieldTheoryProblem.from_text(1, 1, "1/3*z1_1^3")
    with pytest.raises(SingularHessianError):
        legendre_inverse_at(P, {"x1": 0, "y1": 0, "p1^1": 1})


def test_legendre_inverse_iteration_limit(quartic, mocker):
    mocker.patch("msgeo.field_theory.hamiltonian.NEWTON_MAX_ITERATIONS", 1)
    with pytest.raises(ConvergenceError):
        legendre_inverse_at(quartic, {"x1": 0, "y1": 0, "p1^1": 2})


def test_hamiltonian_at_matches_symbolic_branch(klein_gordon):
    HP = hamiltonian_from_lagrangian(klein_gordon)
    point = {"x1": 0.1, "x2": -0.3, "y1": 0.5, "p1^1": 0.25, "p1^2": -0.75}

    expected = evaluate_numeric(HP.bind(HP.H), point)

    assert hamiltonian_at(klein_gordon, point) == pytest.approx(expected, abs=1e-12)


def test_hamiltonian_at_quartic(quartic):
    """At p = 2 the velocity is 1, so H = p z - L = 2 - 3/4."""
    assert hamiltonian_at(quartic, {"x1": 0, "y1": 0, "p1^1": 2}) == pytest.approx(1.25, abs=1e-10)


def test_theta_and_omega_h(oscillator):
    HP = hamiltonian_from_lagrangian(oscillator.problem)
    theta = theta_h(HP)

    assert simplify(theta.coefficient("x1") + HP.H) == 0
    assert theta.coefficient("y1") == p11
    assert omega_h(HP) == -d(theta)


def test_klein_gordon_hamilton_equations(klein_gordon):
    HP = hamiltonian_from_lagrangian(klein_gordon)
    jet = HP.jet
    expected = EquationSet([parse(text, jet) for text in ("y1_1 - p1^1", "y1_2 - p1^2", "p1^1_1 + p1^2_2 + m0*y1")],
                           "z_star_jet")

    equations = hamilton_equations(HP)

    assert equations.same_equations(expected)
    assert equations.expressions[:2] == expected.expressions[:2]


def test_oscillator_hamilton_equations(oscillator):
    """qdot = p and pdot = -q after the Legendre transformation."""
    HP = hamiltonian_from_lagrangian(oscillator.problem)
    expected = EquationSet([parse("y1_1 - p1^1", HP.jet), parse("p1^1_1 + y1", HP.jet)], "z_star_jet")
    assert hamilton_equations(HP).same_equations(expected)


def test_hamilton_de_donder_with_jet_section(klein_gordon):
    HP = hamiltonian_from_lagrangian(klein_gordon)
    h = Connection.jet_section(HP.jet)
    assert hamilton_de_donder_residuals(HP, h).expressions == hamilton_equations(HP).expressions


def test_hamilton_de_donder_rejects_connection_on_z(klein_gordon):
    HP = hamiltonian_from_lagrangian(klein_gordon)
    with pytest.raises(ValueError, match="Z\\*"):
        hamilton_de_donder_residuals(HP, Connection.holonomic(HP.jet))


def test_beta_coefficients_oscillator(oscillator):
    HP = hamiltonian_from_lagrangian(oscillator.problem)
    A, B = beta_coefficients(HP)
    assert A == [parse("p1^1_1 + y1", HP.jet)]
    assert B == [parse("p1^1 - y1_1", HP.jet)]
    assert n_h_equations(HP).expressions == A + B


def test_beta_map_exact_point(oscillator):
    HP = hamiltonian_from_lagrangian(oscillator.problem)
    point = {
        "x1": sympy.Integer(0), "y1": sympy.Rational(1, 2), "p1^1": sympy.Rational(3, 4),
        "y1_1": sympy.Rational(3, 4), "p1^1_1": sympy.Rational(-1, 2),
    }

    image = beta_map(HP, point)

    assert list(image) == beta_labels(HP.jet) == ["x1", "y1", "p1^1", "a1", "b1^1"]
    assert image["y1"] == sympy.Rational(1, 2)
    assert image["a1"] == 0
    assert image["b1^1"] == 0


def test_beta_from_connection_equals_beta_form(oscillator):
    HP = hamiltonian_from_lagrangian(oscillator.problem)
    assert beta_from_connection(HP) == beta_form(HP)
    assert beta_form(HP).degree == 2


@pytest.mark.parametrize("seed", range(5))
def test_sampled_points_lie_on_n_h(klein_gordon, seed):
    HP = hamiltonian_from_lagrangian(klein_gordon)
    point = sample_hamiltonian_point(HP, make_rng(seed))
    assignment = point.as_assignment()
    assignment["m0"] = 1.0
    assert n_h_equations(HP).max_residual(assignment) <= 1e-9
