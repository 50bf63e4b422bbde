"""
Problem types shared by the lagrangian and hamiltonian sides.
"""
import logging
from dataclasses import dataclass, field

import sympy

from ..algebra.exterior_algebra import to_scalar
from ..errors import UnknownIdentifierError
from ..symbolic.expr import JetSpace, evaluate_exact, evaluate_numeric, expr_to_ast, simplify, to_text
from ..symbolic.parser import parse

logger = logging.getLogger(__name__)

SPACES = ("first_order", "second_order", "z_star", "z_star_jet", "reduced")

RESIDUAL_TOLERANCE = 1e-9


def _check_symbols(expression, allowed, what):
    allowed_names = {s.name for s in allowed}
    for symbol in sorted(expression.free_symbols, key=lambda s: s.name):
        if symbol.name not in allowed_names:
            logger.error(f"{what} references '{symbol.name}' outside its coordinate space")
            raise UnknownIdentifierError(symbol.name)


@dataclass
class FieldTheoryProblem:
    """
    A first-order lagrangian L(x, y, z) with fixed volume form d^n x.

    Attributes:
        n: base dimension
        m: fiber dimension
        L: sympy expression
        parameters: parameter name -> rational value
    """
    n: int
    m: int
    L: sympy.Expr
    parameters: dict = field(default_factory=dict)
    name: str = "lagrangian"

    def __post_init__(self):
        self.parameters = {k: to_scalar(v) for k, v in self.parameters.items()}
        self.jet = JetSpace(self.n, self.m, tuple(self.parameters))
        self.L = simplify(self.L)
        params = [sympy.Symbol(name) for name in self.parameters]
        _check_symbols(self.L, self.jet.first_order() + params, "the lagrangian")

    @classmethod
    def from_text(cls, n, m, text, parameters=None, name="lagrangian"):
        parameters = dict(parameters or {})
        jet = JetSpace(n, m, tuple(parameters))
        return cls(n, m, parse(text, jet), parameters, name)

    def bind(self, expression):
        """Replace parameters by their values."""
        return bind_parameters(expression, self.parameters)


@dataclass
class HamiltonianProblem:
    """A hamiltonian H(x, y, p); the hamiltonian form is -H d^n x + p_i^mu dy^i ^ d^{n-1}x_mu"""
    n: int
    m: int
    H: sympy.Expr
    parameters: dict = field(default_factory=dict)
    name: str = "hamiltonian"

    def __post_init__(self):
        self.parameters = {k: to_scalar(v) for k, v in self.parameters.items()}
        self.jet = JetSpace(self.n, self.m, tuple(self.parameters))
        self.H = simplify(self.H)
        params = [sympy.Symbol(name) for name in self.parameters]
        _check_symbols(self.H, self.jet.z_star() + params, "the hamiltonian")

    @classmethod
    def from_text(cls, n, m, text, parameters=None, name="hamiltonian"):
        parameters = dict(parameters or {})
        jet = JetSpace(n, m, tuple(parameters))
        return cls(n, m, parse(text, jet), parameters, name)

    def bind(self, expression):
        return bind_parameters(expression, self.parameters)


def bind_parameters(expression, parameters):
    if not parameters:
        return expression
    return expression.xreplace({sympy.Symbol(k): v for k, v in parameters.items()})


@dataclass
class Connection:
    """
    Ehresmann connection given by its horizontal lifts.

    On Z:  h(d/dx^mu) = d/dx^mu + y[i, mu] d/dy^i + z[i, nu, mu] d/dz^i_nu
    On Z*: h(d/dx^mu) = d/dx^mu + y[i, mu] d/dy^i + p[i, nu, mu] d/dp_i^nu

    Missing coefficients are zero.
    """
    role: str
    y: dict = field(default_factory=dict)
    z: dict = field(default_factory=dict)
    p: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.role not in ("Z", "Z*"):
            raise ValueError(f"connection role must be 'Z' or 'Z*', got {self.role!r}")
        if self.role == "Z" and self.p:
            raise ValueError("a connection on Z has no momentum coefficients")
        if self.role == "Z*" and self.z:
            raise ValueError("a connection on Z* has no velocity coefficients")
        self.y = {tuple(k): sympy.sympify(v) for k, v in self.y.items()}
        self.z = {tuple(k): sympy.sympify(v) for k, v in self.z.items()}
        self.p = {tuple(k): sympy.sympify(v) for k, v in self.p.items()}

    def y_coefficient(self, i, mu):
        return self.y.get((i, mu), sympy.Integer(0))

    def z_coefficient(self, i, nu, mu):
        return self.z.get((i, nu, mu), sympy.Integer(0))

    def p_coefficient(self, i, nu, mu):
        return self.p.get((i, nu, mu), sympy.Integer(0))

    def lifts(self, jet):
        """The n horizontal lifts as coordinate -> component mappings."""
        lifts = []
        for mu in jet.mus:
            lift = {jet.x(mu): sympy.Integer(1)}
            for i in jet.fibers:
                lift[jet.y(i)] = self.y_coefficient(i, mu)
                for nu in jet.mus:
                    if self.role == "Z":
                        lift[jet.z(i, nu)] = self.z_coefficient(i, nu, mu)
                    else:
                        lift[jet.p(i, nu)] = self.p_coefficient(i, nu, mu)
            lifts.append(lift)
        return lifts

    @classmethod
    def holonomic(cls, jet):
        """y^i_mu = z^i_mu and z^i_{nu mu} the second-order jet coordinates."""
        return cls(
            "Z",
            y={(i, mu): jet.z(i, mu) for i in jet.fibers for mu in jet.mus},
            z={(i, nu, mu): jet.z2(i, nu, mu) for i in jet.fibers for nu in jet.mus for mu in jet.mus},
        )

    @classmethod
    def jet_section(cls, jet):
        """The connection on Z* whose coefficients are the J^1Z* jet coordinates."""
        return cls(
            "Z*",
            y={(i, mu): jet.yjet(i, mu) for i in jet.fibers for mu in jet.mus},
            p={(i, nu, mu): jet.pjet(i, nu, mu) for i in jet.fibers for nu in jet.mus for mu in jet.mus},
        )


def _canonical_sign(expression):
    """The expression or its negative, whichever has a positive leading coefficient."""
    if expression == 0:
        return expression
    leading = expression.as_ordered_terms()[0]
    coefficient, _ = leading.as_coeff_Mul()
    return -expression if coefficient.is_negative else expression


@dataclass
class EquationSet:
    """Expressions understood as '= 0' on a tagged coordinate space"""
    expressions: list
    space: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.space not in SPACES:
            raise ValueError(f"unknown coordinate space tag {self.space!r}")
        self.expressions = [simplify(e) for e in self.expressions]

    def __len__(self):
        return len(self.expressions)

    def __iter__(self):
        return iter(self.expressions)

    def nonzero(self):
        return [e for e in self.expressions if e != 0]

    def is_trivial(self):
        return not self.nonzero()

    def to_lines(self):
        return [f"{to_text(e)} = 0" for e in self.expressions]

    def to_json(self):
        return {
            "equations": [expr_to_ast(e) for e in self.expressions],
            "text": self.to_lines(),
            "space": self.space,
            "meta": dict(self.meta),
        }

    def same_equations(self, other):
        """Equal as sets of equations, each taken up to sign."""
        if self.space != other.space:
            return False
        mine = {_canonical_sign(e) for e in self.nonzero()}
        theirs = {_canonical_sign(e) for e in other.nonzero()}
        return mine == theirs

    def evaluate(self, point, exact=False):
        """Values of every expression at a point (name -> value)."""
        evaluator = evaluate_exact if exact else evaluate_numeric
        return [evaluator(e, point) for e in self.expressions]

    def max_residual(self, point):
        values = self.evaluate(point)
        return max((abs(v) for v in values), default=0.0)


@dataclass
class JetPoint:
    """A numeric or exact point of a tagged coordinate space"""
    values: dict
    space: str

    def as_assignment(self):
        return {str(k): v for k, v in self.values.items()}

    def to_json(self):
        return {name: (str(v) if isinstance(v, sympy.Rational) else float(v)) for name, v in self.values.items()}
