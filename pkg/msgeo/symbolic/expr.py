"""
Symbolic expressions over jet coordinates.

Expressions are sympy trees whose symbols are named after ``VarName`` printed
forms (``x1``, ``y2``, ``z1_2``, ``z1_12``, ``p1^2``, ``p1^2_1``, ...) or after
declared parameters. Canonical form is polynomial expansion over Q with
function arguments canonicalized recursively; transcendental identities are
not applied.
"""
import logging
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy
from sympy.printing.str import StrPrinter

from ..errors import EvaluationDomainError, MissingAssignmentError, UnknownIdentifierError
from ..algebra.exterior_algebra import to_scalar

logger = logging.getLogger(__name__)

MAX_INDEX = 9

_PATTERNS = [
    ("x", re.compile(r"^x([1-9])$")),
    ("y", re.compile(r"^y([1-9])$")),
    ("yjet", re.compile(r"^y([1-9])_([1-9])$")),
    ("z", re.compile(r"^z([1-9])_([1-9])$")),
    ("z2", re.compile(r"^z([1-9])_([1-9])([1-9])$")),
    ("p", re.compile(r"^p([1-9])\^([1-9])$")),
    ("pjet", re.compile(r"^p([1-9])\^([1-9])_([1-9])$")),
    ("p0", re.compile(r"^p$")),
    ("div", re.compile(r"^div([1-9])$")),
]

FUNCTIONS = {
    "sin": sympy.sin,
    "cos": sympy.cos,
    "exp": sympy.exp,
    "log": sympy.log,
}


@dataclass(frozen=True)
class VarName:
    """
    A coordinate name.

    Roles and index meaning:
        x (mu), y (i), z (i, mu), z2 (i, mu, nu) with mu <= nu, p (i, mu),
        pjet (i, mu, nu), yjet (i, nu), p0 (), div (i), param (name)
    """
    role: str
    indices: tuple = ()
    label: str = ""

    def __post_init__(self):
        if self.role == "z2":
            i, mu, nu = self.indices
            if mu > nu:
                object.__setattr__(self, "indices", (i, nu, mu))

    @property
    def name(self):
        idx = self.indices
        if self.role == "param":
            return self.label
        if self.role in ("x", "y"):
            return f"{self.role}{idx[0]}"
        if self.role == "yjet":
            return f"y{idx[0]}_{idx[1]}"
        if self.role == "z":
            return f"z{idx[0]}_{idx[1]}"
        if self.role == "z2":
            return f"z{idx[0]}_{idx[1]}{idx[2]}"
        if self.role == "p":
            return f"p{idx[0]}^{idx[1]}"
        if self.role == "pjet":
            return f"p{idx[0]}^{idx[1]}_{idx[2]}"
        if self.role == "p0":
            return "p"
        if self.role == "div":
            return f"div{idx[0]}"
        raise ValueError(f"unknown role {self.role}")

    @property
    def symbol(self):
        return sympy.Symbol(self.name)

    @classmethod
    def parse(cls, name):
        """
        Recognize a coordinate name.

        Returns:
            VarName, or None if the name matches no coordinate pattern
        """
        for role, pattern in _PATTERNS:
            match = pattern.match(name)
            if match:
                return cls(role, tuple(int(g) for g in match.groups()))
        return None

    def __str__(self):
        return self.name


def _symbol_name(v):
    if isinstance(v, VarName):
        return v.name
    if isinstance(v, sympy.Symbol):
        return v.name
    if isinstance(v, str):
        return v
    raise TypeError(f"not a variable: {v!r}")


def as_symbol(v):
    """Symbol for a VarName, a name string or a Symbol."""
    if isinstance(v, sympy.Symbol):
        return v
    name = _symbol_name(v)
    parsed = VarName.parse(name)
    return parsed.symbol if parsed is not None else sympy.Symbol(name)


class JetSpace:
    """
    Index ranges and parameter names of one problem.

    Args:
        n: base dimension (1..9)
        m: fiber dimension (1..9)
        parameters: declared parameter names
    """

    def __init__(self, n, m, parameters=()):
        if not 1 <= n <= MAX_INDEX or not 1 <= m <= MAX_INDEX:
            raise ValueError(f"dimensions n={n}, m={m} must lie in 1..{MAX_INDEX}")
        self.n = n
        self.m = m
        params = tuple(parameters)
        for name in params:
            if VarName.parse(name) is not None or name in FUNCTIONS:
                raise ValueError(f"parameter name '{name}' collides with a coordinate or function name")
            if not re.match(r"^[A-Za-z][A-Za-z0-9_]*$", name):
                raise ValueError(f"invalid parameter name '{name}'")
        self.parameters = params

    def x(self, mu):
        return VarName("x", (mu,)).symbol

    def y(self, i):
        return VarName("y", (i,)).symbol

    def z(self, i, mu):
        return VarName("z", (i, mu)).symbol

    def z2(self, i, mu, nu):
        return VarName("z2", (i, mu, nu)).symbol

    def p(self, i, mu):
        return VarName("p", (i, mu)).symbol

    def pjet(self, i, mu, nu):
        return VarName("pjet", (i, mu, nu)).symbol

    def yjet(self, i, nu):
        return VarName("yjet", (i, nu)).symbol

    def p0(self):
        return VarName("p0").symbol

    def div(self, i):
        return VarName("div", (i,)).symbol

    def param(self, name):
        if name not in self.parameters:
            raise UnknownIdentifierError(name)
        return sympy.Symbol(name)

    @property
    def mus(self):
        return range(1, self.n + 1)

    @property
    def fibers(self):
        return range(1, self.m + 1)

    def xs(self):
        return [self.x(mu) for mu in self.mus]

    def ys(self):
        return [self.y(i) for i in self.fibers]

    def zs(self):
        return [self.z(i, mu) for i in self.fibers for mu in self.mus]

    def z2s(self):
        return [self.z2(i, mu, nu) for i in self.fibers for mu in self.mus for nu in self.mus if mu <= nu]

    def ps(self):
        return [self.p(i, mu) for i in self.fibers for mu in self.mus]

    def yjets(self):
        return [self.yjet(i, nu) for i in self.fibers for nu in self.mus]

    def pjets(self):
        return [self.pjet(i, mu, nu) for i in self.fibers for mu in self.mus for nu in self.mus]

    def divs(self):
        return [self.div(i) for i in self.fibers]

    def first_order(self):
        return self.xs() + self.ys() + self.zs()

    def second_order(self):
        return self.first_order() + self.z2s()

    def z_star(self):
        return self.xs() + self.ys() + self.ps()

    def extended_z_star(self):
        return self.xs() + self.ys() + [self.p0()] + self.ps()

    def z_star_jet(self):
        return self.z_star() + self.yjets() + self.pjets()

    def reduced_z_star_jet(self):
        return self.z_star() + self.yjets() + self.divs()

    def is_legal(self, v):
        """Whether a VarName fits this space's index ranges."""
        if v.role == "param":
            return v.label in self.parameters
        bounds = {
            "x": (self.n,), "y": (self.m,), "z": (self.m, self.n), "z2": (self.m, self.n, self.n),
            "p": (self.m, self.n), "pjet": (self.m, self.n, self.n), "yjet": (self.m, self.n),
            "p0": (), "div": (self.m,),
        }[v.role]
        return all(1 <= i <= b for i, b in zip(v.indices, bounds))

    def resolve(self, name, position=None):
        """Symbol for an identifier, validated against this space."""
        if name in self.parameters:
            return sympy.Symbol(name)
        v = VarName.parse(name)
        if v is None or not self.is_legal(v):
            raise UnknownIdentifierError(name, position)
        return v.symbol

    def __repr__(self):
        return f"JetSpace(n={self.n}, m={self.m}, parameters={list(self.parameters)})"


def differentiate(e, v):
    """
    Exact partial derivative, all coordinates independent.

    Args:
        e: sympy expression
        v: VarName, Symbol or name string
    """
    return simplify(sympy.diff(e, as_symbol(v)))


def simplify(e):
    """Canonical form: polynomial expansion, function arguments included."""
    e = sympy.sympify(e)
    return sympy.expand(e, deep=True, power_exp=False, power_base=False, log=False)


def substitute(e, bindings):
    """Simultaneous substitution followed by simplify."""
    mapping = {as_symbol(k): sympy.sympify(v) for k, v in bindings.items()}
    return simplify(sympy.sympify(e).xreplace(mapping))


def free_varnames(e):
    """Sorted names of the free symbols of e."""
    return sorted(s.name for s in sympy.sympify(e).free_symbols)


@lru_cache(maxsize=512)
def _compiled(e, names):
    symbols = [sympy.Symbol(name) for name in names]
    return sympy.lambdify(symbols, e, modules="math", dummify=True)


def _assignment_by_name(assignment):
    return {_symbol_name(k): v for k, v in assignment.items()}


def evaluate_numeric(e, assignment):
    """
    IEEE double evaluation.

    Args:
        e: sympy expression
        assignment: mapping VarName/Symbol/name -> float

    Raises:
        MissingAssignmentError: a free variable has no value
        EvaluationDomainError: a function is evaluated outside its domain
    """
    e = sympy.sympify(e)
    values = _assignment_by_name(assignment)
    names = tuple(sorted(s.name for s in e.free_symbols))
    missing = [name for name in names if name not in values]
    if missing:
        raise MissingAssignmentError(missing)
    function = _compiled(e, names)
    try:
        result = function(*[float(values[name]) for name in names])
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise EvaluationDomainError(f"cannot evaluate {e}: {exc}") from exc
    if isinstance(result, complex):
        raise EvaluationDomainError(f"{e} is not real at the given point")
    return float(result)


def evaluate_exact(e, assignment):
    """
    Exact rational evaluation.

    Raises:
        MissingAssignmentError: a free variable has no value
        EvaluationDomainError: the value is not rational (or not finite)
    """
    e = sympy.sympify(e)
    values = _assignment_by_name(assignment)
    missing = [s.name for s in e.free_symbols if s.name not in values]
    if missing:
        raise MissingAssignmentError(missing)
    mapping = {s: to_scalar(values[s.name]) for s in e.free_symbols}
    result = e.xreplace(mapping)
    if result.has(sympy.zoo, sympy.nan, sympy.oo, -sympy.oo):
        raise EvaluationDomainError(f"{e} is undefined at the given point")
    if not result.is_Rational:
        raise EvaluationDomainError(f"{e} evaluates to the non-rational value {result}")
    return result


EQUIVALENCE_SAMPLES = 10
EQUIVALENCE_TOLERANCE = 1e-9


def equivalent(a, b, samples=EQUIVALENCE_SAMPLES, seed=0):
    """
    Equality of expressions.

    Canonical forms are compared first. Expressions with function calls whose
    canonical forms differ are compared numerically at ``samples`` random points
    in [0.25, 1.25] (probabilistic).
    """
    difference = simplify(sympy.sympify(a) - sympy.sympify(b))
    if difference == 0:
        return True
    if not difference.atoms(sympy.Function):
        return False
    names = sorted(s.name for s in difference.free_symbols)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        point = {name: float(rng.uniform(0.25, 1.25)) for name in names}
        try:
            value = evaluate_numeric(difference, point)
            reference = evaluate_numeric(a, point)
        except EvaluationDomainError:
            continue
        if abs(value) > EQUIVALENCE_TOLERANCE * (1.0 + abs(reference)):
            return False
    logger.debug(f"Numeric equivalence accepted for {a} and {b}")
    return True


class DslPrinter(StrPrinter):
    """Printer whose output parses back with the expression grammar"""

    def _print_Pow(self, expr, rational=False):
        return super()._print_Pow(expr, rational).replace("**", "^")

    def _print_Exp1(self, expr):
        return "exp(1)"

    def _print_Rational(self, expr):
        if expr.q == 1:
            return str(expr.p)
        return f"{expr.p}/{expr.q}"


_PRINTER = DslPrinter()


def to_text(e):
    """Text in the expression grammar."""
    return _PRINTER.doprint(sympy.sympify(e))


def expr_to_ast(e):
    """JSON-ready tree of an expression."""
    e = sympy.sympify(e)
    if e.is_Symbol:
        return {"var": e.name}
    if e.is_Rational:
        return {"num": str(e.p) if e.q == 1 else f"{e.p}/{e.q}"}
    if e is sympy.E:
        return {"op": "exp", "args": [{"num": "1"}]}
    if e.is_Add:
        return {"op": "add", "args": [expr_to_ast(a) for a in e.as_ordered_terms()]}
    if e.is_Mul:
        return {"op": "mul", "args": [expr_to_ast(a) for a in e.as_ordered_factors()]}
    if e.is_Pow:
        return {"op": "pow", "args": [expr_to_ast(e.base), expr_to_ast(e.exp)]}
    if isinstance(e, sympy.Function):
        return {"op": type(e).__name__, "args": [expr_to_ast(a) for a in e.args]}
    raise ValueError(f"expression node {type(e).__name__} has no tree form")
