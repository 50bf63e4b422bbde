"""
Problem files.

A problem file is a small TOML document with exactly one payload: a
``[lagrangian]``, a ``[hamiltonian]``, a ``[linear]`` multisymplectic space or
a ``[form]`` for the homotopy operator. Expressions live in quoted strings,
rationals are written "p/q".

    [problem]
    name = "klein-gordon"
    n = 2
    m = 1

    [lagrangian]
    expr = "1/2*z1_1^2 + 1/2*z1_2^2 - 1/2*m0*y1^2"

    [params]
    m0 = "1"
"""
import hashlib
import logging
import re
import tomllib
from dataclasses import dataclass, field
from pathlib import Path

from ..algebra.exterior_algebra import Form, Vector, to_scalar
from ..algebra.multisymplectic_linear import MultisymplecticSpace, model_space
from ..algebra.subspace import Subspace
from ..errors import MsgeoError, ProblemFileError
from ..field_theory.problems import Connection, FieldTheoryProblem, HamiltonianProblem
from ..symbolic.expr import JetSpace, free_varnames
from ..symbolic.forms import CoordForm, CoordSpace
from ..symbolic.parser import parse

logger = logging.getLogger(__name__)

PAYLOADS = ("lagrangian", "hamiltonian", "linear", "form")
PROBLEMS_DIR = Path(__file__).parent / "problems"

_TOML_LOCATION = re.compile(r"\(at line (\d+)")


@dataclass
class ProblemFile:
    """A parsed problem file"""
    path: str
    name: str
    kind: str
    digest: str
    lagrangian: FieldTheoryProblem = None
    hamiltonian: HamiltonianProblem = None
    space: MultisymplecticSpace = None
    model: object = None
    subspaces: dict = field(default_factory=dict)
    connection: Connection = None
    form: CoordForm = None
    point: dict = field(default_factory=dict)

    @property
    def problem(self):
        return self.lagrangian or self.hamiltonian

    def subspace(self, name):
        try:
            return self.subspaces[name]
        except KeyError:
            known = ", ".join(sorted(self.subspaces)) or "none"
            raise ProblemFileError(f"no subspace named '{name}' (known: {known})", self.path) from None


class _Reader:
    """Carries the source text so that errors can point at a line"""

    def __init__(self, text, path):
        self.text = text
        self.path = str(path)
        self.lines = text.splitlines()

    def line_of(self, *needles):
        """First line mentioning all needles, searching after the first one's header."""
        for number, line in enumerate(self.lines, start=1):
            if all(needle in line for needle in needles):
                return number
        return None

    def fail(self, reason, *needles):
        line = self.line_of(*needles) if needles else None
        logger.error(f"{self.path}:{line}: {reason}")
        return ProblemFileError(reason, self.path, line)


def _table(document, reader, name):
    value = document.get(name, {})
    if not isinstance(value, dict):
        raise reader.fail(f"'{name}' must be a table", name)
    return value


def _integer(table, key, reader, minimum=1):
    value = table.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise reader.fail(f"'{key}' must be an integer >= {minimum}", key)
    return value


def _scalar(value, reader, *needles):
    try:
        return to_scalar(value)
    except (TypeError, ValueError) as e:
        raise reader.fail(f"{value!r} is not a rational scalar ({e})", *needles) from e


def _expression(text, jet, reader, key):
    if not isinstance(text, str):
        raise reader.fail(f"'{key}' must be a quoted expression string", key)
    try:
        return parse(text, jet)
    except MsgeoError as e:
        raise reader.fail(f"bad expression for '{key}': {e}", key) from e


def _parameters(document, reader):
    return {name: _scalar(value, reader, name) for name, value in _table(document, reader, "params").items()}


def _dimensions(document, reader):
    problem = _table(document, reader, "problem")
    return _integer(problem, "n", reader), _integer(problem, "m", reader)


def _field_problem(document, reader, kind, name):
    n, m = _dimensions(document, reader)
    parameters = _parameters(document, reader)
    try:
        jet = JetSpace(n, m, tuple(parameters))
    except ValueError as e:
        raise reader.fail(str(e), "params") from e
    payload = _table(document, reader, kind)
    expr = _expression(payload.get("expr"), jet, reader, "expr")
    cls = FieldTheoryProblem if kind == "lagrangian" else HamiltonianProblem
    try:
        problem = cls(n, m, expr, parameters, name)
    except MsgeoError as e:
        raise reader.fail(str(e), "expr") from e
    return problem, jet


def _index_key(key, size, reader):
    try:
        indices = tuple(int(part) for part in key.split(","))
    except ValueError:
        indices = ()
    if len(indices) != size:
        raise reader.fail(f"connection key '{key}' needs {size} comma-separated indices", key)
    return indices


def _connection(document, reader, jet, role):
    table = document.get("connection")
    if table is None:
        return None
    sizes = {"y": 2, "z": 3, "p": 3}
    coefficients = {}
    for block, entries in table.items():
        if block not in sizes:
            raise reader.fail(f"unknown connection block '{block}'", block)
        coefficients[block] = {
            _index_key(key, sizes[block], reader): _expression(value, jet, reader, key)
            for key, value in entries.items()
        }
    try:
        return Connection(role, **coefficients)
    except ValueError as e:
        raise reader.fail(str(e), "[connection]") from e


def _rows(rows, reader, name):
    if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
        raise reader.fail(f"subspace '{name}' needs rows = [[...], ...]", name)
    return [[_scalar(c, reader, name) for c in row] for row in rows]


def _linear(document, reader, result):
    payload = _table(document, reader, "linear")
    try:
        if "model" in payload:
            spec = payload["model"]
            n0 = _integer(spec, "n0", reader)
            k = _integer(spec, "k", reader)
            r = spec.get("r", 0)
            E = None
            if spec.get("E"):
                E = Subspace.from_rows(_rows(spec["E"], reader, "E"), n0)
            model, space = model_space(n0, k, r, E)
            result.model = model
            result.subspaces["V"] = model.v_slot()
            result.subspaces["F"] = model.form_slot()
            if E is not None:
                result.subspaces["E"] = Subspace.span(model.dim, [
                    Vector(list(v) + [0] * model.form_dim) for v in E.basis
                ])
        else:
            dim = _integer(payload, "dim", reader)
            degree = _integer(payload, "degree", reader, minimum=2)
            terms = {}
            for term in payload.get("omega", []):
                indices = tuple(term.get("indices", ()))
                terms[indices] = _scalar(term.get("coeff", "1"), reader, "indices")
            space = MultisymplecticSpace(Form(dim, degree, terms))
    except ProblemFileError:
        raise
    except MsgeoError as e:
        raise reader.fail(str(e), "[linear]") from e
    result.space = space
    for name, table in _table(document, reader, "subspace").items():
        rows = _rows(table.get("rows", []), reader, name)
        try:
            result.subspaces[name] = Subspace.from_rows(rows, space.dim) if rows else Subspace.zero(space.dim)
        except (MsgeoError, ValueError) as e:
            raise reader.fail(f"subspace '{name}': {e}", f"subspace.{name}") from e


def _form(document, reader):
    payload = _table(document, reader, "form")
    coordinates = payload.get("coordinates")
    if not isinstance(coordinates, list) or not coordinates:
        raise reader.fail("[form] needs a non-empty coordinates list", "coordinates")
    try:
        space = CoordSpace(coordinates)
    except ValueError as e:
        raise reader.fail(str(e), "coordinates") from e
    degree = _integer(payload, "degree", reader, minimum=0)
    allowed = set(space.names())
    terms = {}
    for term in payload.get("terms", []):
        expr = _expression(term.get("coeff", "1"), None, reader, "coeff")
        stray = [name for name in free_varnames(expr) if name not in allowed]
        if stray:
            raise reader.fail(f"coefficient uses {', '.join(stray)} outside the form's coordinates", "coeff")
        differentials = term.get("d", [])
        if len(differentials) != degree:
            raise reader.fail(f"term {differentials} does not have degree {degree}", "d")
        try:
            key = tuple(space.index(name) for name in differentials)
        except MsgeoError as e:
            raise reader.fail(str(e), "d") from e
        probe = CoordForm(space, degree, {key: expr})
        for k, v in probe.terms.items():
            terms[k] = terms.get(k, 0) + v
    return CoordForm(space, degree, terms)


def parse_problem(text, path="<problem>", digest=None):
    """
    Parse problem file text.

    Raises:
        ProblemFileError: with the offending line when it can be located
    """
    reader = _Reader(text, path)
    try:
        document = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        match = _TOML_LOCATION.search(str(e))
        line = int(match.group(1)) if match else None
        logger.error(f"{path}: invalid TOML: {e}")
        raise ProblemFileError(f"invalid TOML: {e}", path, line) from e

    present = [kind for kind in PAYLOADS if kind in document]
    if len(present) != 1:
        found = ", ".join(present) or "none"
        raise reader.fail(f"expected exactly one of [{'], ['.join(PAYLOADS)}], found {found}")
    kind = present[0]
    name = _table(document, reader, "problem").get("name") or Path(str(path)).stem
    digest = digest or hashlib.sha256(text.encode("utf-8")).hexdigest()
    result = ProblemFile(path=str(path), name=name, kind=kind, digest=digest)

    if kind in ("lagrangian", "hamiltonian"):
        problem, jet = _field_problem(document, reader, kind, name)
        setattr(result, kind, problem)
        result.connection = _connection(document, reader, jet, "Z" if kind == "lagrangian" else "Z*")
    elif kind == "linear":
        _linear(document, reader, result)
    else:
        result.form = _form(document, reader)
    result.point = {key: _scalar(value, reader, key) for key, value in _table(document, reader, "point").items()}
    logger.debug(f"Loaded {kind} problem '{name}' from {path}")
    return result


def load_problem(path):
    """
    Read a problem file, or a built-in sample given as ``sample:<name>``.

    Raises:
        ProblemFileError: unreadable or malformed file
    """
    path = str(path)
    if path.startswith("sample:"):
        from .sample_problems import sample_problem_path
        path = str(sample_problem_path(path.split(":", 1)[1]))
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise ProblemFileError(f"cannot read problem file: {e.strerror}", path) from e
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ProblemFileError("problem file is not UTF-8", path) from e
    return parse_problem(text, path, hashlib.sha256(raw).hexdigest())
