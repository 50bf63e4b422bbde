"""
Verification service.

Runs one CLI subcommand against a parsed problem file and optionally records
the run in the database.
"""
import logging
from dataclasses import dataclass

import sympy

from ..algebra.multisymplectic_linear import classify, darboux, darboux_expansion, darboux_horizontal
from ..config import config
from ..errors import PreconditionError, SingularHessianError, SymbolicBranchUnavailableError
from ..field_theory.hamiltonian import (
    beta_map, hamilton_de_donder_residuals, hamilton_equations, hamiltonian_from_lagrangian, n_h_equations,
)
from ..field_theory.lagrangian import (
    de_donder_residuals, euler_lagrange, holonomic_connection, lagrangian_tangency_check, legendre, n_l_equations,
)
from ..field_theory.problems import JetPoint
from ..field_theory.triple import alpha_map, verify_triple
from ..models.models import RunRecord
from ..repositories.run_repository import RunRepository
from ..symbolic.expr import to_text
from ..symbolic.forms import homotopy_defect, homotopy_operator
from ..utils.serialization import classification_to_json, darboux_to_json, scalar_to_str, subspace_to_json
from .report_service import ReportService

logger = logging.getLogger(__name__)

COMMANDS = (
    "classify", "darboux", "el", "de-donder", "legendre", "hamilton",
    "alpha", "beta", "nl", "nh", "verify-triple", "homotopy",
)


@dataclass
class CommandResult:
    """Outcome of one subcommand"""
    command: str
    problem: str
    payload: dict
    text: str
    exit_code: int = 0
    passed: bool = None
    seed: int = None

    def to_json(self):
        data = dict(self.payload)
        data["command"] = self.command
        data["problem"] = self.problem
        data["exit_code"] = self.exit_code
        return data


def _value_text(value):
    if isinstance(value, (int, sympy.Rational)):
        return scalar_to_str(value)
    return repr(float(value))


class VerificationService:
    """Service dispatching subcommands to the library"""

    def __init__(self, repository=None, reports=None, workers=None):
        """
        Initialize verification service.

        Args:
            repository: RunRepository to record runs with. If None, one is created on first use.
            reports: ReportService used for text output
            workers: thread pool size for parallel sampling
        """
        self._repository = repository
        self.reports = reports or ReportService()
        self.workers = workers or config.workers

    @property
    def repository(self):
        if self._repository is None:
            self._repository = RunRepository()
        return self._repository

    def run(self, command, problem_file, options):
        """
        Run a subcommand.

        Args:
            command: one of COMMANDS
            problem_file: ProblemFile
            options: argparse namespace (or any object) with the subcommand's options

        Returns:
            CommandResult
        """
        if command not in COMMANDS:
            raise ValueError(f"unknown command '{command}'")
        handler = getattr(self, "_" + command.replace("-", "_"))
        logger.info(f"Running {command} on {problem_file.name}")
        return handler(problem_file, options)

    # problem accessors

    def _linear(self, pf):
        if pf.kind != "linear":
            raise PreconditionError(f"'{pf.name}' is not a [linear] problem")
        return pf.space

    def _lagrangian(self, pf):
        if pf.lagrangian is None:
            raise PreconditionError(f"'{pf.name}' has no [lagrangian]")
        return pf.lagrangian

    def _hamiltonian(self, pf):
        if pf.hamiltonian is not None:
            return pf.hamiltonian
        return hamiltonian_from_lagrangian(self._lagrangian(pf))

    def _jet_problem(self, pf):
        if pf.problem is None:
            raise PreconditionError(f"'{pf.name}' has no [lagrangian] or [hamiltonian]")
        return pf.problem

    def _point(self, pf, options, jet):
        values = dict(pf.point)
        values.update(getattr(options, "point", None) or {})
        names = [s.name for s in jet.z_star_jet()]
        unknown = sorted(set(values) - set(names))
        if unknown:
            raise PreconditionError(f"point coordinates {', '.join(unknown)} are not jet coordinates of Z*")
        return JetPoint({name: values.get(name, sympy.Integer(0)) for name in names}, "z_star_jet")

    def _equations(self, command, pf, equations, **extra):
        payload = equations.to_json()
        payload.update(extra)
        return CommandResult(command, pf.name, payload, self.reports.format_equations_for_display(equations.to_lines()))

    # subcommands

    def _classify(self, pf, options):
        space = self._linear(pf)
        W = pf.subspace(options.subspace)
        l = getattr(options, "l", None)
        if l is None:
            l = space.k
        elif not 1 <= l <= space.k:
            raise PreconditionError(f"--l must lie in 1..{space.k}, got {l}")
        result = classify(space, W, l)
        payload = classification_to_json(result)
        payload["subspace"] = subspace_to_json(W)
        flags = ["isotropic", "coisotropic", "lagrangian", "multisymplectic"]
        text = f"l: {l}\n" + self.reports.format_flags_for_display(payload, flags) + f"\nsummary: {result.summary}"
        return CommandResult("classify", pf.name, payload, text)

    def _darboux(self, pf, options):
        space = self._linear(pf)
        W = pf.subspace(options.subspace)
        horizontal = getattr(options, "horizontal", None)
        r = getattr(options, "r", None)
        if horizontal is not None:
            if r is None:
                raise PreconditionError("--horizontal needs --r")
            result = darboux_horizontal(space, W, pf.subspace(horizontal), r)
        else:
            result = darboux(space, W)
        expansion = darboux_expansion(result)
        payload = darboux_to_json(result, expansion)
        passed = payload["relations_hold"] and expansion.certified
        return CommandResult("darboux", pf.name, payload, self.reports.format_darboux_for_display(payload),
                             exit_code=0 if passed else 1, passed=passed)

    def _el(self, pf, options):
        return self._equations("el", pf, euler_lagrange(self._lagrangian(pf)))

    def _de_donder(self, pf, options):
        P = self._lagrangian(pf)
        h = pf.connection or holonomic_connection(P)
        residuals = de_donder_residuals(P, h)
        return self._equations("de-donder", pf, residuals, satisfied=residuals.is_trivial())

    def _legendre(self, pf, options):
        P = self._lagrangian(pf)
        maps = legendre(P)
        lines = maps.to_lines()
        payload = {
            "leg": {str(k): to_text(v) for k, v in maps.leg.items()},
            "Leg": {str(k): to_text(v) for k, v in maps.Leg.items()},
            "hamiltonian": None,
        }
        try:
            H = hamiltonian_from_lagrangian(P).H
            payload["hamiltonian"] = to_text(H)
            lines.append(f"H = {to_text(H)}")
        except (SingularHessianError, SymbolicBranchUnavailableError) as e:
            payload["hamiltonian_note"] = str(e)
            lines.append(f"H: not derivable in closed form ({e})")
        return CommandResult("legendre", pf.name, payload, "\n".join(lines))

    def _hamilton(self, pf, options):
        HP = self._hamiltonian(pf)
        if pf.connection is not None and pf.connection.role == "Z*":
            equations = hamilton_de_donder_residuals(HP, pf.connection)
        else:
            equations = hamilton_equations(HP)
        return self._equations("hamilton", pf, equations, hamiltonian=to_text(HP.H))

    def _alpha(self, pf, options):
        jet = self._jet_problem(pf).jet
        point = self._point(pf, options, jet)
        image = {label: _value_text(v) for label, v in alpha_map(jet, point).items()}
        payload = {"point": {k: _value_text(v) for k, v in point.values.items()}, "image": image}
        return CommandResult("alpha", pf.name, payload, self.reports.format_mapping_for_display(image))

    def _beta(self, pf, options):
        HP = self._hamiltonian(pf)
        point = self._point(pf, options, HP.jet)
        image = {label: _value_text(v) for label, v in beta_map(HP, point).items()}
        payload = {"point": {k: _value_text(v) for k, v in point.values.items()}, "image": image}
        return CommandResult("beta", pf.name, payload, self.reports.format_mapping_for_display(image))

    def _nl(self, pf, options):
        P = self._lagrangian(pf)
        result = self._equations("nl", pf, n_l_equations(P))
        if pf.point or getattr(options, "point", None):
            lagrangian = lagrangian_tangency_check(P, self._point(pf, options, P.jet))
            result.payload["tangency"] = {"lagrangian": lagrangian}
            result.text += f"\ntangent space lagrangian: {'true' if lagrangian else 'false'}"
            result.passed = lagrangian
            result.exit_code = 0 if lagrangian else 1
        return result

    def _nh(self, pf, options):
        return self._equations("nh", pf, n_h_equations(self._hamiltonian(pf)))

    def _verify_triple(self, pf, options):
        P = self._lagrangian(pf)
        samples = getattr(options, "samples", None) or config.default_samples
        seed = getattr(options, "seed", None)
        seed = config.default_seed if seed is None else seed
        report = verify_triple(P, samples=samples, seed=seed,
                               parallel=bool(getattr(options, "parallel", False)), workers=self.workers)
        payload = report.to_json()
        return CommandResult("verify-triple", pf.name, payload, self.reports.format_triple_for_display(payload),
                             exit_code=0 if report.passed else 1, passed=report.passed, seed=seed)

    def _homotopy(self, pf, options):
        if pf.form is None:
            raise PreconditionError(f"'{pf.name}' has no [form]")
        image = homotopy_operator(pf.form)
        identity = homotopy_defect(pf.form).is_zero()
        payload = {"form": pf.form.to_json(), "homotopy": image.to_json(), "identity": identity}
        text = f"I(w) = {image.to_text()}\nidentity: {'true' if identity else 'false'}"
        return CommandResult("homotopy", pf.name, payload, text, exit_code=0 if identity else 1, passed=identity)

    # persistence

    def record_run(self, result, problem_file=None, command=None, exit_code=None):
        """
        Store a run; failures are logged and reported as False.

        Args:
            result: CommandResult, or None when the command failed before producing one
            problem_file: ProblemFile the command ran on, if it was loaded
        """
        try:
            record = RunRecord(
                command=result.command if result else command,
                problem_name=problem_file.name if problem_file else None,
                problem_digest=problem_file.digest if problem_file else None,
                seed=result.seed if result else None,
                exit_code=result.exit_code if result else exit_code,
                passed=result.passed if result else None,
                summary=result.to_json() if result else {},
            )
            self.repository.add(record)
            logger.info(f"Stored run of {record.command}")
            return True
        except Exception as e:
            logger.error(f"Error storing run: {e}")
            return False

    def close(self):
        """Close the repository session if one was opened"""
        if self._repository is not None:
            self._repository.close()
            logger.debug("Verification service session closed")
