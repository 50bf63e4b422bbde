"""
Exception hierarchy for msgeo.

Every concrete error also derives from the built-in exception it refines, so
callers may catch either ``MsgeoError`` or e.g. ``ValueError``.
"""


class MsgeoError(Exception):
    """
    Base class for all msgeo errors.

    Attributes:
        exit_code: CLI exit status for this error; 2 (input error) unless a subclass says otherwise
    """
    exit_code = 2


class DimensionMismatchError(MsgeoError, ValueError):
    """Ambient dimensions, arities or degrees do not agree"""


class DegreeError(MsgeoError, ValueError):
    """A degree or order parameter is out of its admissible range"""


class DegenerateFormError(MsgeoError, ValueError):
    """A form required to be multisymplectic has a nontrivial kernel"""


class NotIsotropicError(MsgeoError, ValueError):
    """A subspace required to be 1-isotropic is not"""


class SingularMapError(MsgeoError, ValueError):
    """A linear map required to be invertible is singular"""


class HypothesisError(MsgeoError, ValueError):
    """
    One or more hypotheses of a normal-form construction fail.

    Attributes:
        violations: names of the violated hypotheses, in the order checked
    """

    def __init__(self, violations, details=None):
        self.violations = list(violations)
        self.details = dict(details or {})
        parts = []
        for name in self.violations:
            detail = self.details.get(name)
            parts.append(f"{name} ({detail})" if detail else name)
        super().__init__("hypotheses violated: " + ", ".join(parts))


class InternalConsistencyError(MsgeoError, RuntimeError):
    """An identity that must hold on valid input failed"""
    exit_code = 1


class ExpressionSyntaxError(MsgeoError, ValueError):
    """
    Malformed expression text.

    Attributes:
        text: the offending input
        position: 0-based character offset of the error
    """

    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        self.reason = message
        marker = f"\n  {text}\n  {' ' * position}^" if text else ""
        super().__init__(f"{message} at position {position}{marker}")


class UnknownIdentifierError(MsgeoError, ValueError):
    """An identifier is neither a legal coordinate name nor a declared parameter"""

    def __init__(self, name, position=None):
        self.name = name
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"unknown identifier '{name}'{where}")


class MissingAssignmentError(MsgeoError, KeyError):
    """Numeric evaluation was asked for without a value for some variable"""

    def __init__(self, names):
        self.names = sorted(names)
        super().__init__(f"no value assigned to: {', '.join(self.names)}")

    def __str__(self):
        return self.args[0]


class EvaluationDomainError(MsgeoError, ArithmeticError):
    """A function was evaluated outside its domain"""


class NonPolynomialError(MsgeoError, ValueError):
    """A coefficient required to be polynomial is not"""


class SingularHessianError(MsgeoError, ValueError):
    """The lagrangian is not regular where regularity is required"""


class SymbolicBranchUnavailableError(MsgeoError, ValueError):
    """The hamiltonian cannot be derived in closed form"""


class ConvergenceError(MsgeoError, RuntimeError):
    """An iterative solver did not reach its tolerance"""
    exit_code = 1


class PreconditionError(MsgeoError, ValueError):
    """An operation's precondition is not met by its input"""


class ProblemFileError(MsgeoError, ValueError):
    """
    Malformed problem file.

    Attributes:
        path: file the error refers to
        line: 1-based line number, or None when unknown
    """

    def __init__(self, reason, path="<problem>", line=None):
        self.reason = reason
        self.path = str(path)
        self.line = line
        location = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{location}: {reason}")
