"""Exception types shared across the package."""


class ReasonerError(Exception):
    """Base class for every error this package raises deliberately."""


class ParseError(ReasonerError):
    """Syntax error in a formula, knowledge-base file, query or sentence."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + where)


class VocabularyError(ReasonerError):
    """An atom was used outside the vocabulary that should cover it."""


class BoundRangeError(ReasonerError):
    """A numeric bound fell outside the closed interval [0, 1]."""


class MixedKindError(ReasonerError):
    """Defaults and likelihoods were mixed where a homogeneous set is required."""


class PreconditionViolation(ReasonerError):
    """Bound preconditions of the decision procedures do not hold."""


class InconsistentPremises(ReasonerError):
    """A consequence test was asked about premises that are themselves inconsistent."""


class DegenerateBound(ReasonerError):
    """Bound combination is undefined for the given inputs (e.g. both zero)."""


class CaseExplosion(ReasonerError):
    """Likelihood case splitting exceeded the configured budget."""


class OracleBudgetExceeded(ReasonerError):
    """The requested oracle computation exceeds the configured atom budget."""


class GoalImpossible(ReasonerError):
    """A tight-bound query conditions on an event the premises force to probability zero."""
