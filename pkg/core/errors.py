"""Error classes raised by the engine.

Every error carries a stable ``code`` (used in JSON error output) and the
process ``exit_code`` the CLI maps it to.
"""

from typing import Optional, Tuple


class EngineError(ValueError):
    """Base class for all engine errors."""

    code = "engine_error"
    exit_code = 1

    def __init__(
        self,
        message: str,
        position: Optional[Tuple[int, int]] = None,
    ) -> None:
        self.message = message
        self.position = position
        super().__init__(message)

    def to_payload(self) -> dict:
        """Machine-readable form for the CLI's JSON error output."""
        return {
            "error": self.code,
            "message": self.message,
            "position": list(self.position) if self.position else None,
        }


# Parse errors (exit code 2)


class ParseError(EngineError):
    """Malformed expression; ``position`` is a (start, end) column span."""

    code = "syntax_error"
    exit_code = 2


class UnknownSymbol(ParseError):
    code = "unknown_symbol"


# Precondition errors (exit code 3)


class PreconditionFailed(EngineError):
    code = "precondition_failed"
    exit_code = 3


class ContextMismatch(PreconditionFailed):
    code = "context_mismatch"


class NotInfinitesimal(PreconditionFailed):
    code = "not_infinitesimal"


class ZeroWeightStep(PreconditionFailed):
    code = "zero_weight_step"


class DepthRequired(PreconditionFailed):
    code = "depth_required"


class NonPositive(PreconditionFailed):
    code = "non_positive"


class IrrationalScalarPower(PreconditionFailed):
    code = "irrational_scalar_power"


class IrrationalRoot(PreconditionFailed):
    code = "irrational_root"


class CMinusOne(PreconditionFailed):
    code = "c_minus_one"


class NonPositiveC(PreconditionFailed):
    code = "non_positive_c"


class MissingSpec(PreconditionFailed):
    code = "missing_spec"


class DegenerateY(PreconditionFailed):
    code = "degenerate_y"


class MissingRule(PreconditionFailed):
    code = "missing_rule"


class EngineZeroDivision(PreconditionFailed, ZeroDivisionError):
    code = "zero_division"


# Solver outcomes


class NoConvergence(EngineError):
    code = "no_convergence"
    exit_code = 4


class Inconclusive(EngineError):
    """A decision depends on terms at or beyond a reliability bound."""

    code = "inconclusive"
    exit_code = 5
