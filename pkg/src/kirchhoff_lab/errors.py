# =============================================================================
# KIRCHHOFF LAB ERRORS
# Exception hierarchy with CLI exit codes
# =============================================================================
"""
Errors raised by the numerical modules.

Every error carries an ``exit_code`` used by the command-line entry point and a
``diagnostic`` dictionary that is serialized on standard error:

- 1: witness search failed
- 2: invalid input, configuration or precondition
- 3: numerical failure (range, mass, convergence)
"""

from typing import Any, Dict, Optional


class KirchhoffError(Exception):
    """Base class for all library errors."""

    exit_code: int = 2

    def __init__(self, message: str, diagnostic: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.diagnostic: Dict[str, Any] = dict(diagnostic or {})

    def to_dict(self) -> Dict[str, Any]:
        """Single-line diagnostic payload for the CLI."""
        return {"error": type(self).__name__, "message": self.message, **self.diagnostic}


# =============================================================================
# INVALID INPUT (exit 2)
# =============================================================================

class ConfigError(KirchhoffError):
    """Configuration file or flags are invalid."""


class DomainError(KirchhoffError):
    """Argument outside the domain of a function or family."""


class DomainMismatch(KirchhoffError):
    """Two grid functions live on different intervals."""


class NonMonotone(KirchhoffError):
    """An inversion was requested for a function that failed the monotonicity scan."""


class OrderViolated(KirchhoffError):
    """Lower function of an order interval exceeds the upper one."""


class BoundaryViolated(KirchhoffError):
    """Boundary sign condition lower <= 0 <= upper fails."""


class NotVerified(KirchhoffError):
    """Solver precondition (verified sub-supersolution pair) does not hold."""


class SchemeNotApplicable(KirchhoffError):
    """Iteration scheme requires a property the nonlinearity does not declare."""


class NoPositiveSolution(KirchhoffError):
    """Model parameters admit no positive solution."""


class LambdaTooLarge(KirchhoffError):
    """Parameter is at or above the estimated admissibility threshold."""


class LambdaBelowThreshold(KirchhoffError):
    """Parameter does not exceed the certified threshold."""


# =============================================================================
# NUMERICAL FAILURES (exit 3)
# =============================================================================

class OutOfRange(KirchhoffError):
    """Value not attained by a monotone function below the bracket cap."""

    exit_code = 3


class NegativeMass(KirchhoffError):
    """The integral of f(x,w)w falls below G(0); the nonlocal operator is undefined."""

    exit_code = 3


class NoConvergence(KirchhoffError):
    """Iteration did not converge within its budget."""

    exit_code = 3


class NoEpsilon(KirchhoffError):
    """Subsolution scale underflowed without satisfying its inequality."""

    exit_code = 3


# =============================================================================
# WITNESS FAILURE (exit 1)
# =============================================================================

class NoWitness(KirchhoffError):
    """Parameter search found no comparison counterexample."""

    exit_code = 1


__all__ = [
    "KirchhoffError",
    "ConfigError",
    "DomainError",
    "DomainMismatch",
    "NonMonotone",
    "OrderViolated",
    "BoundaryViolated",
    "NotVerified",
    "SchemeNotApplicable",
    "NoPositiveSolution",
    "LambdaTooLarge",
    "LambdaBelowThreshold",
    "OutOfRange",
    "NegativeMass",
    "NoConvergence",
    "NoEpsilon",
    "NoWitness",
]
