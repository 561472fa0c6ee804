# =============================================================================
# KIRCHHOFF LAB REPORT MODELS
# Pydantic models for every JSON document the CLI emits
# =============================================================================
"""
Report schemas for the Kirchhoff lab command line.

These Pydantic models define the structure for:
- Pair verification summaries (margins and certified coefficient range)
- Pair construction summaries (scales and thresholds)
- Solve summaries (convergence, residuals, self-consistency)
- Spectral summaries (eigenpair and torsion function)
- Error diagnostics written to standard error
"""

from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field


# =============================================================================
# ENUMS
# =============================================================================

class RunStatus(str, Enum):
    """Overall outcome of a command."""
    OK = "ok"
    REJECTED = "rejected"
    NOT_CONVERGED = "not_converged"
    FAILED = "failed"


# =============================================================================
# PAIR MODELS
# =============================================================================

class NodeLocation(BaseModel):
    """Grid node where a margin is attained."""

    node: int
    x: float


class PairSummary(BaseModel):
    """
    Result of checking the sub-supersolution inequalities.

    Margins are nonnegative where an inequality holds. worst_nodes maps
    "super" and "sub" to the node attaining the matching worst margin.
    """

    ok: bool = Field(..., description="Both inequalities hold at every interior node")
    mu_min: float = Field(..., description="Lower bound of M(R(w))")
    mu_max: float = Field(..., description="Upper bound of M(R(w))")
    s_min: Optional[float] = Field(None, description="Lower bound of the integral of f(x,w)w")
    s_max: Optional[float] = Field(None, description="Upper bound of the integral of f(x,w)w")
    worst_super_margin: float = Field(..., description="Smallest supersolution margin")
    worst_sub_margin: float = Field(..., description="Smallest subsolution margin")
    worst_nodes: Dict[str, NodeLocation]

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "ok": True,
                "mu_min": 1.0,
                "mu_max": 1.62,
                "s_min": 0.0,
                "s_max": 0.62,
                "worst_super_margin": 1.2e-9,
                "worst_sub_margin": 3.1e-7,
                "worst_nodes": {
                    "super": {"node": 1000, "x": 1.5708},
                    "sub": {"node": 1, "x": 0.0016},
                },
            }
        }
    )


class ConstructionSummary(BaseModel):
    """Constants behind a constructed pair."""

    model: Dict[str, Any] = Field(..., description="Reaction model parameters")
    kirchhoff: Dict[str, Any] = Field(..., description="Kirchhoff function parameters")
    epsilon: float
    K: float
    mu_max_used: float
    feasible: bool
    threshold_info: Dict[str, Any] = Field(default_factory=dict)
    pair: Optional[PairSummary] = None


class VerifyPairSummary(PairSummary):
    """Pair verification with the construction it came from."""

    construction: ConstructionSummary

# =============================================================================
# SOLVE MODELS
# =============================================================================

class SolveSummary(BaseModel):
    """Outcome of a solve run."""

    status: RunStatus
    converged: bool
    iterations: int
    scheme: str
    shift_c: float
    r_value: float = Field(..., description="R(u), the squared norm implied by the nonlocal term")
    norm_sq: float = Field(..., description="Grid squared Dirichlet norm of u")
    mu: float = Field(..., description="M(R(u))")
    residual_sup: float = Field(..., description="Residual of the transformed local problem")
    residual_original_sup: float = Field(..., description="Residual of the nonlocal form")
    self_consistency_gap: float
    in_interval: bool
    monotone_violations: int = 0
    u_sup: float
    u_center: float = Field(..., description="u at the middle node")
    last_step: Optional[float] = None
    construction: Optional[ConstructionSummary] = None
    output_path: Optional[str] = None


# =============================================================================
# SPECTRAL MODELS
# =============================================================================

class DomainSummary(BaseModel):
    """Interval endpoints."""

    a: float
    b: float


class EigenSummary(BaseModel):
    """Principal Dirichlet eigenpair on the grid."""

    lambda1: float
    n: int
    domain: DomainSummary
    iterations: int
    residual_sup: float
    phi1_center: float
    output_path: Optional[str] = None


class TorsionSummary(BaseModel):
    """Torsion function on the grid."""

    sup_e: float = Field(..., description="Sup norm of the torsion function")
    n: int
    domain: DomainSummary
    center: float
    norm_sq: float = Field(..., description="Grid squared Dirichlet norm")
    integral: float
    output_path: Optional[str] = None


# =============================================================================
# ERRORS
# =============================================================================

class ErrorDiagnostic(BaseModel):
    """Single-line error payload; diagnostic keys are carried as extra fields."""

    model_config = ConfigDict(extra="allow")

    error: str
    message: str
    exit_code: int


__all__ = [
    "RunStatus",
    "NodeLocation",
    "PairSummary",
    "ConstructionSummary",
    "VerifyPairSummary",
    "SolveSummary",
    "DomainSummary",
    "EigenSummary",
    "TorsionSummary",
    "ErrorDiagnostic",
]
