# =============================================================================
# KIRCHHOFF LAB REPORT HANDLERS
# Conversion of numerical results into report models
# =============================================================================
"""
Handlers turning domain results into report models.

Each handler is a pure function: it reads a result object and returns the
matching pydantic summary. Nothing here runs numerics beyond cheap norms.
"""

import logging
import math
from typing import Optional

from kirchhoff_lab.errors import KirchhoffError, NotVerified
from kirchhoff_lab.grid import GridFunction, integrate, norm_sq_h1
from kirchhoff_lab.kirchhoff import KirchhoffM
from kirchhoff_lab.models import PairConstruction
from kirchhoff_lab.reports.models import (
    ConstructionSummary,
    DomainSummary,
    EigenSummary,
    ErrorDiagnostic,
    NodeLocation,
    PairSummary,
    RunStatus,
    SolveSummary,
    TorsionSummary,
    VerifyPairSummary,
)
from kirchhoff_lab.solver import SolveReport
from kirchhoff_lab.spectral import EigenPair
from kirchhoff_lab.subsuper import OrderInterval, PairReport

logger = logging.getLogger(__name__)


def _finite_or_none(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None


def _center(u: GridFunction) -> float:
    return float(u.values[u.domain.n // 2])


# =============================================================================
# PAIRS
# =============================================================================

def summarize_pair(pair: OrderInterval, report: PairReport) -> PairSummary:
    """
    Summarize a pair verification.

    Args:
        pair: the verified order interval
        report: outcome of verify_pair

    Returns:
        PairSummary with the certified coefficient range and worst margins
    """
    x = pair.lower.x
    mr = report.m_range
    node_sup, gap_sup = report.worst_super
    node_sub, gap_sub = report.worst_sub
    return PairSummary(
        ok=report.ok,
        mu_min=mr.mu_min,
        mu_max=mr.mu_max,
        s_min=_finite_or_none(mr.s_min),
        s_max=_finite_or_none(mr.s_max),
        worst_super_margin=gap_sup,
        worst_sub_margin=gap_sub,
        worst_nodes={
            "super": NodeLocation(node=node_sup, x=float(x[node_sup])),
            "sub": NodeLocation(node=node_sub, x=float(x[node_sub])),
        },
    )


def summarize_construction(construction: PairConstruction, m: KirchhoffM) -> ConstructionSummary:
    pair_summary = None
    if construction.report is not None:
        pair_summary = summarize_pair(construction.pair, construction.report)
    return ConstructionSummary(
        model=construction.nonlinearity.describe(),
        kirchhoff=m.describe(),
        epsilon=construction.epsilon,
        K=construction.K,
        mu_max_used=construction.mu_max_used,
        feasible=construction.feasible,
        threshold_info=dict(construction.threshold_info),
        pair=pair_summary,
    )


def summarize_verification(construction: PairConstruction, m: KirchhoffM) -> VerifyPairSummary:
    """Pair summary at top level with the construction constants nested under it."""
    if construction.report is None:
        raise NotVerified("construction carries no pair report", {"feasible": construction.feasible})
    pair_summary = summarize_pair(construction.pair, construction.report)
    construction_summary = summarize_construction(construction, m).model_copy(update={"pair": None})
    return VerifyPairSummary(**pair_summary.model_dump(), construction=construction_summary)


# =============================================================================
# SOLVES
# =============================================================================

def summarize_solve(
    report: SolveReport,
    construction: Optional[PairConstruction] = None,
    m: Optional[KirchhoffM] = None,
    output_path: Optional[str] = None,
) -> SolveSummary:
    """
    Summarize a solve run.

    Args:
        report: outcome of solve_in_interval or solve_local
        construction: pair construction the solve ran in, if any
        m: Kirchhoff function, needed to summarize the construction
        output_path: where the solution file was written

    Returns:
        SolveSummary with status ok or not_converged
    """
    construction_summary = None
    if construction is not None and m is not None:
        construction_summary = summarize_construction(construction, m)
    return SolveSummary(
        status=RunStatus.OK if report.converged else RunStatus.NOT_CONVERGED,
        converged=report.converged,
        iterations=report.iterations,
        scheme=report.scheme.value,
        shift_c=report.shift_c,
        r_value=report.r_value,
        norm_sq=norm_sq_h1(report.u),
        mu=report.mu,
        residual_sup=report.residual_sup,
        residual_original_sup=report.residual_original_sup,
        self_consistency_gap=report.self_consistency_gap,
        in_interval=report.in_interval,
        monotone_violations=report.monotone_violations,
        u_sup=report.u.sup_norm(),
        u_center=_center(report.u),
        last_step=report.step_history[-1] if report.step_history else None,
        construction=construction_summary,
        output_path=output_path,
    )


# =============================================================================
# SPECTRAL
# =============================================================================

def _domain(u: GridFunction) -> DomainSummary:
    return DomainSummary(a=u.domain.a, b=u.domain.b)


def summarize_eigen(eig: EigenPair, output_path: Optional[str] = None) -> EigenSummary:
    return EigenSummary(lambda1=eig.lambda1, n=eig.phi1.domain.n, domain=_domain(eig.phi1),
                        iterations=eig.iterations, residual_sup=eig.residual_sup,
                        phi1_center=_center(eig.phi1), output_path=output_path)


def summarize_torsion(e: GridFunction, output_path: Optional[str] = None) -> TorsionSummary:
    return TorsionSummary(sup_e=e.sup_norm(), n=e.domain.n, domain=_domain(e), center=_center(e),
                          norm_sq=norm_sq_h1(e), integral=integrate(e), output_path=output_path)


# =============================================================================
# ERRORS
# =============================================================================

def summarize_error(exc: Exception) -> ErrorDiagnostic:
    """Diagnostic payload for a library error or any other exception."""
    if isinstance(exc, KirchhoffError):
        return ErrorDiagnostic(**exc.to_dict(), exit_code=exc.exit_code)
    logger.debug(f"⚠️ Unexpected {type(exc).__name__} summarized as a generic failure")
    return ErrorDiagnostic(error=type(exc).__name__, message=str(exc), exit_code=KirchhoffError.exit_code)


__all__ = [
    "summarize_pair",
    "summarize_construction",
    "summarize_verification",
    "summarize_solve",
    "summarize_eigen",
    "summarize_torsion",
    "summarize_error",
]
