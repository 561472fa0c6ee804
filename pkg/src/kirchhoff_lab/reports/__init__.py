"""Report schemas, conversion handlers and deterministic storage."""

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
from kirchhoff_lab.reports.storage import dumps_report, write_grid_csv, write_report

__all__ = [
    "ConstructionSummary",
    "DomainSummary",
    "EigenSummary",
    "ErrorDiagnostic",
    "NodeLocation",
    "PairSummary",
    "RunStatus",
    "SolveSummary",
    "TorsionSummary",
    "VerifyPairSummary",
    "dumps_report",
    "write_grid_csv",
    "write_report",
]
