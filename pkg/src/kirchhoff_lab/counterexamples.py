# =============================================================================
# KIRCHHOFF LAB COUNTEREXAMPLES
# Witnesses against the comparison principle for nonlocal problems
# =============================================================================
"""
Numerical witnesses showing that the classical comparison inequality

    -M(|v|^2) Delta v >= -M(|u|^2) Delta u  in (0, pi)

does not force u <= v when M is not constant.

The pair is fixed: u = sin x and v = rho x (pi - x) on (0, pi). Both have
closed-form Laplacians (-Delta u = sin x, -Delta v = 2 rho) and squared
Dirichlet norms (pi/2 and rho^2 pi^3 / 3), so the inequality collapses to the
scalar condition

    M(pi/2) <= 2 rho M(rho^2 pi^3 / 3)

while u <= v fails at pi/2 for every rho below the maximum of
sin x / (x (pi - x)).

Two families of M = a + b (t + c)^p are searched: increasing (p > 0, large
b and p) and decreasing (p < 0, c > 0, very negative p).
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Iterable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, computed_field
from scipy.optimize import minimize_scalar

from kirchhoff_lab.errors import DomainError, NoWitness
from kirchhoff_lab.grid import GridFunction, Interval, norm_sq_h1
from kirchhoff_lab.kirchhoff import FamilyKind, KirchhoffM, eval_M
from kirchhoff_lab.subsuper import comparison_margin

logger = logging.getLogger(__name__)

HALF_PI = math.pi / 2.0
PI_CUBED_THIRD = math.pi**3 / 3.0
RHO_STANDOFF = 1e-6
DEFAULT_WITNESS_NODES = 4001
NORM_CHECK_TOL = 1e-4
# covers pi/2 and rho^2 pi^3/3 for rho < rho_star, grid norms included
WITNESS_SCAN_MAX = 4.0


# =============================================================================
# RECORDS
# =============================================================================

class CondiCheck(BaseModel):
    """Scalar form of the comparison inequality for the fixed pair."""

    holds: bool
    lhs: float = Field(..., description="M(pi/2)")
    rhs: float = Field(..., description="2 rho M(rho^2 pi^3 / 3)")
    margin: float = Field(..., description="rhs - lhs")


class CounterexampleWitness(BaseModel):
    """A candidate counterexample with its analytic and discrete checks."""

    a: float
    b: float
    c: float
    p: float
    rho: float
    condi_lhs: float
    condi_rhs: float
    condi_margin: float
    order_violation_gap: float = Field(..., description="Max over nodes of sin x - rho x (pi - x)")
    order_violation_x: float
    differential_margin_min: float = Field(..., description="Min over interior nodes, analytic Laplacians and norms")
    discrete_margin_min: float = Field(..., description="Same quantity with grid Laplacians and grid norms")
    norm_error_lower: float = Field(..., description="|pi/2 - grid norm of sin|")
    norm_error_upper: float = Field(..., description="|rho^2 pi^3/3 - grid norm of rho x (pi - x)|")
    n: int
    case: Optional[int] = None
    scalar_test: Optional[float] = None
    b_threshold: Optional[float] = None

    @computed_field
    @property
    def valid(self) -> bool:
        return (self.condi_margin >= 0 and self.order_violation_gap > 0
                and self.differential_margin_min >= 0
                and self.norm_error_lower <= NORM_CHECK_TOL
                and self.norm_error_upper <= NORM_CHECK_TOL)


# =============================================================================
# EXACT QUANTITIES
# =============================================================================

def sin_parabola_ratio(x):
    """sin x / (x (pi - x)), extended by its limit 1/pi at both endpoints."""
    x = np.asarray(x, dtype=float)
    denom = x * (math.pi - x)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(denom > 0, np.sin(x) / np.where(denom > 0, denom, 1.0), 1.0 / math.pi)
    return float(ratio) if ratio.ndim == 0 else ratio


def rho_star() -> float:
    """Maximum of sin x / (x (pi - x)) on (0, pi); equals 4/pi^2."""
    # bracket is symmetric about the maximizer pi/2
    res = minimize_scalar(
        lambda x: -sin_parabola_ratio(x),
        bracket=(0.5, HALF_PI, math.pi - 0.5),
        method="golden",
        options={"xtol": 1e-10},
    )
    return float(-res.fun)


def _params(m: KirchhoffM) -> Tuple[float, float, float, float]:
    if m.family is FamilyKind.POWER_SHIFT:
        return m.a, m.b, m.c, m.p
    if m.family is FamilyKind.CONSTANT:
        return m.value, 0.0, 0.0, 0.0
    return math.nan, math.nan, math.nan, math.nan


def condi_check(m: KirchhoffM, rho: float) -> CondiCheck:
    """M(pi/2) <= 2 rho M(rho^2 pi^3 / 3)."""
    if not rho > 0:
        raise DomainError("rho must be positive", {"rho": rho})
    lhs = eval_M(m, HALF_PI)
    rhs = 2.0 * rho * eval_M(m, rho * rho * PI_CUBED_THIRD)
    margin = rhs - lhs
    return CondiCheck(holds=margin >= 0, lhs=lhs, rhs=rhs, margin=margin)


def case1_scalar_test(p: float) -> float:
    """(8/pi^2) (32/(3 pi^2))^p; a witness family exists for large b once this exceeds 1."""
    return (8.0 / math.pi**2) * (32.0 / (3.0 * math.pi**2)) ** p


def minimal_case1_p(p_max: int = 64) -> int:
    """Smallest integer p >= 1 passing the scalar test."""
    for p in range(1, p_max + 1):
        if case1_scalar_test(p) > 1.0:
            return p
    raise NoWitness("scalar test fails for every p in range", {"p_max": p_max})


def case2_coefficient(a: float, c: float, rho: float, p: float) -> Tuple[float, float]:
    """
    D(p) = 2 rho (rho^2 pi^3/3 + c)^p - (pi/2 + c)^p and the smallest b with
    a (1 - 2 rho) <= b D(p); the threshold is +inf when D(p) <= 0.
    """
    d = 2.0 * rho * (rho * rho * PI_CUBED_THIRD + c) ** p - (HALF_PI + c) ** p
    threshold = a * (1.0 - 2.0 * rho) / d if d > 0 else math.inf
    return d, threshold


def condi_margin_scan(m_factory: Callable[[float], KirchhoffM], rho: float,
                      p_values: Iterable[float]) -> np.ndarray:
    """Condition margins along a sequence of exponents."""
    return np.array([condi_check(m_factory(p), rho).margin for p in p_values])


# =============================================================================
# POINTWISE VERIFICATION
# =============================================================================

def pointwise_verify(m: KirchhoffM, rho: float, n: int = DEFAULT_WITNESS_NODES) -> CounterexampleWitness:
    """
    Check the comparison inequality at every node and locate the largest
    order violation.

    A failed candidate is reported with negative margins, not raised.
    """
    if not rho > 0:
        raise DomainError("rho must be positive", {"rho": rho})
    if n < 3:
        raise DomainError("pointwise verification needs n >= 3", {"n": n})

    domain = Interval(a=0.0, b=math.pi, n=n)
    lower = GridFunction.from_callable(domain, np.sin)
    upper = GridFunction.from_callable(domain, lambda x: rho * x * (math.pi - x))
    # exact endpoints: sin(pi) is not 0 in floating point
    lower = GridFunction(domain, np.r_[0.0, lower.interior, 0.0])

    norm_lower = HALF_PI
    norm_upper = rho * rho * PI_CUBED_THIRD
    condi = condi_check(m, rho)

    mu_lower = eval_M(m, norm_lower)
    mu_upper = eval_M(m, norm_upper)
    x_inner = lower.x[1:-1]
    differential = mu_upper * 2.0 * rho - mu_lower * np.sin(x_inner)

    gap = lower.values - upper.values
    worst = int(np.argmax(gap))

    discrete = comparison_margin(lower, upper, m)

    witness = CounterexampleWitness(
        **dict(zip(("a", "b", "c", "p"), _params(m))),
        rho=rho,
        condi_lhs=condi.lhs,
        condi_rhs=condi.rhs,
        condi_margin=condi.margin,
        order_violation_gap=float(gap[worst]),
        order_violation_x=float(lower.x[worst]),
        differential_margin_min=float(np.min(differential)),
        discrete_margin_min=float(np.min(discrete.interior)),
        norm_error_lower=abs(norm_lower - norm_sq_h1(lower)),
        norm_error_upper=abs(norm_upper - norm_sq_h1(upper)),
        n=n,
    )
    status = "✅ valid" if witness.valid else "❌ invalid"
    logger.info(f"🔎 Witness rho={rho:.6g}: {status} (condi margin {condi.margin:.6g}, "
                f"order gap {witness.order_violation_gap:.3g})")
    return witness


# =============================================================================
# SEARCHES
# =============================================================================

def search_case1(
    b: float,
    p_range: Tuple[int, int] = (1, 6),
    rho_grid: int = 1000,
    a: float = 1.0,
    c: float = 0.0,
    n: int = DEFAULT_WITNESS_NODES,
) -> CounterexampleWitness:
    """
    Increasing family: smallest integer p, then smallest rho on the uniform
    grid (rho_star - 1e-6) k / rho_grid, k = 1..rho_grid.
    """
    if not b > 0:
        raise DomainError("case 1 needs b > 0", {"b": b})
    if rho_grid < 1:
        raise DomainError("rho grid needs at least one point", {"rho_grid": rho_grid})
    p_lo, p_hi = int(p_range[0]), int(p_range[1])
    rhos = (rho_star() - RHO_STANDOFF) * np.arange(1, rho_grid + 1) / rho_grid

    for p in range(max(p_lo, 1), p_hi + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            lhs = a + b * np.power(HALF_PI + c, float(p))
            rhs = 2.0 * rhos * (a + b * np.power(rhos * rhos * PI_CUBED_THIRD + c, float(p)))
            margin = rhs - lhs
        hits = np.flatnonzero(np.isfinite(margin) & (margin >= 0))
        if hits.size == 0:
            logger.debug(f"🔎 Case 1: p={p} has no admissible rho")
            continue
        try:
            m = KirchhoffM.power_shift(a, b, c, p, scan_max=WITNESS_SCAN_MAX)
        except DomainError:
            logger.debug(f"🔎 Case 1: p={p} overflows on [0, {WITNESS_SCAN_MAX:g}]")
            continue
        witness = pointwise_verify(m, float(rhos[hits[0]]), n)
        if witness.valid:
            return witness.model_copy(update={"case": 1, "scalar_test": case1_scalar_test(p)})

    raise NoWitness(
        "no case 1 witness in the searched range",
        {"b": b, "a": a, "c": c, "p_range": [p_lo, p_hi], "rho_grid": rho_grid},
    )


def search_case2(
    a: float,
    c: float,
    rho: float,
    p_range: Tuple[int, int] = (1, 10),
    b_range: Tuple[float, float] = (1e-2, 1e8),
    b_per_decade: int = 10,
    n: int = DEFAULT_WITNESS_NODES,
) -> CounterexampleWitness:
    """
    Decreasing family: smallest integer |p| in ``p_range`` (p = -|p|), then
    smallest b on a logarithmic grid with ``b_per_decade`` points per decade.
    """
    if not (a > 0 and c > 0):
        raise DomainError("case 2 needs a > 0 and c > 0", {"a": a, "c": c})
    if not 0.0 < rho < 0.5:
        raise DomainError("case 2 needs 0 < rho < 1/2", {"rho": rho})
    if b_per_decade < 1 or not 0 < b_range[0] < b_range[1]:
        raise DomainError("invalid b grid", {"b_range": list(b_range), "b_per_decade": b_per_decade})

    j_lo = math.ceil(math.log10(b_range[0]) * b_per_decade - 1e-9)
    j_hi = math.floor(math.log10(b_range[1]) * b_per_decade + 1e-9)
    b_grid = 10.0 ** (np.arange(j_lo, j_hi + 1) / b_per_decade)

    p_lo, p_hi = int(p_range[0]), int(p_range[1])
    for k in range(max(p_lo, 1), p_hi + 1):
        p = -float(k)
        d, threshold = case2_coefficient(a, c, rho, p)
        if not math.isfinite(threshold):
            logger.debug(f"🔎 Case 2: p={p:g} has D={d:.3g} <= 0")
            continue
        for b in b_grid[b_grid >= threshold * (1.0 - 1e-12)]:
            m = KirchhoffM.power_shift(a, float(b), c, p)
            if not condi_check(m, rho).holds:
                continue
            witness = pointwise_verify(m, rho, n)
            if witness.valid:
                return witness.model_copy(update={"case": 2, "b_threshold": threshold})
            break

    raise NoWitness(
        "no case 2 witness in the searched range",
        {"a": a, "c": c, "rho": rho, "p_range": [p_lo, p_hi],
         "b_range": list(b_range), "b_per_decade": b_per_decade},
    )


__all__ = [
    "CondiCheck",
    "CounterexampleWitness",
    "sin_parabola_ratio",
    "rho_star",
    "condi_check",
    "case1_scalar_test",
    "minimal_case1_p",
    "case2_coefficient",
    "condi_margin_scan",
    "pointwise_verify",
    "search_case1",
    "search_case2",
]
