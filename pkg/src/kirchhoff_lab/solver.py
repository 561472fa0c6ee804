# =============================================================================
# KIRCHHOFF LAB SOLVER
# Truncated fixed-point iteration inside a verified order interval
# =============================================================================
"""
Solvers for the transformed local problem

    -Delta u = f(x, u) / M(R(u)),  u = 0 on the boundary

inside a verified interval [lower, upper], and the semi-analytic solver for a
constant right-hand side.

Every iterate is truncated onto the interval before f and M(R(.)) are
evaluated, so the coefficient stays inside the certified mu-range.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from kirchhoff_lab.errors import DomainError, NotVerified, SchemeNotApplicable
from kirchhoff_lab.grid import (
    GridFunction,
    Interval,
    clip,
    integrate,
    laplacian,
    norm_sq_h1,
    residual_interior,
    solve_poisson,
)
from kirchhoff_lab.kirchhoff import KirchhoffM, Monotonicity, eval_M, invert_H, nonlocal_R
from kirchhoff_lab.nonlinearity import Nonlinearity
from kirchhoff_lab.spectral import torsion
from kirchhoff_lab.subsuper import MRange, OrderInterval, verify_pair

logger = logging.getLogger(__name__)

MONOTONE_SLACK = 1e-12
INTERVAL_SLACK = 1e-10
SHIFT_SAFETY = 1.1
SHIFT_LEVELS = 33


class Scheme(str, Enum):
    """Iteration schemes."""
    MONOTONE_FROM_BELOW = "monotone_from_below"
    MONOTONE_FROM_ABOVE = "monotone_from_above"
    PICARD = "picard"
    SHIFTED = "shifted"


class SolveConfig(BaseModel):
    """Stopping rule and scheme selection."""

    model_config = ConfigDict(extra="forbid")

    tol_step: float = Field(1e-10, gt=0, description="Sup-norm bound on successive iterates")
    tol_residual: float = Field(1e-8, gt=0, description="Sup-norm bound on the interior residual")
    max_iter: int = Field(500, ge=1, description="Iteration budget")
    scheme: Scheme = Field(Scheme.PICARD, description="Iteration scheme")
    shift_c: Optional[float] = Field(None, ge=0, description="Shift for the shifted scheme; estimated when omitted")
    record_iterates: bool = Field(False, description="Keep every iterate in the report")


@dataclass
class SolveReport:
    """Outcome of an iteration; ``converged`` is False when the budget ran out."""

    converged: bool
    iterations: int
    u: GridFunction
    r_value: float
    mu: float
    residual_sup: float
    residual_original_sup: float
    self_consistency_gap: float
    in_interval: bool
    scheme: Scheme = Scheme.PICARD
    shift_c: float = 0.0
    step_history: List[float] = field(default_factory=list)
    iterates: List[GridFunction] = field(default_factory=list)
    monotone_violations: int = 0


# =============================================================================
# SHIFT ESTIMATE
# =============================================================================

def estimate_shift(pair: OrderInterval, f: Nonlinearity, m0: float) -> float:
    """
    Sampled bound of |d f / d u| over the interval, divided by m0, times 1.1.

    Slopes are finite differences on SHIFT_LEVELS values per interior node;
    degenerate nodes get a small symmetric window.
    """
    if not m0 > 0:
        raise DomainError("shift estimate needs m0 > 0", {"m0": m0})
    x = pair.lower.x[1:-1]
    lo = pair.lower.interior
    hi = pair.upper.interior
    width = np.maximum(hi - lo, 1e-8 * (1.0 + np.abs(hi)))
    theta = np.linspace(0.0, 1.0, SHIFT_LEVELS)
    u = lo[:, None] + width[:, None] * theta[None, :]
    values = f(x[:, None], u)
    slopes = np.abs(np.diff(values, axis=1)) / np.diff(u, axis=1)
    bound = float(np.max(slopes)) if slopes.size else 0.0
    shift = SHIFT_SAFETY * bound / m0
    logger.debug(f"🧮 Estimated shift c = {shift:.6g} (|df/du| <= {bound:.6g})")
    return shift


# =============================================================================
# ITERATION
# =============================================================================

def _start(pair: OrderInterval, scheme: Scheme) -> GridFunction:
    if scheme is Scheme.MONOTONE_FROM_BELOW:
        return pair.lower
    if scheme is Scheme.MONOTONE_FROM_ABOVE:
        return pair.upper
    return GridFunction(pair.domain, 0.5 * (pair.lower.values + pair.upper.values))


def _interior_sup(values: np.ndarray) -> float:
    return float(np.max(np.abs(values))) if values.size else 0.0


def _iterate(
    pair: OrderInterval,
    f: Nonlinearity,
    coefficient: Callable[[GridFunction], tuple],
    cfg: SolveConfig,
    shift: float,
    m_of_norm: Callable[[float], float],
) -> SolveReport:
    """
    Shared loop. ``coefficient(w)`` returns (r_value, mu) for a truncated
    iterate; ``m_of_norm(t)`` is the coefficient of the original form at
    |u|^2 = t.
    """
    scheme = cfg.scheme
    v = _start(pair, scheme)
    x = v.x
    steps: List[float] = []
    iterates: List[GridFunction] = [v] if cfg.record_iterates else []
    violations = 0
    converged = False
    iteration = 0

    for iteration in range(1, cfg.max_iter + 1):
        tv = clip(v, pair.lower, pair.upper)
        _, mu = coefficient(tv)
        rhs = f(x, tv.values) / mu
        if shift > 0:
            rhs = rhs + shift * tv.values
        v_next = solve_poisson(GridFunction(v.domain, rhs), shift=shift)

        step = float(np.max(np.abs(v_next.values - v.values)))
        steps.append(step)
        if scheme is Scheme.MONOTONE_FROM_BELOW:
            violations += int(np.count_nonzero(v_next.values < v.values - MONOTONE_SLACK))
        v = v_next
        if cfg.record_iterates:
            iterates.append(v)

        if step <= cfg.tol_step:
            residual = _residual(v, f, coefficient)
            if residual <= cfg.tol_residual:
                converged = True
                break

    r_value, mu = coefficient(clip(v, pair.lower, pair.upper))
    residual = _residual(v, f, coefficient)
    norm_sq = norm_sq_h1(v)
    fu = integrate(GridFunction(v.domain, f.product(x, clip(v, pair.lower, pair.upper).values)))
    m_norm = m_of_norm(norm_sq)
    original = -m_norm * laplacian(v).interior - f(x[1:-1], v.interior)

    report = SolveReport(
        converged=converged,
        iterations=iteration,
        u=v,
        r_value=r_value,
        mu=mu,
        residual_sup=residual,
        residual_original_sup=_interior_sup(original),
        self_consistency_gap=abs(m_norm * norm_sq - fu),
        in_interval=pair.contains(v, INTERVAL_SLACK),
        scheme=scheme,
        shift_c=shift,
        step_history=steps,
        iterates=iterates,
        monotone_violations=violations,
    )
    if converged:
        logger.info(f"✅ {scheme.value} converged in {iteration} iterations "
                    f"(residual {residual:.3g}, mu {mu:.6g})")
    else:
        logger.warning(f"⚠️  {scheme.value} stopped after {iteration} iterations "
                       f"(last step {steps[-1]:.3g}, residual {residual:.3g})")
    return report


def _residual(v: GridFunction, f: Nonlinearity, coefficient) -> float:
    _, mu = coefficient(v)
    return _interior_sup(residual_interior(v, GridFunction(v.domain, f(v.x, v.values) / mu)))


_MONOTONE_SCHEMES = (Scheme.MONOTONE_FROM_BELOW, Scheme.MONOTONE_FROM_ABOVE)


def _check_scheme(f: Nonlinearity, cfg: SolveConfig, m: Optional[KirchhoffM] = None) -> None:
    if cfg.scheme not in _MONOTONE_SCHEMES:
        return
    if not f.nondecreasing:
        raise SchemeNotApplicable(
            f"{cfg.scheme.value} needs f nondecreasing in u",
            {"scheme": cfg.scheme.value, "monotone_hint": f.monotone_hint.value},
        )
    # iterates stay ordered only while M(R(.)) does not grow with u
    if m is not None and m.monotonicity is not Monotonicity.NONINCREASING:
        raise SchemeNotApplicable(
            f"{cfg.scheme.value} needs M constant or nonincreasing",
            {"scheme": cfg.scheme.value, "monotonicity": m.monotonicity.value},
        )


def _reject(report) -> None:
    node_sup, gap_sup = report.worst_super
    node_sub, gap_sub = report.worst_sub
    raise NotVerified(
        "pair does not satisfy the sub-supersolution inequalities",
        {"super_margin": gap_sup, "super_node": node_sup,
         "sub_margin": gap_sub, "sub_node": node_sub,
         "mu_min": report.m_range.mu_min, "mu_max": report.m_range.mu_max},
    )


def solve_in_interval(
    pair: OrderInterval,
    m: KirchhoffM,
    f: Nonlinearity,
    cfg: Optional[SolveConfig] = None,
) -> SolveReport:
    """
    Solve the nonlocal problem inside a verified pair.

    Raises NotVerified when the pair fails verification and
    SchemeNotApplicable for a monotone scheme unless f is nondecreasing and
    M is constant or nonincreasing. Running out of iterations is reported
    through ``converged``.
    """
    cfg = cfg or SolveConfig()
    _check_scheme(f, cfg, m)
    check = verify_pair(pair, m, f)
    if not check.ok:
        _reject(check)

    def coefficient(w: GridFunction) -> tuple:
        r = nonlocal_R(m, f, w)
        return r, eval_M(m, r)

    shift = 0.0
    if cfg.scheme is Scheme.SHIFTED:
        shift = cfg.shift_c if cfg.shift_c is not None else estimate_shift(pair, f, m.m0)

    logger.info(f"🔄 Solving with {cfg.scheme.value} on n={pair.domain.n}")
    return _iterate(pair, f, coefficient, cfg, shift, lambda t: eval_M(m, t))


def solve_local(
    pair: OrderInterval,
    f: Nonlinearity,
    mu: float,
    cfg: Optional[SolveConfig] = None,
) -> SolveReport:
    """Same iteration with M(R(.)) frozen at ``mu``: the classical local problem."""
    if not mu > 0:
        raise DomainError("local coefficient must be positive", {"mu": mu})
    cfg = cfg or SolveConfig()
    _check_scheme(f, cfg)
    fixed = MRange(s_min=math.nan, s_max=math.nan, r_min=math.nan, r_max=math.nan,
                   mu_min=mu, mu_max=mu)
    check = verify_pair(pair, None, f, m_range=fixed)
    if not check.ok:
        _reject(check)

    shift = 0.0
    if cfg.scheme is Scheme.SHIFTED:
        shift = cfg.shift_c if cfg.shift_c is not None else estimate_shift(pair, f, mu)

    return _iterate(pair, f, lambda w: (norm_sq_h1(w), mu), cfg, shift, lambda t: mu)


# =============================================================================
# CONSTANT RIGHT-HAND SIDE
# =============================================================================

def solve_constant_rhs(fbar: float, m: KirchhoffM, domain: Interval) -> GridFunction:
    """
    Solution of -M(|u|^2) Delta u = fbar as a multiple of the torsion function.

    With u = t e the problem reduces to H(s) = fbar |e|, s = |u|, and then
    u = (fbar / M(s^2)) e.
    """
    if not fbar > 0:
        raise DomainError("constant right-hand side must be positive", {"fbar": fbar})
    e = torsion(domain)
    norm_e = math.sqrt(norm_sq_h1(e))
    s = invert_H(m, fbar * norm_e)
    u = e.scale(fbar / eval_M(m, s * s))
    gap = abs(math.sqrt(norm_sq_h1(u)) - s)
    if gap > 1e-6:
        logger.warning(f"⚠️  |u| differs from the H-root by {gap:.3g}")
    logger.debug(f"🧮 Constant rhs {fbar:.6g}: |u| = {s:.12g}")
    return u


__all__ = [
    "Scheme",
    "SolveConfig",
    "SolveReport",
    "estimate_shift",
    "solve_in_interval",
    "solve_local",
    "solve_constant_rhs",
]
