# =============================================================================
# KIRCHHOFF LAB MODELS
# Verified sub-supersolution pairs for the application models
# =============================================================================
"""
Pair constructors for the three application models and the constant
right-hand side.

Every constructor returns a ``PairConstruction`` whose pair has passed
``verify_pair``; infeasible parameters raise instead of returning an
unverified pair.

Lower functions are eps * phi1 (principal eigenfunction), upper functions are
K * e (torsion function) or a constant level. The admissibility bound on eps
involves mu_max over [eps phi1, upper], which itself depends on eps, so eps is
halved from a fixed start and mu_max is recomputed at every trial.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from kirchhoff_lab.errors import (
    DomainError,
    LambdaBelowThreshold,
    LambdaTooLarge,
    NoEpsilon,
    NoPositiveSolution,
)
from kirchhoff_lab.grid import GridFunction, Interval, leq
from kirchhoff_lab.kirchhoff import KirchhoffM
from kirchhoff_lab.nonlinearity import Nonlinearity
from kirchhoff_lab.spectral import EigenPair, principal_eigenpair, torsion
from kirchhoff_lab.subsuper import MRange, OrderInterval, PairReport, m_range_over_interval, verify_pair

logger = logging.getLogger(__name__)

EPSILON_FLOOR = 1e-14
K_SAFETY = 1.0 + 1e-9
LOG_K_BOUNDS = (-40.0, 40.0)


@dataclass
class PairConstruction:
    """A verified pair with the constants that produced it."""

    pair: OrderInterval
    epsilon: float
    K: float
    mu_max_used: float
    feasible: bool
    nonlinearity: Nonlinearity
    threshold_info: Dict[str, Any] = field(default_factory=dict)
    report: Optional[PairReport] = None


# =============================================================================
# BUILDING BLOCKS
# =============================================================================

def _with_zero_boundary(domain: Interval, interior: np.ndarray) -> GridFunction:
    return GridFunction(domain, np.r_[0.0, interior, 0.0])


def _torsion_upper(domain: Interval, K: float) -> Tuple[GridFunction, GridFunction]:
    """K e and its exact discrete Laplacian -K."""
    e = torsion(domain)
    return e.scale(K), _with_zero_boundary(domain, np.full(domain.n - 2, -K))


def _eigen_lower(eig: EigenPair, eps: float) -> Tuple[GridFunction, GridFunction]:
    """eps phi1 and its Laplacian -eps lambda1 phi1."""
    lower = eig.phi1.scale(eps)
    return lower, lower.scale(-eig.lambda1)


def _halve_until(
    start: float,
    upper: GridFunction,
    upper_lap: GridFunction,
    eig: EigenPair,
    m: KirchhoffM,
    f: Nonlinearity,
    admissible: Callable[[float, MRange], bool],
) -> Tuple[float, OrderInterval, MRange, PairReport]:
    """
    Halve eps from ``start`` until eps phi1 <= upper, ``admissible(eps, range)``
    holds with the range recomputed for the current interval, and the pair
    verifies. Raises NoEpsilon below EPSILON_FLOOR.
    """
    eps = start
    last_mu = math.nan
    while eps >= EPSILON_FLOOR:
        lower, lower_lap = _eigen_lower(eig, eps)
        if leq(lower, upper).holds:
            pair = OrderInterval(lower, upper, lower_lap, upper_lap)
            mr = m_range_over_interval(pair, m, f)
            last_mu = mr.mu_max
            if admissible(eps, mr):
                report = verify_pair(pair, m, f, m_range=mr)
                if report.ok:
                    logger.debug(f"✅ eps = {eps:.6g} closes the loop (mu_max {mr.mu_max:.6g})")
                    return eps, pair, mr, report
        eps *= 0.5
    raise NoEpsilon(
        "no admissible eps above the floor",
        {"floor": EPSILON_FLOOR, "last_mu_max": last_mu, "lambda1": eig.lambda1},
    )


def _interior_min_ratio(num: GridFunction, den: GridFunction) -> float:
    return float(np.min(num.interior / den.interior))


# =============================================================================
# SUBLINEAR
# =============================================================================

def build_pair_sublinear(lam: float, q: float, m: KirchhoffM, domain: Interval) -> PairConstruction:
    """
    Pair for f = lam u^q, 0 < q < 1.

    K^(1-q) >= lam |e|_inf^q / m0 makes K e a supersolution; eps is admissible
    once mu_max eps^(1-q) lambda1 <= lam.
    """
    f = Nonlinearity.sublinear(lam, q)
    if lam <= 0:
        raise NoPositiveSolution("sublinear model has a positive solution only for lambda > 0",
                                 {"lambda": lam})
    e = torsion(domain)
    e_inf = e.sup_norm()
    eig = principal_eigenpair(domain)
    m0 = m.m0

    K = (lam * e_inf**q / m0) ** (1.0 / (1.0 - q)) * K_SAFETY
    upper, upper_lap = _torsion_upper(domain, K)
    start = K * _interior_min_ratio(e, eig.phi1)

    def admissible(eps: float, mr: MRange) -> bool:
        return mr.mu_max * eps ** (1.0 - q) * eig.lambda1 <= lam

    eps, pair, mr, report = _halve_until(start, upper, upper_lap, eig, m, f, admissible)
    logger.info(f"✅ Sublinear pair: K = {K:.6g}, eps = {eps:.6g}")
    return PairConstruction(
        pair=pair, epsilon=eps, K=K, mu_max_used=mr.mu_max, feasible=True, nonlinearity=f,
        threshold_info={"m0": m0, "e_inf": e_inf, "lambda1": eig.lambda1,
                        "K_min": K / K_SAFETY},
        report=report,
    )


# =============================================================================
# CONCAVE-CONVEX
# =============================================================================

def estimate_lambda0(q: float, p: float, m0: float, e_inf: float) -> Tuple[float, float]:
    """
    max over K > 0 of (m0 K^(1-q) - K^(p-q) e_inf^p) / e_inf^q and its argmax,
    by bounded scalar search on log K.
    """
    if not 0.0 < q < 1.0 < p:
        raise DomainError("concave-convex model needs 0 < q < 1 < p", {"q": q, "p": p})

    def gain(log_k: float) -> float:
        k = math.exp(log_k)
        return (m0 * k ** (1.0 - q) - k ** (p - q) * e_inf**p) / e_inf**q

    res = minimize_scalar(lambda t: -gain(t), bounds=LOG_K_BOUNDS, method="bounded",
                          options={"xatol": 1e-10})
    return float(-res.fun), float(math.exp(res.x))


def build_pair_concave_convex(lam: float, q: float, p: float, m: KirchhoffM,
                              domain: Interval) -> PairConstruction:
    """Pair for f = lam u^q + u^p below the estimated threshold lambda0."""
    f = Nonlinearity.concave_convex(lam, q, p)
    if lam <= 0:
        raise NoPositiveSolution("concave-convex construction needs lambda > 0", {"lambda": lam})
    e = torsion(domain)
    e_inf = e.sup_norm()
    eig = principal_eigenpair(domain)
    m0 = m.m0

    lambda0, K = estimate_lambda0(q, p, m0, e_inf)
    info = {"lambda0": lambda0, "K_opt": K, "m0": m0, "e_inf": e_inf, "lambda1": eig.lambda1}
    if lam >= lambda0:
        raise LambdaTooLarge("lambda is not below the estimated threshold",
                             {"lambda": lam, **info})

    upper, upper_lap = _torsion_upper(domain, K)
    start = K * _interior_min_ratio(e, eig.phi1)
    phi = eig.phi1.interior

    def admissible(eps: float, mr: MRange) -> bool:
        # per node: mu_max eps^(1-q) lambda1 phi^(1-q) <= lam + (eps phi)^(p-q)
        lhs = mr.mu_max * eps ** (1.0 - q) * eig.lambda1 * phi ** (1.0 - q)
        return bool(np.all(lhs <= lam + (eps * phi) ** (p - q)))

    eps, pair, mr, report = _halve_until(start, upper, upper_lap, eig, m, f, admissible)
    logger.info(f"✅ Concave-convex pair: lambda0 = {lambda0:.6g}, K = {K:.6g}, eps = {eps:.6g}")
    return PairConstruction(pair=pair, epsilon=eps, K=K, mu_max_used=mr.mu_max, feasible=True,
                            nonlinearity=f, threshold_info=info, report=report)


# =============================================================================
# LOGISTIC
# =============================================================================

def logistic_level(lam: float, p: float) -> float:
    """Constant supersolution level: lam when f(lam) <= 0, else lam^(1/(p-1))."""
    if lam * lam - lam**p <= 0:
        return lam
    return lam ** (1.0 / (p - 1.0))


def build_pair_logistic(lam: float, p: float, m: KirchhoffM, domain: Interval) -> PairConstruction:
    """
    Pair for f = lam u - u^p with a constant upper level.

    Feasible only when lam exceeds lambda1 times the certified mu_max over the
    working interval.
    """
    f = Nonlinearity.logistic(lam, p)
    if lam <= 0:
        raise LambdaBelowThreshold("logistic model needs lambda > 0", {"lambda": lam})
    eig = principal_eigenpair(domain)
    level = logistic_level(lam, p)
    upper = GridFunction.constant(domain, level)
    upper_lap = GridFunction.zeros(domain)
    phi = eig.phi1.interior

    def admissible(eps: float, mr: MRange) -> bool:
        return bool(np.all(mr.mu_max * eig.lambda1 + (eps * phi) ** (p - 1.0) <= lam))

    try:
        eps, pair, mr, report = _halve_until(level, upper, upper_lap, eig, m, f, admissible)
    except NoEpsilon as exc:
        mu = exc.diagnostic.get("last_mu_max", math.nan)
        raise LambdaBelowThreshold(
            "lambda does not exceed lambda1 times the certified mu_max",
            {"lambda": lam, "lambda1": eig.lambda1, "mu_max": mu,
             "threshold": eig.lambda1 * mu, "upper_level": level},
        ) from exc

    info = {"lambda1": eig.lambda1, "m_inf": mr.mu_max, "threshold": eig.lambda1 * mr.mu_max,
            "upper_level": level}
    logger.info(f"✅ Logistic pair: m_inf = {mr.mu_max:.6g}, level = {level:.6g}, eps = {eps:.6g}")
    return PairConstruction(pair=pair, epsilon=eps, K=level, mu_max_used=mr.mu_max, feasible=True,
                            nonlinearity=f, threshold_info=info, report=report)


# =============================================================================
# CONSTANT RIGHT-HAND SIDE
# =============================================================================

def build_pair_constant(fbar: float, m: KirchhoffM, domain: Interval) -> PairConstruction:
    """Pair (0, K e) with K = fbar / m0 for f = fbar > 0."""
    if not fbar > 0:
        raise DomainError("constant right-hand side must be positive", {"fbar": fbar})
    f = Nonlinearity.constant(fbar)
    K = fbar / m.m0
    upper, upper_lap = _torsion_upper(domain, K)
    zero = GridFunction.zeros(domain)
    pair = OrderInterval(zero, upper, zero, upper_lap)
    report = verify_pair(pair, m, f)
    if report.ok:
        logger.info(f"✅ Constant pair: K = {K:.6g}")
    return PairConstruction(pair=pair, epsilon=0.0, K=K, mu_max_used=report.m_range.mu_max,
                            feasible=report.ok, nonlinearity=f,
                            threshold_info={"m0": m.m0}, report=report)


__all__ = [
    "PairConstruction",
    "estimate_lambda0",
    "logistic_level",
    "build_pair_sublinear",
    "build_pair_concave_convex",
    "build_pair_logistic",
    "build_pair_constant",
]
