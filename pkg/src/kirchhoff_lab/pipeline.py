# =============================================================================
# KIRCHHOFF LAB PIPELINE
# Assembles Kirchhoff function, model, pair and solver from a RunConfig
# =============================================================================
"""
Run assembly for the ``solve`` and ``verify-pair`` commands.

    RunConfig -> KirchhoffM + Nonlinearity -> PairConstruction -> SolveReport

A ``pair`` section in the configuration replaces the model constructor with a
user-chosen pair, which is verified but never adjusted.
"""

from __future__ import annotations

import logging
from typing import Tuple

from kirchhoff_lab.config import MFamily, ModelKind, RunConfig, UpperKind
from kirchhoff_lab.grid import GridFunction, Interval
from kirchhoff_lab.kirchhoff import KirchhoffM
from kirchhoff_lab.models import (
    PairConstruction,
    build_pair_concave_convex,
    build_pair_constant,
    build_pair_logistic,
    build_pair_sublinear,
)
from kirchhoff_lab.nonlinearity import Nonlinearity
from kirchhoff_lab.solver import SolveReport, solve_in_interval
from kirchhoff_lab.spectral import principal_eigenpair, torsion
from kirchhoff_lab.subsuper import OrderInterval, verify_pair

logger = logging.getLogger(__name__)


def kirchhoff_from_config(run: RunConfig) -> KirchhoffM:
    cfg = run.kirchhoff
    if cfg.family is MFamily.CONSTANT:
        return KirchhoffM.constant(cfg.m, scan_max=cfg.scan_max, samples=cfg.samples)
    return KirchhoffM.power_shift(cfg.a, cfg.b, cfg.c, cfg.p,
                                  scan_max=cfg.scan_max, samples=cfg.samples)


def nonlinearity_from_config(run: RunConfig) -> Nonlinearity:
    cfg = run.model
    if cfg.kind is ModelKind.SUBLINEAR:
        return Nonlinearity.sublinear(cfg.lambda_, cfg.q)
    if cfg.kind is ModelKind.CONCAVE_CONVEX:
        return Nonlinearity.concave_convex(cfg.lambda_, cfg.q, cfg.p)
    if cfg.kind is ModelKind.LOGISTIC:
        return Nonlinearity.logistic(cfg.lambda_, cfg.p)
    return Nonlinearity.constant(cfg.value)


def _user_pair(run: RunConfig, m: KirchhoffM, f: Nonlinearity, domain: Interval) -> PairConstruction:
    pair_cfg = run.pair
    eig = principal_eigenpair(domain)
    lower = eig.phi1.scale(pair_cfg.epsilon)
    lower_lap = lower.scale(-eig.lambda1)
    if pair_cfg.upper is UpperKind.TORSION:
        upper = torsion(domain).scale(pair_cfg.K)
        upper_lap = GridFunction.constant(domain, -pair_cfg.K)
    else:
        upper = GridFunction.constant(domain, pair_cfg.K)
        upper_lap = GridFunction.zeros(domain)
    pair = OrderInterval(lower, upper, lower_lap, upper_lap)
    report = verify_pair(pair, m, f)
    return PairConstruction(
        pair=pair, epsilon=pair_cfg.epsilon, K=pair_cfg.K, mu_max_used=report.m_range.mu_max,
        feasible=report.ok, nonlinearity=f,
        threshold_info={"source": "user", "upper": pair_cfg.upper.value}, report=report,
    )


def construct_pair(run: RunConfig, m: KirchhoffM) -> PairConstruction:
    """Model constructor, or the configured pair when one is given."""
    domain = run.domain.to_interval()
    cfg = run.model
    if run.pair is not None:
        return _user_pair(run, m, nonlinearity_from_config(run), domain)
    if cfg.kind is ModelKind.SUBLINEAR:
        return build_pair_sublinear(cfg.lambda_, cfg.q, m, domain)
    if cfg.kind is ModelKind.CONCAVE_CONVEX:
        return build_pair_concave_convex(cfg.lambda_, cfg.q, cfg.p, m, domain)
    if cfg.kind is ModelKind.LOGISTIC:
        return build_pair_logistic(cfg.lambda_, cfg.p, m, domain)
    return build_pair_constant(cfg.value, m, domain)


def prepare_run(run: RunConfig) -> None:
    """Log the run configuration as a tree."""
    d, k, model = run.domain, run.kirchhoff, run.model
    logger.info("🎯 Run configuration:")
    logger.info(f"   ├─ Domain: [{d.a:g}, {d.b:g}], n = {d.n}")
    if k.family is MFamily.CONSTANT:
        logger.info(f"   ├─ M: constant {k.m:g}")
    else:
        logger.info(f"   ├─ M: {k.a:g} + {k.b:g} (t + {k.c:g})^{k.p:g}")
    logger.info(f"   ├─ Model: {model.kind.value} (lambda {model.lambda_:g}, q {model.q:g}, "
                f"p {model.p:g})")
    logger.info(f"   └─ Scheme: {run.solver.scheme.value}, max_iter {run.solver.max_iter}")


def run_verify(run: RunConfig) -> Tuple[KirchhoffM, PairConstruction]:
    prepare_run(run)
    m = kirchhoff_from_config(run)
    return m, construct_pair(run, m)


def run_solve(run: RunConfig) -> Tuple[KirchhoffM, PairConstruction, SolveReport]:
    """Construct (or take) the pair, then solve inside it."""
    m, construction = run_verify(run)
    report = solve_in_interval(construction.pair, m, construction.nonlinearity, run.solver)
    return m, construction, report


__all__ = [
    "kirchhoff_from_config",
    "nonlinearity_from_config",
    "construct_pair",
    "prepare_run",
    "run_verify",
    "run_solve",
]
