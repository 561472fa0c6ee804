# =============================================================================
# KIRCHHOFF LAB SUB-SUPERSOLUTIONS
# Order intervals, bounds of M(R(w)) and pair verification
# =============================================================================
"""
Verification of sub-supersolution pairs for the nonlocal problem.

The hypothesis to certify is, at every interior node and for every w in the
order interval [lower, upper]:

    -M(R(w)) Delta upper >= f(x, upper)
    -M(R(w)) Delta lower <= f(x, lower)

M(R(w)) depends on w only through the scalar s = integral of f(x, w) w, so
the universal quantifier is discharged by bounding s over the interval
(nodewise extremization of f(x, s) s, then quadrature), mapping the bound
through R and then through M. The inequalities are linear in the scalar
mu = M(R(w)), so checking the worst end of [mu_min, mu_max] per node is
exact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from kirchhoff_lab.errors import BoundaryViolated, DomainError, NegativeMass, OrderViolated
from kirchhoff_lab.grid import (
    GridFunction,
    integrate,
    laplacian,
    leq,
    norm_sq_h1,
    same_domain,
)
from kirchhoff_lab.kirchhoff import (
    MASS_SLACK,
    KirchhoffM,
    Monotonicity,
    eval_G,
    eval_M,
    eval_M_array,
    invert_G,
)
from kirchhoff_lab.nonlinearity import Nonlinearity

logger = logging.getLogger(__name__)

MARGIN_TOL = 1e-10
BOUNDARY_SLACK = 1e-12
DEFAULT_SAMPLES_PER_NODE = 64
M_IMAGE_SAMPLES = 257


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True)
class OrderInterval:
    """
    A candidate pair (lower, upper).

    ``lower_laplacian`` / ``upper_laplacian`` optionally carry the exact
    discrete Laplacian of each function when its constructor knows it
    (eigenfunction, torsion function, constants); verification prefers them
    over recomputed central differences.
    """

    lower: GridFunction
    upper: GridFunction
    lower_laplacian: Optional[GridFunction] = None
    upper_laplacian: Optional[GridFunction] = None

    def __post_init__(self):
        same_domain(self.lower, self.upper)
        for lap in (self.lower_laplacian, self.upper_laplacian):
            if lap is not None:
                same_domain(self.lower, lap)

    @property
    def domain(self):
        return self.lower.domain

    def lap_lower(self) -> GridFunction:
        return self.lower_laplacian if self.lower_laplacian is not None else laplacian(self.lower)

    def lap_upper(self) -> GridFunction:
        return self.upper_laplacian if self.upper_laplacian is not None else laplacian(self.upper)

    def check(self) -> None:
        """Raise unless lower <= upper everywhere and lower <= 0 <= upper on the boundary."""
        order = leq(self.lower, self.upper)
        if not order.holds:
            raise OrderViolated(
                "lower function exceeds upper function",
                {"worst_node": order.worst_node, "worst_gap": order.worst_gap,
                 "x": float(self.lower.x[order.worst_node])},
            )
        ends = [0, self.domain.n - 1]
        lower_ends = self.lower.values[ends]
        upper_ends = self.upper.values[ends]
        if np.any(lower_ends > BOUNDARY_SLACK) or np.any(upper_ends < -BOUNDARY_SLACK):
            raise BoundaryViolated(
                "boundary values must satisfy lower <= 0 <= upper",
                {"lower": lower_ends.tolist(), "upper": upper_ends.tolist()},
            )

    def contains(self, w: GridFunction, slack: float = 1e-10) -> bool:
        return leq(self.lower, w, slack).holds and leq(w, self.upper, slack).holds


@dataclass(frozen=True)
class MRange:
    """Bounds of s = integral f(x,w)w, of R(s), and of mu = M(R(w)) over an interval."""

    s_min: float
    s_max: float
    r_min: float
    r_max: float
    mu_min: float
    mu_max: float


@dataclass(frozen=True)
class PairReport:
    """Verification outcome; margins are >= 0 where the inequality holds."""

    ok: bool
    super_margin: GridFunction
    sub_margin: GridFunction
    m_range: MRange

    @property
    def worst_super(self) -> tuple:
        inner = self.super_margin.interior
        k = int(np.argmin(inner))
        return k + 1, float(inner[k])

    @property
    def worst_sub(self) -> tuple:
        inner = self.sub_margin.interior
        k = int(np.argmin(inner))
        return k + 1, float(inner[k])


# =============================================================================
# BOUNDS OF THE NONLOCAL COEFFICIENT
# =============================================================================

def _sampled_extrema(f: Nonlinearity, x: np.ndarray, lo: np.ndarray, hi: np.ndarray,
                     samples: int) -> tuple:
    """Dense sampling per node, refined by bounded scalar search around the best sample."""
    theta = np.linspace(0.0, 1.0, samples)
    s = lo[:, None] + (hi - lo)[:, None] * theta[None, :]
    g = f.product(x[:, None], s)
    k_min = np.argmin(g, axis=1)
    k_max = np.argmax(g, axis=1)
    rows = np.arange(len(x))
    g_min = g[rows, k_min].copy()
    g_max = g[rows, k_max].copy()

    for i in rows:
        if hi[i] <= lo[i]:
            continue
        for k, sign, store in ((k_min[i], 1.0, g_min), (k_max[i], -1.0, g_max)):
            if 0 < k < samples - 1:
                xi = x[i]
                res = minimize_scalar(
                    lambda t: sign * float(f.product(xi, t)),
                    bounds=(s[i, k - 1], s[i, k + 1]),
                    method="bounded",
                    options={"xatol": 1e-12 * max(1.0, abs(s[i, k]))},
                )
                value = sign * float(res.fun)
                store[i] = min(store[i], value) if sign > 0 else max(store[i], value)
    return g_min, g_max


def product_envelopes(
    pair: OrderInterval,
    f: Nonlinearity,
    samples_per_node: int = DEFAULT_SAMPLES_PER_NODE,
    force_sampling: bool = False,
) -> tuple:
    """Nodewise min and max of f(x, s) s over s in [lower(x), upper(x)]."""
    x = pair.lower.x
    lo, hi = pair.lower.values, pair.upper.values
    exact = None if force_sampling else f.product_extrema(x, lo, hi)
    if exact is not None:
        return exact
    return _sampled_extrema(f, x, lo, hi, samples_per_node)


def m_range_over_interval(
    pair: OrderInterval,
    m: KirchhoffM,
    f: Nonlinearity,
    samples_per_node: int = DEFAULT_SAMPLES_PER_NODE,
    force_sampling: bool = False,
) -> MRange:
    """Certified bounds of M(R(w)) over all w in [lower, upper]."""
    if samples_per_node < 2:
        raise DomainError("samples_per_node must be at least 2", {"samples_per_node": samples_per_node})
    g_min, g_max = product_envelopes(pair, f, samples_per_node, force_sampling)
    domain = pair.domain
    s_min = integrate(GridFunction(domain, g_min))
    s_max = integrate(GridFunction(domain, g_max))

    g0 = eval_G(m, 0.0)
    if s_min < g0 - MASS_SLACK * max(1.0, abs(s_min)):
        raise NegativeMass(
            "lower bound of the integral of f(x,w)w lies below G(0)",
            {"s_min": s_min, "s_max": s_max, "G0": g0,
             "worst_node": int(np.argmin(g_min)), "worst_integrand": float(np.min(g_min))},
        )
    s_min, s_max = max(s_min, g0), max(s_max, g0)

    r_a, r_b = invert_G(m, s_min), invert_G(m, s_max)
    r_min, r_max = min(r_a, r_b), max(r_a, r_b)

    if m.monotonicity is Monotonicity.INCREASING:
        mu_min, mu_max = eval_M(m, r_min), eval_M(m, r_max)
    elif m.monotonicity is Monotonicity.NONINCREASING:
        mu_min, mu_max = eval_M(m, r_max), eval_M(m, r_min)
    else:
        image = eval_M_array(m, np.linspace(r_min, r_max, M_IMAGE_SAMPLES))
        mu_min, mu_max = float(np.min(image)), float(np.max(image))

    logger.debug(f"📏 s in [{s_min:.6g}, {s_max:.6g}] -> mu in [{mu_min:.6g}, {mu_max:.6g}]")
    return MRange(s_min=s_min, s_max=s_max, r_min=r_min, r_max=r_max,
                  mu_min=mu_min, mu_max=mu_max)


def alpha_bound(upper: GridFunction, m: KirchhoffM, f: Nonlinearity,
                samples_per_node: int = DEFAULT_SAMPLES_PER_NODE) -> float:
    """Max of M(R(w)) over 0 <= w <= upper."""
    pair = OrderInterval(GridFunction.zeros(upper.domain), upper)
    return m_range_over_interval(pair, m, f, samples_per_node).mu_max


# =============================================================================
# VERIFICATION
# =============================================================================

def _margins(pair: OrderInterval, f: Nonlinearity, mu_min: float, mu_max: float) -> tuple:
    x = pair.lower.x
    minus_lap_upper = -pair.lap_upper().values
    minus_lap_lower = -pair.lap_lower().values

    # worst mu for "mu * L >= f": the smaller product
    mu_super = np.where(minus_lap_upper >= 0, mu_min, mu_max)
    super_margin = mu_super * minus_lap_upper - f(x, pair.upper.values)

    # worst mu for "mu * L <= f": the larger product
    mu_sub = np.where(minus_lap_lower >= 0, mu_max, mu_min)
    sub_margin = f(x, pair.lower.values) - mu_sub * minus_lap_lower

    super_margin[[0, -1]] = 0.0
    sub_margin[[0, -1]] = 0.0
    return super_margin, sub_margin


def margins_for_mu(pair: OrderInterval, f: Nonlinearity, mu: float) -> tuple:
    """Pointwise margins of both inequalities for one coefficient value."""
    return _margins(pair, f, mu, mu)


def verify_pair(
    pair: OrderInterval,
    m: KirchhoffM,
    f: Nonlinearity,
    samples_per_node: int = DEFAULT_SAMPLES_PER_NODE,
    force_sampling: bool = False,
    m_range: Optional[MRange] = None,
) -> PairReport:
    """
    Check the sub-supersolution inequalities for every w in the interval.

    ``m_range`` may be passed to verify against an externally supplied
    coefficient range.
    """
    pair.check()
    if m_range is None:
        m_range = m_range_over_interval(pair, m, f, samples_per_node, force_sampling)

    super_margin, sub_margin = _margins(pair, f, m_range.mu_min, m_range.mu_max)
    ok = bool(np.all(super_margin >= -MARGIN_TOL) and np.all(sub_margin >= -MARGIN_TOL))

    report = PairReport(
        ok=ok,
        super_margin=GridFunction(pair.domain, super_margin),
        sub_margin=GridFunction(pair.domain, sub_margin),
        m_range=m_range,
    )
    if ok:
        logger.info(f"✅ Pair verified: mu in [{m_range.mu_min:.6g}, {m_range.mu_max:.6g}]")
    else:
        node_sup, gap_sup = report.worst_super
        node_sub, gap_sub = report.worst_sub
        logger.info(f"❌ Pair rejected: super margin {gap_sup:.3g} at node {node_sup}, "
                    f"sub margin {gap_sub:.3g} at node {node_sub}")
    return report


# =============================================================================
# CLASSICAL (NORM-BASED) INEQUALITIES
# =============================================================================

def comparison_margin(lower: GridFunction, upper: GridFunction, m: KirchhoffM,
                      lower_laplacian: Optional[GridFunction] = None,
                      upper_laplacian: Optional[GridFunction] = None) -> GridFunction:
    """
    Per-node -M(|upper|^2) Delta upper - (-M(|lower|^2) Delta lower).

    Nonnegative everywhere means the pair satisfies the comparison inequality.
    """
    same_domain(lower, upper)
    lap_lo = lower_laplacian if lower_laplacian is not None else laplacian(lower)
    lap_up = upper_laplacian if upper_laplacian is not None else laplacian(upper)
    values = (-eval_M(m, norm_sq_h1(upper)) * lap_up.values
              + eval_M(m, norm_sq_h1(lower)) * lap_lo.values)
    values[[0, -1]] = 0.0
    return GridFunction(lower.domain, values)


def verify_classical_pair(pair: OrderInterval, m: KirchhoffM, f: Nonlinearity) -> PairReport:
    """
    Margins of the classical inequalities with coefficients M(|upper|^2)
    and M(|lower|^2) in place of M(R(w)).
    """
    pair.check()
    x = pair.lower.x
    mu_up = eval_M(m, norm_sq_h1(pair.upper))
    mu_lo = eval_M(m, norm_sq_h1(pair.lower))
    super_margin = -mu_up * pair.lap_upper().values - f(x, pair.upper.values)
    sub_margin = f(x, pair.lower.values) + mu_lo * pair.lap_lower().values
    super_margin[[0, -1]] = 0.0
    sub_margin[[0, -1]] = 0.0
    ok = bool(np.all(super_margin >= -MARGIN_TOL) and np.all(sub_margin >= -MARGIN_TOL))
    return PairReport(
        ok=ok,
        super_margin=GridFunction(pair.domain, super_margin),
        sub_margin=GridFunction(pair.domain, sub_margin),
        m_range=MRange(s_min=float("nan"), s_max=float("nan"), r_min=norm_sq_h1(pair.lower),
                       r_max=norm_sq_h1(pair.upper), mu_min=min(mu_lo, mu_up),
                       mu_max=max(mu_lo, mu_up)),
    )


__all__ = [
    "OrderInterval",
    "MRange",
    "PairReport",
    "product_envelopes",
    "m_range_over_interval",
    "alpha_bound",
    "margins_for_mu",
    "verify_pair",
    "comparison_margin",
    "verify_classical_pair",
]
