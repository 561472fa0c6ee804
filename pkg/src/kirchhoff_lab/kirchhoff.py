# =============================================================================
# KIRCHHOFF LAB KIRCHHOFF FUNCTIONS
# Families M, derived G and H, the inverse R and the nonlocal operator
# =============================================================================
"""
Kirchhoff functions M(t) and the quantities built from them.

- G(t) = M(t) t and its inverse R = G^-1 (bisection on a verified bracket)
- H(t) = M(t^2) t and its inverse on t >= 0
- classify(): hypothesis flags from an analytic rule (power_shift) or from a
  mixed linear/logarithmic scan of [0, scan_max]
- nonlocal_R(): R(integral of f(x, w) w)

A ``KirchhoffM`` is classified once when it is built and is immutable
afterwards.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, Field
from scipy.optimize import bisect

from kirchhoff_lab.errors import DomainError, NegativeMass, NonMonotone, OutOfRange
from kirchhoff_lab.grid import GridFunction, integrate
from kirchhoff_lab.nonlinearity import Nonlinearity

logger = logging.getLogger(__name__)

DEFAULT_SCAN_MAX = 1e6
DEFAULT_SAMPLES = 4096
BRACKET_CAP = 1e12
INVERSION_TOL = 1e-12
MASS_SLACK = 1e-14

_BISECT_RTOL = 4.0 * np.finfo(float).eps
_BISECT_XTOL = 1e-300
_BISECT_MAXITER = 4000


# =============================================================================
# ENUMS AND RECORDS
# =============================================================================

class FamilyKind(str, Enum):
    """Kirchhoff function families."""
    POWER_SHIFT = "power_shift"
    CONSTANT = "constant"
    CUSTOM = "custom"


class Monotonicity(str, Enum):
    """Monotonicity tag of M on the scan range."""
    INCREASING = "increasing"
    NONINCREASING = "nonincreasing"
    UNKNOWN = "unknown"


class Classification(BaseModel):
    """Hypothesis flags for a Kirchhoff function on [0, scan_max]."""

    m0_holds: bool = Field(..., description="M bounded below by a positive constant on the scan")
    m0: float = Field(..., description="Verified lower bound of M on the scan range")
    m_max: float = Field(..., description="Largest scanned value of M")
    m1: bool = Field(..., description="M non-increasing")
    m2: bool = Field(..., description="M strictly increasing")
    m2_weak: bool = Field(..., description="M nondecreasing")
    m3: bool = Field(..., description="G(t) = M(t) t strictly monotone, hence invertible")
    g_direction: int = Field(..., description="+1 increasing, -1 decreasing, 0 not monotone")
    h_increasing: bool = Field(..., description="H(t) = M(t^2) t strictly increasing")
    monotonicity: Monotonicity
    scan_max: float
    samples: int
    analytic: bool = Field(False, description="Flags decided by an analytic rule")


@dataclass(frozen=True)
class GInversionTable:
    """Verified monotone bracket for an inversion."""

    t_max: float
    direction: int
    tolerance: float = INVERSION_TOL

    @property
    def verified(self) -> bool:
        return self.direction != 0


# =============================================================================
# KIRCHHOFF FUNCTION
# =============================================================================

@dataclass(frozen=True)
class KirchhoffM:
    """
    A Kirchhoff function with its classification.

    Use the constructors ``power_shift``, ``constant`` or ``custom``; they
    validate the family parameters and run ``classify``.
    """

    family: FamilyKind
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    p: float = 0.0
    value: float = 1.0
    func: Optional[Callable[[float], float]] = None
    scan_max: float = DEFAULT_SCAN_MAX
    samples: int = DEFAULT_SAMPLES
    m0: float = 0.0
    monotonicity: Monotonicity = Monotonicity.UNKNOWN
    classification: Optional[Classification] = None
    g_table: GInversionTable = field(default_factory=lambda: GInversionTable(0.0, 0))
    h_table: GInversionTable = field(default_factory=lambda: GInversionTable(0.0, 0))

    @classmethod
    def power_shift(
        cls,
        a: float,
        b: float,
        c: float,
        p: float,
        scan_max: float = DEFAULT_SCAN_MAX,
        samples: int = DEFAULT_SAMPLES,
    ) -> "KirchhoffM":
        """M(t) = a + b (t + c)^p with a, c >= 0 and b > 0."""
        if a < 0 or c < 0 or b <= 0:
            raise DomainError(
                "power_shift needs a >= 0, b > 0, c >= 0",
                {"a": a, "b": b, "c": c, "p": p},
            )
        if p < 0 and c <= 0:
            raise DomainError("power_shift with p < 0 needs c > 0", {"c": c, "p": p})
        raw = cls(FamilyKind.POWER_SHIFT, a=float(a), b=float(b), c=float(c), p=float(p),
                  scan_max=float(scan_max), samples=int(samples))
        return _finalize(raw)

    @classmethod
    def constant(cls, m: float, scan_max: float = DEFAULT_SCAN_MAX,
                 samples: int = DEFAULT_SAMPLES) -> "KirchhoffM":
        if not m > 0:
            raise DomainError("constant Kirchhoff function needs m > 0", {"m": m})
        raw = cls(FamilyKind.CONSTANT, value=float(m), scan_max=float(scan_max), samples=int(samples))
        return _finalize(raw)

    @classmethod
    def custom(cls, func: Callable[[float], float], scan_max: float = DEFAULT_SCAN_MAX,
               samples: int = DEFAULT_SAMPLES) -> "KirchhoffM":
        raw = cls(FamilyKind.CUSTOM, func=func, scan_max=float(scan_max), samples=int(samples))
        return _finalize(raw)

    def describe(self) -> dict:
        if self.family is FamilyKind.POWER_SHIFT:
            params = {"a": self.a, "b": self.b, "c": self.c, "p": self.p}
        elif self.family is FamilyKind.CONSTANT:
            params = {"m": self.value}
        else:
            params = {}
        return {"family": self.family.value, **params, "scan_max": self.scan_max,
                "m0": self.m0, "monotonicity": self.monotonicity.value}


# =============================================================================
# EVALUATION
# =============================================================================

def _check_argument(m: KirchhoffM, t: float) -> None:
    if t < 0 or math.isnan(t):
        raise DomainError("Kirchhoff function is defined for t >= 0", {"t": t})
    if m.family is FamilyKind.POWER_SHIFT and m.p < 0 and t + m.c <= 0:
        raise DomainError("power_shift with p < 0 needs t + c > 0", {"t": t, "c": m.c})


def eval_M(m: KirchhoffM, t: float) -> float:
    """M(t) for t >= 0."""
    t = float(t)
    _check_argument(m, t)
    if m.family is FamilyKind.POWER_SHIFT:
        return m.a + m.b * (t + m.c) ** m.p
    if m.family is FamilyKind.CONSTANT:
        return m.value
    return float(m.func(t))


def eval_M_array(m: KirchhoffM, t: np.ndarray) -> np.ndarray:
    """Vectorized M over a nonnegative sample array."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("Kirchhoff function is defined for t >= 0", {"t_min": float(t.min())})
    if m.family is FamilyKind.POWER_SHIFT:
        if m.p < 0 and np.any(t + m.c <= 0):
            raise DomainError("power_shift with p < 0 needs t + c > 0", {"c": m.c})
        with np.errstate(over="ignore"):
            # overflow surfaces as inf and is rejected by classify
            return m.a + m.b * np.power(t + m.c, m.p)
    if m.family is FamilyKind.CONSTANT:
        return np.full(t.shape, m.value)
    return np.array([float(m.func(float(ti))) for ti in t.ravel()]).reshape(t.shape)


def eval_G(m: KirchhoffM, t: float) -> float:
    """G(t) = M(t) t."""
    return eval_M(m, t) * float(t)


def eval_H(m: KirchhoffM, t: float) -> float:
    """H(t) = M(t^2) t on t >= 0."""
    t = float(t)
    if t < 0:
        raise DomainError("H is evaluated on t >= 0 only", {"t": t})
    return eval_M(m, t * t) * t


# =============================================================================
# CLASSIFICATION
# =============================================================================

def scan_points(scan_max: float, samples: int) -> np.ndarray:
    """Half linear, half logarithmic samples of [0, scan_max], 0 included."""
    n_lin = max(samples // 2, 2)
    n_log = max(samples - n_lin, 2)
    linear = np.linspace(0.0, scan_max, n_lin)
    logarithmic = np.logspace(math.log10(scan_max) - 12.0, math.log10(scan_max), n_log)
    return np.unique(np.concatenate([linear, logarithmic]))


def _strictly_increasing(values: np.ndarray) -> bool:
    return bool(np.all(np.diff(values) > 0))


def _direction(values: np.ndarray) -> int:
    diffs = np.diff(values)
    if np.all(diffs > 0):
        return 1
    if np.all(diffs < 0):
        return -1
    return 0


def classify(m: KirchhoffM, samples: Optional[int] = None) -> Classification:
    """
    Hypothesis flags for M on [0, scan_max].

    power_shift with b > 0 is decided analytically for M (and for G, H when M
    is increasing); everything else comes from the sample scan.
    """
    samples = int(samples or m.samples)
    if samples < 2:
        raise DomainError("classification needs at least 2 samples", {"samples": samples})

    t = scan_points(m.scan_max, samples)
    m_vals = eval_M_array(m, t)
    if not np.all(np.isfinite(m_vals)):
        raise DomainError("Kirchhoff function is not finite on the scan range",
                          {"scan_max": m.scan_max})
    g_vals = m_vals * t
    s = np.sqrt(t)
    h_vals = eval_M_array(m, s * s) * s

    analytic = False
    if m.family is FamilyKind.POWER_SHIFT and m.p != 0:
        analytic = True
        increasing = m.p > 0
        m1, m2, m2_weak = (not increasing), increasing, increasing
    elif m.family is FamilyKind.CONSTANT or (m.family is FamilyKind.POWER_SHIFT and m.p == 0):
        analytic = True
        m1, m2, m2_weak = True, False, True
    else:
        diffs = np.diff(m_vals)
        m1 = bool(np.all(diffs <= 0))
        m2 = bool(np.all(diffs > 0))
        m2_weak = bool(np.all(diffs >= 0))

    if analytic and m2_weak:
        # M nondecreasing and positive makes G and H strictly increasing
        g_direction, h_increasing = 1, True
    else:
        g_direction = _direction(g_vals)
        h_increasing = _strictly_increasing(h_vals)

    if m.family is FamilyKind.POWER_SHIFT and m.p < 0 and m.a > 0:
        m0 = m.a
    else:
        m0 = float(np.min(m_vals))

    if m2:
        monotonicity = Monotonicity.INCREASING
    elif m1:
        monotonicity = Monotonicity.NONINCREASING
    else:
        monotonicity = Monotonicity.UNKNOWN

    return Classification(
        m0_holds=bool(m0 > 0),
        m0=m0,
        m_max=float(np.max(m_vals)),
        m1=m1,
        m2=m2,
        m2_weak=m2_weak,
        m3=g_direction != 0,
        g_direction=g_direction,
        h_increasing=h_increasing,
        monotonicity=monotonicity,
        scan_max=m.scan_max,
        samples=samples,
        analytic=analytic,
    )


def _finalize(raw: KirchhoffM) -> KirchhoffM:
    flags = classify(raw, raw.samples)
    if not flags.m0_holds:
        raise DomainError(
            "Kirchhoff function must stay above a positive constant",
            {"m0": flags.m0, "scan_max": raw.scan_max},
        )
    m = replace(
        raw,
        m0=flags.m0,
        monotonicity=flags.monotonicity,
        classification=flags,
        g_table=GInversionTable(raw.scan_max, flags.g_direction),
        h_table=GInversionTable(math.sqrt(raw.scan_max), 1 if flags.h_increasing else 0),
    )
    logger.debug(f"🔎 Classified {m.family.value}: m0={m.m0:.6g}, {m.monotonicity.value}, "
                 f"G direction {flags.g_direction}, H increasing {flags.h_increasing}")
    return m


# =============================================================================
# INVERSION
# =============================================================================

def _invert_monotone(fn: Callable[[float], float], s: float, table: GInversionTable, name: str) -> float:
    if not table.verified:
        raise NonMonotone(f"{name} failed the monotonicity scan; cannot invert", {"s": s})
    s = float(s)
    direction = table.direction
    f0 = fn(0.0)
    tol = max(table.tolerance, table.tolerance * abs(s))
    if abs(f0 - s) <= tol:
        return 0.0
    if (s - f0) * direction < 0:
        raise OutOfRange(f"{name} does not attain {s} on t >= 0", {"s": s, "value_at_0": f0})

    lo, hi = 0.0, table.t_max
    f_hi = fn(hi)
    while (f_hi - s) * direction < 0:
        new_hi = 2.0 * hi
        if new_hi > BRACKET_CAP:
            raise OutOfRange(f"{name} does not reach {s} below t = {BRACKET_CAP:g}",
                             {"s": s, "t_max": hi, "value_at_t_max": f_hi})
        f_new = fn(new_hi)
        if (f_new - f_hi) * direction <= 0:
            raise NonMonotone(f"{name} loses monotonicity beyond the scan range",
                              {"t": new_hi, "previous_t": hi})
        lo, hi, f_hi = hi, new_hi, f_new

    root = bisect(lambda t: (fn(t) - s) * direction, lo, hi,
                  xtol=_BISECT_XTOL, rtol=_BISECT_RTOL, maxiter=_BISECT_MAXITER)
    residual = abs(fn(root) - s)
    if residual > tol:
        logger.debug(f"⚠️  {name} inversion residual {residual:.3g} above {tol:.3g} at s={s:.6g}")
    return float(root)


def invert_G(m: KirchhoffM, s: float) -> float:
    """R(s) = G^-1(s)."""
    return _invert_monotone(lambda t: eval_G(m, t), s, m.g_table, "G")


def invert_H(m: KirchhoffM, s: float) -> float:
    """H^-1(s) on t >= 0."""
    return _invert_monotone(lambda t: eval_H(m, t), s, m.h_table, "H")


# =============================================================================
# NONLOCAL OPERATOR
# =============================================================================

def mass(f: Nonlinearity, w: GridFunction) -> float:
    """Integral of f(x, w) w."""
    return integrate(GridFunction(w.domain, f.product(w.x, w.values)))


def nonlocal_R(m: KirchhoffM, f: Nonlinearity, w: GridFunction) -> float:
    """R(integral of f(x, w) w); equals the squared norm at any solution."""
    s = mass(f, w)
    g0 = eval_G(m, 0.0)
    if s < g0 - MASS_SLACK * max(1.0, abs(s)):
        raise NegativeMass(
            "integral of f(x,w)w lies below G(0); nonlocal operator undefined",
            {"mass": s, "G0": g0},
        )
    return invert_G(m, max(s, g0))


__all__ = [
    "FamilyKind",
    "Monotonicity",
    "Classification",
    "GInversionTable",
    "KirchhoffM",
    "eval_M",
    "eval_M_array",
    "eval_G",
    "eval_H",
    "scan_points",
    "classify",
    "invert_G",
    "invert_H",
    "mass",
    "nonlocal_R",
]
