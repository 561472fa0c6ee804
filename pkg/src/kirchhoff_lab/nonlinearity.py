# =============================================================================
# KIRCHHOFF LAB NONLINEARITIES
# Reaction terms f(x, u) with monotonicity and shape hints
# =============================================================================
"""
Reaction terms for the model problems.

Each ``Nonlinearity`` evaluates f(x, u) on numpy arrays and declares two hints
the verifier relies on:

- ``monotone_hint``: how f moves in u (used to gate the monotone schemes)
- ``product_shape``: how s -> f(x, s)*s moves on s >= 0; monotone products are
  extremized at interval endpoints, unimodal ones at the clipped peak, and
  anything else by sampling
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from kirchhoff_lab.errors import DomainError


# =============================================================================
# ENUMS
# =============================================================================

class NonlinearityKind(str, Enum):
    """Model families."""
    SUBLINEAR = "sublinear"
    CONCAVE_CONVEX = "concave_convex"
    LOGISTIC = "logistic"
    CUSTOM = "custom"


class MonotoneHint(str, Enum):
    """Monotonicity of u -> f(x, u) on u >= 0."""
    NONDECREASING = "nondecreasing"
    NONINCREASING = "nonincreasing"
    NONE = "none"


class ProductShape(str, Enum):
    """Shape of s -> f(x, s)*s on s >= 0."""
    MONOTONE = "monotone"
    UNIMODAL = "unimodal"
    UNKNOWN = "unknown"


def _is_integer(value: float) -> bool:
    return float(value).is_integer()


def _power(u: np.ndarray, exponent: float) -> np.ndarray:
    if not _is_integer(exponent) and np.any(u < 0):
        raise DomainError(
            f"u^{exponent} needs u >= 0",
            {"exponent": exponent, "min_u": float(np.min(u))},
        )
    return np.power(u, exponent)


# =============================================================================
# NONLINEARITY
# =============================================================================

@dataclass(frozen=True)
class Nonlinearity:
    """
    A reaction term f(x, u).

    Build instances through the class constructors, which validate the
    parameter ranges of each family:

    - sublinear: f = lam * u^q, 0 < q < 1
    - concave_convex: f = lam * u^q + u^p, 0 < q < 1 < p
    - logistic: f = lam * u - u^p, p > 1
    - custom: any vectorized callable f(x, u)
    """

    kind: NonlinearityKind
    lam: float = 0.0
    q: float = 0.0
    p: float = 0.0
    func: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    monotone_hint: MonotoneHint = MonotoneHint.NONE
    product_shape: ProductShape = ProductShape.UNKNOWN
    product_peak: Optional[float] = None
    label: str = ""

    # -------------------------------------------------------------------------
    # Constructors
    # -------------------------------------------------------------------------

    @classmethod
    def sublinear(cls, lam: float, q: float) -> "Nonlinearity":
        if not 0.0 < q < 1.0:
            raise DomainError("sublinear model needs 0 < q < 1", {"q": q})
        hint = MonotoneHint.NONDECREASING if lam >= 0 else MonotoneHint.NONINCREASING
        return cls(
            kind=NonlinearityKind.SUBLINEAR,
            lam=float(lam),
            q=float(q),
            monotone_hint=hint,
            product_shape=ProductShape.MONOTONE,
            label=f"{lam}*u^{q}",
        )

    @classmethod
    def concave_convex(cls, lam: float, q: float, p: float) -> "Nonlinearity":
        if not 0.0 < q < 1.0 < p:
            raise DomainError("concave-convex model needs 0 < q < 1 < p", {"q": q, "p": p})
        positive = lam >= 0
        return cls(
            kind=NonlinearityKind.CONCAVE_CONVEX,
            lam=float(lam),
            q=float(q),
            p=float(p),
            monotone_hint=MonotoneHint.NONDECREASING if positive else MonotoneHint.NONE,
            product_shape=ProductShape.MONOTONE if positive else ProductShape.UNKNOWN,
            label=f"{lam}*u^{q} + u^{p}",
        )

    @classmethod
    def logistic(cls, lam: float, p: float) -> "Nonlinearity":
        if not p > 1.0:
            raise DomainError("logistic model needs p > 1", {"p": p})
        if lam > 0:
            # d/ds (lam s^2 - s^(p+1)) vanishes at s = (2 lam/(p+1))^(1/(p-1))
            shape = ProductShape.UNIMODAL
            peak = (2.0 * lam / (p + 1.0)) ** (1.0 / (p - 1.0))
        else:
            shape, peak = ProductShape.MONOTONE, None
        return cls(
            kind=NonlinearityKind.LOGISTIC,
            lam=float(lam),
            p=float(p),
            monotone_hint=MonotoneHint.NONE,
            product_shape=shape,
            product_peak=peak,
            label=f"{lam}*u - u^{p}",
        )

    @classmethod
    def custom(
        cls,
        func: Callable[[np.ndarray, np.ndarray], np.ndarray],
        monotone_hint: MonotoneHint = MonotoneHint.NONE,
        product_shape: ProductShape = ProductShape.UNKNOWN,
        product_peak: Optional[float] = None,
        label: str = "custom",
    ) -> "Nonlinearity":
        if product_shape is ProductShape.UNIMODAL and product_peak is None:
            raise DomainError("unimodal product shape needs its peak location")
        return cls(
            kind=NonlinearityKind.CUSTOM,
            func=func,
            monotone_hint=monotone_hint,
            product_shape=product_shape,
            product_peak=product_peak,
            label=label,
        )

    @classmethod
    def constant(cls, value: float) -> "Nonlinearity":
        """f(x, u) = value; f*s is linear in s."""
        value = float(value)
        return cls.custom(
            lambda x, u: np.full(np.broadcast(x, u).shape, value),
            monotone_hint=MonotoneHint.NONDECREASING,
            product_shape=ProductShape.MONOTONE,
            label=f"{value}",
        )

    # -------------------------------------------------------------------------
    # Evaluation
    # -------------------------------------------------------------------------

    def __call__(self, x, u) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        if self.kind is NonlinearityKind.SUBLINEAR:
            return self.lam * _power(u, self.q) + 0.0 * x
        if self.kind is NonlinearityKind.CONCAVE_CONVEX:
            return self.lam * _power(u, self.q) + _power(u, self.p) + 0.0 * x
        if self.kind is NonlinearityKind.LOGISTIC:
            return self.lam * u - _power(u, self.p) + 0.0 * x
        return np.asarray(self.func(x, u), dtype=float)

    def product(self, x, s) -> np.ndarray:
        """f(x, s) * s."""
        s = np.asarray(s, dtype=float)
        return self(x, s) * s

    @property
    def nondecreasing(self) -> bool:
        return self.monotone_hint is MonotoneHint.NONDECREASING

    def product_extrema(
        self, x: np.ndarray, lo: np.ndarray, hi: np.ndarray
    ) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """
        Exact nodewise min and max of f(x, s)*s over s in [lo, hi], when the
        declared shape allows it; None otherwise.
        """
        if np.any(lo < 0):
            return None
        if self.product_shape is ProductShape.MONOTONE:
            g_lo, g_hi = self.product(x, lo), self.product(x, hi)
            return np.minimum(g_lo, g_hi), np.maximum(g_lo, g_hi)
        if self.product_shape is ProductShape.UNIMODAL:
            g_lo, g_hi = self.product(x, lo), self.product(x, hi)
            peak = np.clip(self.product_peak, lo, hi)
            return np.minimum(g_lo, g_hi), self.product(x, peak)
        return None

    def describe(self) -> dict:
        """Parameter record for reports."""
        record = {"kind": self.kind.value, "label": self.label}
        if self.kind is not NonlinearityKind.CUSTOM:
            record.update({"lambda": self.lam, "q": self.q, "p": self.p})
        return record


def eval_f(f: Nonlinearity, x: float, u: float) -> float:
    """Scalar evaluation of f(x, u)."""
    value = float(np.asarray(f(x, u)))
    if not math.isfinite(value):
        raise DomainError("f evaluated to a non-finite value", {"x": x, "u": u})
    return value


__all__ = [
    "NonlinearityKind",
    "MonotoneHint",
    "ProductShape",
    "Nonlinearity",
    "eval_f",
]
