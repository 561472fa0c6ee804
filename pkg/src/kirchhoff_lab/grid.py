# =============================================================================
# KIRCHHOFF LAB GRID
# Uniform 1D grids, grid functions, quadrature and Dirichlet Poisson solves
# =============================================================================
"""
Discretization of a bounded interval with a uniform node set.

All field quantities (candidate sub/supersolutions, the torsion function, the
principal eigenfunction, computed solutions) are ``GridFunction`` values:
immutable nodal arrays attached to an ``Interval``.

Operators:
- laplacian: second-order central differences, boundary entries 0
- solve_poisson: (-Delta + shift) u = g with Dirichlet data, banded direct solve
- norm_sq_h1: squared Dirichlet norm from forward difference quotients
- integrate: composite trapezoid rule
- leq: nodewise order with rounding slack
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.integrate import trapezoid
from scipy.linalg import solve_banded

from kirchhoff_lab.errors import DomainError, DomainMismatch

ORDER_SLACK = 1e-12


# =============================================================================
# DOMAIN TYPES
# =============================================================================

class Interval(BaseModel):
    """
    Uniform grid on [a, b] with ``n`` nodes, both endpoints included.

    Node ``i`` sits at ``a + i*h`` with ``h = (b - a)/(n - 1)``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: float = Field(0.0, description="Left endpoint")
    b: float = Field(math.pi, description="Right endpoint")
    n: int = Field(2001, ge=3, description="Total nodes including both boundary nodes")

    @model_validator(mode="after")
    def _check_order(self) -> "Interval":
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or self.b <= self.a:
            raise ValueError(f"interval requires finite a < b, got a={self.a}, b={self.b}")
        return self

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n - 1)

    @property
    def length(self) -> float:
        return self.b - self.a


def nodes(domain: Interval) -> np.ndarray:
    """Node coordinates ``a + i*h``, i = 0..n-1."""
    return domain.a + domain.h * np.arange(domain.n, dtype=float)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Nodal values on an interval; the value array is read-only."""

    domain: Interval
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 1 or values.shape[0] != self.domain.n:
            raise DomainError(
                f"grid function needs {self.domain.n} values, got shape {values.shape}",
                {"expected": self.domain.n, "shape": list(values.shape)},
            )
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise DomainError("grid function has non-finite values", {"node": bad})
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, domain: Interval, fn: Callable[[np.ndarray], np.ndarray]) -> "GridFunction":
        """Sample a vectorized function at the nodes."""
        x = nodes(domain)
        return cls(domain, np.broadcast_to(np.asarray(fn(x), dtype=float), x.shape))

    @classmethod
    def constant(cls, domain: Interval, value: float) -> "GridFunction":
        return cls(domain, np.full(domain.n, float(value)))

    @classmethod
    def zeros(cls, domain: Interval) -> "GridFunction":
        return cls.constant(domain, 0.0)

    @property
    def x(self) -> np.ndarray:
        return nodes(self.domain)

    @property
    def interior(self) -> np.ndarray:
        return self.values[1:-1]

    def scale(self, factor: float) -> "GridFunction":
        return GridFunction(self.domain, factor * self.values)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __len__(self) -> int:
        return self.domain.n


@dataclass(frozen=True)
class OrderCheck:
    """Outcome of a nodewise comparison u <= v."""

    holds: bool
    worst_node: int
    worst_gap: float


def same_domain(u: GridFunction, v: GridFunction) -> None:
    """Raise DomainMismatch unless both functions share an interval."""
    if u.domain != v.domain:
        raise DomainMismatch(
            "grid functions live on different intervals",
            {"left": u.domain.model_dump(), "right": v.domain.model_dump()},
        )


# =============================================================================
# OPERATORS
# =============================================================================

def laplacian(u: GridFunction) -> GridFunction:
    """Central-difference Laplacian; boundary entries are 0 and unused."""
    v = u.values
    out = np.zeros_like(v)
    out[1:-1] = (v[:-2] - 2.0 * v[1:-1] + v[2:]) / u.domain.h**2
    return GridFunction(u.domain, out)


def solve_poisson(
    g: GridFunction,
    bc_left: float = 0.0,
    bc_right: float = 0.0,
    shift: float = 0.0,
) -> GridFunction:
    """
    Solve ``-(u[i-1] - 2u[i] + u[i+1])/h^2 + shift*u[i] = g[i]`` at interior nodes.

    Boundary values of ``g`` are ignored. The system is symmetric positive
    definite for ``shift >= 0`` and is solved by banded Gaussian elimination.
    """
    if shift < 0:
        raise DomainError("shift must be nonnegative", {"shift": shift})
    domain = g.domain
    h2 = domain.h**2
    m = domain.n - 2

    ab = np.empty((3, m))
    ab[0, :] = -1.0 / h2
    ab[1, :] = 2.0 / h2 + shift
    ab[2, :] = -1.0 / h2

    rhs = np.array(g.values[1:-1], dtype=float)
    rhs[0] += bc_left / h2
    rhs[-1] += bc_right / h2

    u = np.empty(domain.n)
    u[0] = bc_left
    u[-1] = bc_right
    u[1:-1] = solve_banded((1, 1), ab, rhs, check_finite=False)
    return GridFunction(domain, u)


def norm_sq_h1(u: GridFunction) -> float:
    """Squared Dirichlet norm: sum of (u[i+1]-u[i])^2 / h."""
    return float(np.sum(np.diff(u.values) ** 2) / u.domain.h)


def integrate(u: GridFunction) -> float:
    """Composite trapezoid value of the integral of u."""
    return float(trapezoid(u.values, dx=u.domain.h))


def leq(u: GridFunction, v: GridFunction, slack: float = ORDER_SLACK) -> OrderCheck:
    """Check u <= v + slack at every node and report the worst node."""
    same_domain(u, v)
    gap = u.values - v.values
    worst = int(np.argmax(gap))
    return OrderCheck(
        holds=bool(np.all(gap <= slack)),
        worst_node=worst,
        worst_gap=float(gap[worst]),
    )


def residual_interior(u: GridFunction, g: GridFunction, shift: float = 0.0) -> np.ndarray:
    """Algebraic residual of the Poisson system at interior nodes."""
    same_domain(u, g)
    return -laplacian(u).interior + shift * u.interior - g.interior


def clip(v: GridFunction, lower: GridFunction, upper: GridFunction) -> GridFunction:
    """Nodewise truncation of v onto [lower, upper]."""
    same_domain(v, lower)
    same_domain(v, upper)
    return GridFunction(v.domain, np.minimum(np.maximum(v.values, lower.values), upper.values))


__all__ = [
    "Interval",
    "GridFunction",
    "OrderCheck",
    "nodes",
    "laplacian",
    "solve_poisson",
    "norm_sq_h1",
    "integrate",
    "leq",
    "clip",
    "residual_interior",
    "same_domain",
]
