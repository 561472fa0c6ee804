# =============================================================================
# KIRCHHOFF LAB SPECTRAL FIELDS
# Torsion function and principal Dirichlet eigenpair
# =============================================================================
"""
The two auxiliary fields every model construction is built from.

- torsion(domain): e with -Delta e = 1, e = 0 on the boundary
- principal_eigenpair(domain): (lambda1, phi1) by inverse power iteration,
  phi1 > 0 inside and sup-normalized to 1

Both are cached per (domain, tolerance); the returned grid functions are
read-only.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from kirchhoff_lab.errors import DomainError, NoConvergence
from kirchhoff_lab.grid import GridFunction, Interval, laplacian, solve_poisson

logger = logging.getLogger(__name__)

DEFAULT_EIGEN_TOL = 1e-12
VECTOR_TOL = 1e-9
MAX_POWER_ITERATIONS = 10000


@dataclass(frozen=True)
class EigenPair:
    """Principal eigenvalue and sup-normalized positive eigenfunction."""

    lambda1: float
    phi1: GridFunction
    iterations: int = 0

    @property
    def residual_sup(self) -> float:
        """Sup-norm of -Delta_h phi1 - lambda1 phi1 over interior nodes."""
        return float(np.max(np.abs(-laplacian(self.phi1).interior - self.lambda1 * self.phi1.interior)))


@lru_cache(maxsize=32)
def torsion(domain: Interval) -> GridFunction:
    """Solve -Delta e = 1 with zero Dirichlet data."""
    e = solve_poisson(GridFunction.constant(domain, 1.0), 0.0, 0.0)
    logger.debug(f"🧮 Torsion on [{domain.a:g}, {domain.b:g}] n={domain.n}: sup e = {e.sup_norm():.10g}")
    return e


def rayleigh_quotient(v: GridFunction) -> float:
    """(v, -Delta_h v) / (v, v) over interior nodes."""
    inner = v.interior
    return float(np.dot(inner, -laplacian(v).interior) / np.dot(inner, inner))


@lru_cache(maxsize=32)
def principal_eigenpair(domain: Interval, tol: float = DEFAULT_EIGEN_TOL) -> EigenPair:
    """
    Inverse power iteration on the Dirichlet Laplacian.

    Starts from all ones, so runs are reproducible. Stops once successive
    Rayleigh quotients differ by at most ``tol`` and the sup-normalized
    iterate moved by at most ``VECTOR_TOL``.
    """
    if not tol > 0:
        raise DomainError("eigen tolerance must be positive", {"tol": tol})

    v = GridFunction(domain, np.r_[0.0, np.ones(domain.n - 2), 0.0])
    lam_prev = rayleigh_quotient(v)
    for iteration in range(1, MAX_POWER_ITERATIONS + 1):
        w = solve_poisson(v)
        values = w.values / np.max(np.abs(w.values))
        if np.mean(values[1:-1]) < 0:
            values = -values
        w = GridFunction(domain, values)
        lam = rayleigh_quotient(w)
        moved = float(np.max(np.abs(w.values - v.values)))
        v = w
        if abs(lam - lam_prev) <= tol and moved <= VECTOR_TOL:
            logger.debug(f"✅ Eigenpair converged in {iteration} iterations: lambda1 = {lam:.12g}")
            return EigenPair(lambda1=lam, phi1=v, iterations=iteration)
        lam_prev = lam

    raise NoConvergence(
        "inverse power iteration did not converge",
        {"iterations": MAX_POWER_ITERATIONS, "n": domain.n},
    )


__all__ = [
    "EigenPair",
    "torsion",
    "rayleigh_quotient",
    "principal_eigenpair",
]
