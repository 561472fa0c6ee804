"""Shared fixtures: standard grids and Kirchhoff functions."""

import math

import numpy as np
import pytest

from kirchhoff_lab.grid import Interval
from kirchhoff_lab.kirchhoff import KirchhoffM


@pytest.fixture(scope="session")
def pi_domain():
    """(0, pi) with the default node count."""
    return Interval(a=0.0, b=math.pi, n=2001)


@pytest.fixture(scope="session")
def pi_domain_small():
    return Interval(a=0.0, b=math.pi, n=401)


@pytest.fixture(scope="session")
def pi_domain_coarse():
    return Interval(a=0.0, b=math.pi, n=201)


@pytest.fixture(scope="session")
def unit_domain():
    return Interval(a=0.0, b=1.0, n=401)


@pytest.fixture(scope="session")
def m_linear():
    """M(t) = 1 + t."""
    return KirchhoffM.power_shift(1.0, 1.0, 0.0, 1.0)


@pytest.fixture(scope="session")
def m_one():
    """M = 1, the local limit."""
    return KirchhoffM.constant(1.0)


@pytest.fixture(scope="session")
def observed_order():
    """Least-squares slope of log(error) against log(h)."""

    def slope(errors, steps):
        fitted, _ = np.polyfit(np.log(steps), np.log(errors), 1)
        return float(fitted)

    return slope

