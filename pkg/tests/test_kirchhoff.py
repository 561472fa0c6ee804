"""Tests for Kirchhoff functions, their classification and inversion."""

import math

import numpy as np
import pytest

from kirchhoff_lab.errors import DomainError, NegativeMass, NonMonotone, OutOfRange
from kirchhoff_lab.kirchhoff import (
    FamilyKind,
    KirchhoffM,
    Monotonicity,
    eval_G,
    eval_H,
    eval_M,
    eval_M_array,
    invert_G,
    invert_H,
    mass,
    nonlocal_R,
)
from kirchhoff_lab.nonlinearity import Nonlinearity
from kirchhoff_lab.spectral import torsion


class TestConstruction:
    """Tests for family constructors and parameter validation."""

    def test_power_shift_values(self, m_linear):
        assert eval_M(m_linear, 2.0) == pytest.approx(3.0)
        assert eval_G(m_linear, 2.0) == pytest.approx(6.0)
        assert eval_H(m_linear, 2.0) == pytest.approx(10.0)

    @pytest.mark.parametrize("a, b, c, p", [(-1.0, 1.0, 0.0, 1.0), (1.0, 0.0, 0.0, 1.0),
                                            (1.0, 1.0, -1.0, 1.0), (1.0, 1.0, 0.0, -2.0)])
    def test_power_shift_rejects(self, a, b, c, p):
        with pytest.raises(DomainError):
            KirchhoffM.power_shift(a, b, c, p)

    def test_constant_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            KirchhoffM.constant(0.0)

    def test_custom_must_stay_positive(self):
        with pytest.raises(DomainError):
            KirchhoffM.custom(lambda t: 1.0 - t, scan_max=10.0)

    def test_negative_argument(self, m_linear):
        with pytest.raises(DomainError):
            eval_M(m_linear, -1.0)
        with pytest.raises(DomainError):
            eval_H(m_linear, -0.5)

    def test_array_matches_scalar(self):
        m = KirchhoffM.power_shift(1.0, 100.0, 1.0, -2.0)
        t = np.array([0.0, 0.5, 3.0, 1e4])
        expected = [eval_M(m, ti) for ti in t]
        assert np.allclose(eval_M_array(m, t), expected, rtol=1e-15)


class TestClassification:
    """Tests for the hypothesis flags."""

    def test_increasing_power(self, m_linear):
        flags = m_linear.classification
        assert flags.m0_holds and flags.m2 and flags.m3 and flags.h_increasing
        assert not flags.m1
        assert m_linear.monotonicity is Monotonicity.INCREASING
        assert m_linear.m0 == pytest.approx(1.0)

    def test_constant(self, m_one):
        flags = m_one.classification
        assert flags.m1 and flags.m2_weak and not flags.m2
        assert flags.m3

    def test_decreasing_power_loses_invertibility(self):
        """M = 1 + 100 (t + 1)^-2 has G decreasing on roughly [1.5, 3]."""
        m = KirchhoffM.power_shift(1.0, 100.0, 1.0, -2.0)
        flags = m.classification
        assert flags.m1 and not flags.m2
        assert not flags.m3 and flags.g_direction == 0
        assert m.m0 == pytest.approx(1.0)
        assert m.monotonicity is Monotonicity.NONINCREASING

    def test_mild_decreasing_power_stays_invertible(self):
        m = KirchhoffM.power_shift(1.0, 1.0, 1.0, -1.0)
        assert m.classification.m3
        assert m.classification.h_increasing

    def test_custom_scan(self):
        m = KirchhoffM.custom(lambda t: 2.0 + math.sin(t), scan_max=100.0)
        flags = m.classification
        assert m.family is FamilyKind.CUSTOM
        assert not flags.analytic
        assert not flags.m1 and not flags.m2
        assert m.monotonicity is Monotonicity.UNKNOWN
        assert flags.m0 == pytest.approx(1.0, abs=1e-3)

    def test_describe(self, m_linear):
        info = m_linear.describe()
        assert info["family"] == "power_shift"
        assert info["monotonicity"] == "increasing"


class TestInversion:
    """Tests for R = G^-1 and H^-1."""

    def test_invert_G(self, m_linear):
        assert invert_G(m_linear, 2.0) == pytest.approx(1.0, rel=1e-12)
        assert invert_G(m_linear, 0.0) == 0.0

    def test_invert_H(self, m_linear):
        assert invert_H(m_linear, 2.0) == pytest.approx(1.0, rel=1e-12)

    def test_inverse_of_values(self):
        m = KirchhoffM.power_shift(0.5, 2.0, 0.1, 0.7)
        for t in (1e-6, 0.3, 7.0, 5e3):
            assert invert_G(m, eval_G(m, t)) == pytest.approx(t, rel=1e-10)

    @pytest.mark.parametrize("m", [
        KirchhoffM.power_shift(1.0, 1.0, 0.0, 1.0),
        KirchhoffM.power_shift(0.5, 2.0, 0.1, 0.7),
        KirchhoffM.power_shift(1.0, 1.0, 1.0, -1.0),
        KirchhoffM.constant(2.0),
    ], ids=["linear", "fractional", "decreasing", "constant"])
    def test_random_round_trip(self, m):
        rng = np.random.default_rng(21)
        for t in 10.0 ** rng.uniform(-4.0, 3.0, size=100):
            assert invert_G(m, eval_G(m, t)) == pytest.approx(t, rel=1e-9, abs=1e-12)

    def test_round_trip_steep_cubic(self):
        m = KirchhoffM.power_shift(1.0, 1e4, 0.0, 3.0)
        assert invert_G(m, eval_G(m, 3.7)) == pytest.approx(3.7, rel=1e-10)

    def test_below_range(self, m_linear):
        with pytest.raises(OutOfRange):
            invert_G(m_linear, -1.0)

    def test_above_cap(self, m_one):
        with pytest.raises(OutOfRange):
            invert_G(m_one, 1e13)

    def test_non_monotone_G(self):
        m = KirchhoffM.power_shift(1.0, 100.0, 1.0, -2.0)
        with pytest.raises(NonMonotone):
            invert_G(m, 5.0)

    def test_non_monotone_custom(self):
        m = KirchhoffM.custom(lambda t: 1.0 / (1.0 + t) ** 2)
        with pytest.raises(NonMonotone):
            invert_G(m, 0.1)


class TestNonlocalOperator:
    """Tests for the mass functional and R(w)."""

    def test_mass_of_torsion(self, pi_domain):
        e = torsion(pi_domain)
        assert mass(Nonlinearity.constant(1.0), e) == pytest.approx(math.pi**3 / 12, rel=1e-5)

    def test_r_inverts_mass(self, pi_domain_small, m_linear):
        e = torsion(pi_domain_small)
        f = Nonlinearity.constant(1.0)
        r = nonlocal_R(m_linear, f, e)
        assert eval_G(m_linear, r) == pytest.approx(mass(f, e), rel=1e-12)

    def test_closed_form_linear_M(self, pi_domain, m_linear):
        """G(t) = t + t^2/2, so R = sqrt(1 + 2s) - 1."""
        e = torsion(pi_domain)
        f = Nonlinearity.constant(1.0)
        s = mass(f, e)
        assert nonlocal_R(m_linear, f, e) == pytest.approx(math.sqrt(1.0 + 2.0 * s) - 1.0, rel=1e-10)
        assert nonlocal_R(m_linear, f, e) == pytest.approx(math.sqrt(1.0 + math.pi**3 / 6) - 1.0, rel=1e-5)

    def test_closed_form_constant_M(self, pi_domain_small):
        e = torsion(pi_domain_small)
        f = Nonlinearity.constant(1.0)
        assert nonlocal_R(KirchhoffM.constant(2.0), f, e) == pytest.approx(0.5 * mass(f, e), rel=1e-12)

    def test_negative_mass(self, pi_domain_small, m_linear):
        e = torsion(pi_domain_small)
        with pytest.raises(NegativeMass):
            nonlocal_R(m_linear, Nonlinearity.constant(-1.0), e)
