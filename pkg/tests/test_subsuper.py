"""Tests for order intervals, coefficient bounds and pair verification."""

import numpy as np
import pytest

from kirchhoff_lab.errors import BoundaryViolated, DomainError, DomainMismatch, NegativeMass, OrderViolated
from kirchhoff_lab.grid import GridFunction, Interval
from kirchhoff_lab.kirchhoff import KirchhoffM, eval_M, invert_G, mass, nonlocal_R
from kirchhoff_lab.models import (
    build_pair_concave_convex,
    build_pair_logistic,
    build_pair_sublinear,
    estimate_lambda0,
)
from kirchhoff_lab.nonlinearity import Nonlinearity
from kirchhoff_lab.spectral import torsion
from kirchhoff_lab.subsuper import (
    MRange,
    OrderInterval,
    alpha_bound,
    comparison_margin,
    m_range_over_interval,
    margins_for_mu,
    product_envelopes,
    verify_classical_pair,
    verify_pair,
)


def _random_member(pair: OrderInterval, rng: np.random.Generator) -> GridFunction:
    theta = rng.uniform(0.0, 1.0, pair.domain.n)
    lo, hi = pair.lower.values, pair.upper.values
    return GridFunction(pair.domain, lo + theta * (hi - lo))


class TestOrderInterval:
    """Tests for pair invariants."""

    def test_order_violation(self, pi_domain_small):
        e = torsion(pi_domain_small)
        with pytest.raises(OrderViolated):
            OrderInterval(e.scale(2.0), e).check()

    def test_boundary_violation(self, pi_domain_small):
        lower = GridFunction.constant(pi_domain_small, 0.1)
        upper = GridFunction.constant(pi_domain_small, 1.0)
        with pytest.raises(BoundaryViolated):
            OrderInterval(lower, upper).check()

    def test_positive_upper_boundary_allowed(self, pi_domain_small):
        upper = GridFunction.constant(pi_domain_small, 1.0)
        OrderInterval(GridFunction.zeros(pi_domain_small), upper).check()

    def test_domain_mismatch(self):
        u = GridFunction.zeros(Interval(a=0.0, b=1.0, n=11))
        v = GridFunction.zeros(Interval(a=0.0, b=1.0, n=21))
        with pytest.raises(DomainMismatch):
            OrderInterval(u, v)

    def test_contains(self, pi_domain_small):
        e = torsion(pi_domain_small)
        pair = OrderInterval(GridFunction.zeros(pi_domain_small), e)
        assert pair.contains(e.scale(0.5))
        assert not pair.contains(e.scale(1.5))


class TestCoefficientRange:
    """Tests for the bounds of M(R(w)) over an interval."""

    def test_constant_M(self, pi_domain_small):
        m = KirchhoffM.constant(2.5)
        pair = OrderInterval(GridFunction.zeros(pi_domain_small), torsion(pi_domain_small))
        mr = m_range_over_interval(pair, m, Nonlinearity.constant(1.0))
        assert mr.mu_min == mr.mu_max == 2.5

    def test_linear_M(self, pi_domain_small, m_linear):
        e = torsion(pi_domain_small)
        f = Nonlinearity.constant(1.0)
        pair = OrderInterval(GridFunction.zeros(pi_domain_small), e)
        mr = m_range_over_interval(pair, m_linear, f)
        assert mr.s_min == 0.0
        assert mr.s_max == pytest.approx(mass(f, e), rel=1e-14)
        assert mr.mu_min == pytest.approx(1.0)
        assert mr.mu_max == pytest.approx(1.0 + invert_G(m_linear, mr.s_max), rel=1e-12)

    def test_alpha_bound(self, pi_domain_small, m_linear):
        e = torsion(pi_domain_small)
        f = Nonlinearity.constant(1.0)
        expected = 1.0 + invert_G(m_linear, mass(f, e))
        assert alpha_bound(e, m_linear, f) == pytest.approx(expected, rel=1e-12)

    def test_negative_mass(self, pi_domain_small, m_linear):
        pair = OrderInterval(GridFunction.zeros(pi_domain_small), torsion(pi_domain_small))
        with pytest.raises(NegativeMass):
            m_range_over_interval(pair, m_linear, Nonlinearity.constant(-1.0))

    def test_sampling_matches_exact_extrema(self, pi_domain_small):
        """Test that sampled envelopes recover the unimodal peak of lam s^2 - s^3."""
        f = Nonlinearity.logistic(5.0, 2.0)
        pair = OrderInterval(GridFunction.zeros(pi_domain_small),
                             GridFunction.constant(pi_domain_small, 5.0))
        exact_min, exact_max = product_envelopes(pair, f)
        sampled_min, sampled_max = product_envelopes(pair, f, force_sampling=True)
        assert np.allclose(sampled_min, exact_min, rtol=1e-12, atol=1e-12)
        assert np.allclose(sampled_max, exact_max, rtol=1e-9)

    def test_unknown_monotonicity_samples_image(self, pi_domain_small):
        m = KirchhoffM.custom(lambda t: 3.0 + 0.5 * np.sin(t) / (1.0 + t), scan_max=1e3)
        pair = OrderInterval(GridFunction.zeros(pi_domain_small), torsion(pi_domain_small).scale(4.0))
        mr = m_range_over_interval(pair, m, Nonlinearity.constant(1.0))
        assert m.classification.m3
        assert 2.5 <= mr.mu_min <= mr.mu_max <= 3.5

    def test_rejects_single_sample(self, pi_domain_small, m_one):
        pair = OrderInterval(GridFunction.zeros(pi_domain_small), torsion(pi_domain_small))
        with pytest.raises(DomainError):
            m_range_over_interval(pair, m_one, Nonlinearity.constant(1.0), samples_per_node=1)

    @pytest.mark.parametrize("f", [Nonlinearity.sublinear(1.0, 0.5), Nonlinearity.logistic(3.0, 2.0)])
    def test_widening_never_shrinks_mass_range(self, pi_domain_small, m_one, f):
        e = torsion(pi_domain_small)
        inner = OrderInterval(e.scale(0.5), e)
        outer = OrderInterval(GridFunction.zeros(pi_domain_small), e.scale(2.0))
        a = m_range_over_interval(inner, m_one, f)
        b = m_range_over_interval(outer, m_one, f)
        assert b.s_min <= a.s_min <= a.s_max <= b.s_max

    def test_endpoint_and_sampled_extrema_agree_for_power(self, pi_domain_small):
        e = torsion(pi_domain_small)
        f = Nonlinearity.sublinear(2.0, 0.5)
        pair = OrderInterval(e.scale(0.25), e.scale(2.0))
        exact_min, exact_max = product_envelopes(pair, f)
        sampled_min, sampled_max = product_envelopes(pair, f, force_sampling=True)
        assert np.allclose(sampled_min, exact_min, rtol=1e-9, atol=1e-15)
        assert np.allclose(sampled_max, exact_max, rtol=1e-9, atol=1e-15)


class TestVerifyPair:
    """Tests for the universally quantified pair check."""

    def test_constructed_pair_verifies(self, pi_domain_small, m_linear):
        construction = build_pair_sublinear(1.0, 0.5, m_linear, pi_domain_small)
        report = verify_pair(construction.pair, m_linear, construction.nonlinearity)
        assert report.ok
        assert report.worst_super[1] >= -1e-10
        assert report.worst_sub[1] >= -1e-10

    def test_small_upper_rejected(self, pi_domain_small, m_linear):
        e = torsion(pi_domain_small)
        zero = GridFunction.zeros(pi_domain_small)
        pair = OrderInterval(zero, e.scale(0.01), zero, None)
        report = verify_pair(pair, m_linear, Nonlinearity.sublinear(1.0, 0.5))
        assert not report.ok
        assert report.worst_super[1] < 0

    def test_tightening_keeps_ok(self, pi_domain_small, m_linear):
        """Shrinking the coefficient range can only raise both margins."""
        construction = build_pair_sublinear(1.0, 0.5, m_linear, pi_domain_small)
        full = construction.report.m_range
        assert construction.report.ok
        rng = np.random.default_rng(3)
        for _ in range(10):
            lo, hi = np.sort(rng.uniform(full.mu_min, full.mu_max, size=2))
            tight = MRange(s_min=full.s_min, s_max=full.s_max, r_min=full.r_min, r_max=full.r_max,
                           mu_min=float(lo), mu_max=float(hi))
            report = verify_pair(construction.pair, m_linear, construction.nonlinearity, m_range=tight)
            assert report.ok
            assert np.all(report.super_margin.values >= construction.report.super_margin.values - 1e-14)
            assert np.all(report.sub_margin.values >= construction.report.sub_margin.values - 1e-14)

    def test_boundary_margins_are_zero(self, pi_domain_small, m_linear):
        construction = build_pair_sublinear(1.0, 0.5, m_linear, pi_domain_small)
        report = construction.report
        assert report.super_margin.values[0] == 0.0
        assert report.sub_margin.values[-1] == 0.0

    @pytest.mark.parametrize("model", ["sublinear", "logistic", "concave_convex"])
    def test_quantifier_soundness(self, pi_domain_small, model):
        """Test that every w in a verified interval satisfies the inequalities with mu = M(R(w))."""
        rng = np.random.default_rng(20240611)
        if model == "sublinear":
            m = KirchhoffM.power_shift(1.0, 1.0, 0.0, 1.0)
            construction = build_pair_sublinear(1.0, 0.5, m, pi_domain_small)
        elif model == "logistic":
            m = KirchhoffM.constant(1.0)
            construction = build_pair_logistic(2.0, 2.0, m, pi_domain_small)
        else:
            m = KirchhoffM.power_shift(1.0, 0.5, 0.0, 1.0)
            lambda0, _ = estimate_lambda0(0.5, 2.0, m.m0, torsion(pi_domain_small).sup_norm())
            construction = build_pair_concave_convex(0.5 * lambda0, 0.5, 2.0, m, pi_domain_small)

        pair, f = construction.pair, construction.nonlinearity
        for _ in range(50):
            w = _random_member(pair, rng)
            mu = eval_M(m, nonlocal_R(m, f, w))
            assert construction.report.m_range.mu_min - 1e-12 <= mu <= construction.mu_max_used + 1e-12
            super_margin, sub_margin = margins_for_mu(pair, f, mu)
            assert np.min(super_margin) >= -1e-10
            assert np.min(sub_margin) >= -1e-10


class TestClassicalPair:
    """Tests for the norm-based inequalities."""

    def test_decreasing_M_pair_satisfies_both(self, pi_domain_small):
        m = KirchhoffM.power_shift(1.0, 1.0, 1.0, -1.0)
        construction = build_pair_sublinear(1.0, 0.5, m, pi_domain_small)
        classical = verify_classical_pair(construction.pair, m, construction.nonlinearity)
        assert classical.ok
        assert construction.report.ok

    def test_comparison_margin_constant_M(self, pi_domain_small, m_one):
        e = torsion(pi_domain_small)
        margin = comparison_margin(e.scale(0.5), e, m_one)
        assert np.allclose(margin.interior, 0.5, rtol=1e-8)

