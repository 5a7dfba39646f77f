import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jensengap import (
    Beta, BoundReport, Exponential, FiniteDiscrete, Normal, Uniform, chebysev_gruss,
    covariance_bound, exp_scaled, expect, fourth_order, green_gap, green_gruss_refinement,
    green_kernel, gruss_second_order, jensen_bound, jensen_mercer, log1p_snr, mgf_bounds,
    moments, neg_exp, neg_log, optimize_tangency, partitioned_sandwich, reciprocal,
    signed_refinement, square, tangent_bound, variance_sandwich, xlogx,
)
from jensengap.errors import DomainMismatch, NonConvex

U02 = Uniform(0.0, 2.0)
E1 = math.exp(-1.0)
GAP = (1 - math.exp(-2)) / 2 - E1  # J(exp(-x), U(0,2))
POINT = FiniteDiscrete([(1.0, 1.0)])


class TestSandwich:
    def test_neg_exp_uniform(self):
        r = variance_sandwich(neg_exp(), U02)
        assert r.lower == pytest.approx(math.exp(-2) / 6, rel=1e-14)
        assert r.upper == pytest.approx(1 / 6, rel=1e-14)
        assert round(r.lower, 5) == 0.02256
        assert r.contains(GAP)

    @pytest.mark.parametrize("dist", [U02, Beta(2, 3), Exponential(1.0), Normal(3, 2)])
    def test_square_is_exact(self, dist):
        r = variance_sandwich(square(), dist)
        s2 = moments(dist).sigma2
        assert r.lower == pytest.approx(s2, rel=1e-12) and r.upper == pytest.approx(s2, rel=1e-12)

    def test_point_mass(self):
        r = variance_sandwich(neg_exp(), POINT)
        assert (r.lower, r.upper) == (0.0, 0.0)

    def test_unbounded_support_still_sound(self):
        r = variance_sandwich(neg_exp(), Exponential(1.0))
        assert r.contains(expect(Exponential(1.0), neg_exp()).gap)


class TestPartitioned:
    def test_halves_closed_form(self):
        r = partitioned_sandwich(neg_exp(), U02, [1.0])
        # cells U(0,1), U(1,2): sigma_k^2 = 1/12, phi'' ranges [e^-1, 1] and [e^-2, e^-1]
        between = 0.5 * (math.exp(-0.5) - E1) + 0.5 * (math.exp(-1.5) - E1)
        lower = 0.5 * (E1 / 24) + 0.5 * (math.exp(-2) / 24) + between
        upper = 0.5 * (1 / 24) + 0.5 * (E1 / 24) + between
        assert r.lower == pytest.approx(lower, rel=1e-12)
        assert r.upper == pytest.approx(upper, rel=1e-12)
        g = variance_sandwich(neg_exp(), U02)
        assert r.upper < g.upper and r.lower > g.lower
        assert r.contains(GAP)

    def test_trivial_partition_reduces_to_global(self):
        a = partitioned_sandwich(neg_exp(), U02, [])
        b = variance_sandwich(neg_exp(), U02)
        assert (a.lower, a.upper) == pytest.approx((b.lower, b.upper), rel=1e-12)

    @pytest.mark.parametrize("cuts", [[0.5], [0.3, 1.1], [0.2, 0.9, 1.7]])
    def test_square_stays_exact(self, cuts):
        r = partitioned_sandwich(square(), U02, cuts)
        assert r.lower == pytest.approx(1 / 3, rel=1e-12)
        assert r.upper == pytest.approx(1 / 3, rel=1e-12)

    def test_cut_outside_support_rejected(self):
        with pytest.raises(ValueError):
            partitioned_sandwich(neg_exp(), U02, [3.0])


class TestGruss:
    def test_neg_exp_uniform(self):
        r = gruss_second_order(neg_exp(), U02)
        assert r.estimate == pytest.approx(E1 / 6, rel=1e-14)
        assert r.error_radius == pytest.approx(0.25 / 6, rel=1e-10)
        assert abs(GAP - r.estimate) <= r.error_radius

    def test_square_exact(self):
        r = gruss_second_order(square(), Beta(2, 5))
        assert r.error_radius == 0.0
        assert r.estimate == pytest.approx(moments(Beta(2, 5)).sigma2, rel=1e-12)


class TestGreen:
    def test_kernel_values(self):
        assert green_kernel(U02, 1.0) == pytest.approx(0.25)
        assert green_kernel(U02, 0.0) == pytest.approx(0.0, abs=1e-15)
        assert green_kernel(POINT, 0.3) == 0.0
        assert green_kernel(POINT, 1.0) == 0.0

    def test_kernel_matches_definition(self):
        d = Beta(2, 3)
        mu = moments(d).mu
        for t in np.linspace(-0.5, 1.5, 21):
            mad = d.lower_partial(t) + d.upper_partial(t)
            assert green_kernel(d, t) == pytest.approx((mad - abs(mu - t)) / 2, abs=1e-14)

    def test_kernel_integrates_to_half_variance(self):
        from jensengap.quadrature import integrate

        d = Beta(2, 3)
        r = integrate(lambda t: green_kernel(d, t), 0.0, 1.0, breakpoints=(0.4,))
        assert r.value == pytest.approx(moments(d).sigma2 / 2, rel=1e-10)

    def test_green_gap(self):
        assert green_gap(neg_exp(), U02).estimate == pytest.approx(GAP, abs=1e-10)
        assert green_gap(square(), U02).estimate == pytest.approx(1 / 3, abs=1e-12)

    def test_concave_sign(self):
        d, phi = Beta(2, 2), log1p_snr(5.0)
        r = green_gap(phi, d)
        assert r.estimate < 0
        assert r.estimate == pytest.approx(expect(d, phi).gap, abs=1e-9)

    def test_green_gruss(self):
        r = green_gruss_refinement(neg_exp(), U02)
        assert abs(GAP - r.estimate) <= r.error_radius
        sq = green_gruss_refinement(square(), Beta(2, 3))
        assert sq.error_radius == 0.0
        assert sq.estimate == pytest.approx(moments(Beta(2, 3)).sigma2, rel=1e-12)
        pt = green_gruss_refinement(neg_exp(), POINT)
        assert (pt.estimate, pt.error_radius) == (0.0, 0.0)

    def test_green_gruss_needs_bounded_support(self):
        with pytest.raises(DomainMismatch):
            green_gruss_refinement(neg_exp(), Exponential(1.0))


class TestChebysev:
    def test_identity(self):
        r = chebysev_gruss(lambda x: x, lambda x: x, (0.0, 1.0))
        assert r.T == pytest.approx(1 / 12, abs=1e-12)
        assert r.pre_gruss_bound == pytest.approx(1 / 12, abs=1e-12)
        assert r.gruss_bound == pytest.approx(0.25, rel=1e-5)

    def test_constant_factor(self):
        r = chebysev_gruss(lambda x: np.full_like(x, 3.0), np.sin, (0.0, 2.0))
        assert r.T == pytest.approx(0.0, abs=1e-14)

    def test_anti_aligned(self):
        r = chebysev_gruss(lambda x: x, lambda x: 1 - x, (0.0, 1.0))
        assert r.T == pytest.approx(-1 / 12, abs=1e-12)
        assert abs(r.T) <= r.pre_gruss_bound + 1e-12 <= r.gruss_bound + 1e-12


class TestFourthOrder:
    def test_neg_exp_uniform(self):
        r = fourth_order(neg_exp(), U02)
        assert r.estimate == pytest.approx(E1 * (1 + 1 / 6 + 0.2 / 24), rel=1e-12)
        assert r.error_radius == pytest.approx(1 / 720, rel=1e-10)
        assert r.terms[2] == pytest.approx(0.0, abs=1e-15)
        assert r.contains(expect(U02, neg_exp()).expectation)

    def test_square_exact(self):
        d = Beta(2, 5)
        r = fourth_order(square(), d)
        m = moments(d)
        assert r.error_radius == 0.0
        assert r.estimate == pytest.approx(m.mu**2 + m.sigma2, rel=1e-12)


class TestSignedRefinement:
    def test_exp_on_truncated_exponential(self):
        d = Exponential(1.0).truncated()
        r = signed_refinement(exp_scaled(1.0), d)
        assert r.applicable
        assert r.lower <= expect(d, exp_scaled(1.0)).expectation

    def test_neg_exp_uniform_equality_case(self):
        r = signed_refinement(neg_exp(), U02)
        assert r.applicable
        assert r.lower == pytest.approx(E1 * (1 + 1 / 6), rel=1e-12)
        assert r.lower == pytest.approx(0.42921, abs=5e-4)
        assert r.lower <= (1 - math.exp(-2)) / 2

    def test_square_symmetric_exact(self):
        r = signed_refinement(square(), U02)
        assert r.lower == pytest.approx(1 + 1 / 3, rel=1e-12)

    def test_sign_failure_is_a_value(self):
        # log1p has phi''' > 0 but phi'''' < 0 with gamma4 > 0
        r = signed_refinement(log1p_snr(1.0), Beta(2, 5))
        assert not r.applicable and r.lower is None


class TestTangency:
    def test_tangent_at_mean_is_jensen(self):
        assert tangent_bound(neg_exp(), U02, 1.0) == pytest.approx(E1)
        assert jensen_bound(neg_exp(), U02).lower == pytest.approx(E1)

    def test_optimum(self):
        r = optimize_tangency(neg_exp(), U02)
        assert r.c_star == pytest.approx(1.0, abs=1e-6)
        assert r.bound == pytest.approx(E1, rel=1e-12)

    def test_strong_convexity(self):
        m = math.exp(-2)
        r = optimize_tangency(neg_exp(), U02, strong_m=m)
        assert r.bound >= E1 + m / 6 - 1e-12
        assert round(E1 + m / 6, 5) == 0.39044

    def test_square_saturates(self):
        r = optimize_tangency(square(), U02, strong_m=2.0)
        assert r.bound == pytest.approx(4 / 3, rel=1e-12)

    def test_rejects_concave(self):
        with pytest.raises(NonConvex):
            optimize_tangency(log1p_snr(1.0), U02)


class TestMercer:
    def test_example(self):
        r = jensen_mercer(square(), 0.0, 1.0, [0.25, 0.75], [0.5, 0.5])
        assert (r.lhs, r.rhs, r.holds) == (0.25, 0.6875, True)

    def test_all_at_a(self):
        r = jensen_mercer(neg_exp(), 0.0, 2.0, [0.0], [1.0])
        assert r.lhs == pytest.approx(r.rhs) and r.holds

    def test_midpoint(self):
        phi = neg_exp()
        r = jensen_mercer(phi, 0.0, 2.0, [1.0], [1.0])
        assert r.lhs == pytest.approx(phi(1.0))
        assert r.rhs == pytest.approx(phi(0.0) + phi(2.0) - phi(1.0))


class TestCovariance:
    def test_neg_exp_uniform(self):
        r = covariance_bound(neg_exp(), U02)
        # Cov(X, -e^-X) = E[X e^-X] - E[X] E[e^-X] in closed form
        ex_exp = 0.5 * (1 - 3 * math.exp(-2))
        cov = -(ex_exp - 1 * (1 - math.exp(-2)) / 2)
        assert r.upper == pytest.approx(cov, rel=1e-10)
        assert r.contains(GAP)

    def test_point_mass(self):
        r = covariance_bound(neg_exp(), POINT)
        assert (r.lower, r.upper) == (0.0, 0.0)

    def test_concave_flip(self):
        d, phi = Beta(2, 2), log1p_snr(1.0)
        r = covariance_bound(phi, d)
        assert r.upper <= 0 and r.contains(expect(d, phi).gap)


class TestMgf:
    def test_uniform(self):
        r = mgf_bounds(U02, 1.0)
        assert (round(r.lower, 4), round(r.upper, 4)) == (2.8849, 3.9498)
        assert r.contains((math.exp(2) - 1) / 2)

    def test_zero(self):
        r = mgf_bounds(U02, 0.0)
        assert (r.lower, r.upper) == (1.0, 1.0)

    def test_point_mass(self):
        r = mgf_bounds(POINT, 1.0)
        assert r.lower == r.upper == pytest.approx(math.e)

    def test_unbounded_rejected(self):
        with pytest.raises(DomainMismatch):
            mgf_bounds(Exponential(1.0), 0.5)


class TestReport:
    def test_round_trip(self):
        r = partitioned_sandwich(neg_exp(), U02, [1.0])
        assert BoundReport.from_dict(r.to_dict()) == r

    def test_inverted_interval_rejected(self):
        with pytest.raises(ValueError):
            BoundReport("x", "gap", lower=1.0, upper=0.0)
        with pytest.raises(ValueError):
            BoundReport("x", "gap", estimate=0.0, error_radius=-1.0)


# ---------------------------------------------------------------------------
# properties over random discrete laws
# ---------------------------------------------------------------------------

atoms = st.lists(st.tuples(st.floats(0.05, 3.0), st.floats(0.05, 1.0)),
                 min_size=2, max_size=7, unique_by=lambda p: round(p[0], 6))


def _law(pairs):
    w = np.array([p for _, p in pairs])
    w = w / w.sum()
    return FiniteDiscrete(list(zip([x for x, _ in pairs], w.tolist())))


PHIS = [neg_exp(), exp_scaled(0.8), reciprocal(), xlogx(), neg_log(), square()]


@settings(max_examples=80, deadline=None)
@given(atoms, st.sampled_from(PHIS))
def test_every_bound_contains_the_truth(pairs, phi):
    d = _law(pairs)
    o = expect(d, phi)
    eps = 1e-9 * max(1.0, abs(o.expectation))
    for r in (variance_sandwich(phi, d), gruss_second_order(phi, d), green_gap(phi, d),
              green_gruss_refinement(phi, d), covariance_bound(phi, d)):
        assert r.contains(o.gap, eps), r.method
    for r in (fourth_order(phi, d), jensen_bound(phi, d)):
        assert r.contains(o.expectation, eps), r.method


@settings(max_examples=60, deadline=None)
@given(atoms, st.sampled_from(PHIS), st.lists(st.floats(0.1, 2.9), min_size=1, max_size=3))
def test_partition_never_widens(pairs, phi, cuts):
    d = _law(pairs)
    lo, hi = d.support
    cuts = sorted({c for c in cuts if lo < c < hi})
    g = variance_sandwich(phi, d)
    p = partitioned_sandwich(phi, d, cuts)
    tol = 1e-12 * max(1.0, abs(g.upper) if math.isfinite(g.upper) else 1.0)
    assert p.lower >= g.lower - tol
    assert p.upper <= g.upper + tol
    assert p.contains(expect(d, phi).gap, 1e-9)


@settings(max_examples=60, deadline=None)
@given(atoms, st.floats(-4, 4))
def test_green_kernel_nonnegative(pairs, t):
    assert green_kernel(_law(pairs), t) >= -1e-12
