import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sint, stats

from jensengap import (
    Beta, Empirical, Exponential, FiniteDiscrete, Normal, PartitionSpec, SupportInterval,
    Uniform, cell_stats, moments, parse_distribution, read_samples,
)
from jensengap.distributions import cdf, mean_abs_dev_at
from jensengap.errors import SpecParseError

SCIPY_TWINS = [
    (Uniform(0.0, 2.0), stats.uniform(0, 2)),
    (Uniform(-1.5, 0.5), stats.uniform(-1.5, 2.0)),
    (Exponential(1.0), stats.expon()),
    (Exponential(2.5), stats.expon(scale=0.4)),
    (Normal(0.3, 1.7), stats.norm(0.3, 1.7)),
    (Beta(2.0, 3.0), stats.beta(2, 3)),
    (Beta(0.7, 1.9), stats.beta(0.7, 1.9)),
]


class TestSpecExamples:
    def test_exponential_moments(self):
        m = moments(Exponential(1.0))
        assert (m.mu, m.sigma2, m.gamma3, m.gamma4) == pytest.approx((1, 1, 2, 9), abs=1e-10)

    def test_uniform_moments(self):
        m = moments(Uniform(0.0, 2.0))
        assert m.mu == pytest.approx(1.0)
        assert m.gamma3 == pytest.approx(0.0, abs=1e-14)
        assert m.sigma2 == pytest.approx(1 / 3, abs=1e-12)
        assert m.abs_central[3] == pytest.approx(0.25, abs=1e-10)
        assert m.abs_central[5] == pytest.approx(1 / 6, abs=1e-10)

    def test_mean_abs_dev(self):
        assert mean_abs_dev_at(Uniform(0.0, 2.0), 1.0) == pytest.approx(0.5, abs=1e-12)
        assert mean_abs_dev_at(Uniform(0.0, 2.0), 0.0) == pytest.approx(1.0, abs=1e-12)
        assert mean_abs_dev_at(FiniteDiscrete([(0, 0.5), (2, 0.5)]), 1.0) == pytest.approx(1.0)

    def test_cdf(self):
        assert cdf(Uniform(0.0, 2.0), 0.5) == pytest.approx(0.25)
        assert cdf(Exponential(1.0), 0.0) == 0.0
        assert cdf(Empirical([1, 2, 3, 4]), 2.5) == pytest.approx(0.5)

    def test_uniform_halves(self):
        cells = cell_stats(Uniform(0.0, 2.0), PartitionSpec((1.0,)))
        assert [c.p for c in cells] == pytest.approx([0.5, 0.5])
        assert [c.mu for c in cells] == pytest.approx([0.5, 1.5])
        assert [c.sigma2 for c in cells] == pytest.approx([1 / 12, 1 / 12], abs=1e-12)

    def test_trivial_partition_reproduces_moments(self):
        d = Exponential(1.0)
        (cell,) = cell_stats(d, PartitionSpec(()))
        assert cell.p == pytest.approx(1.0)
        assert cell.mu == pytest.approx(1.0, abs=1e-10)
        assert cell.sigma2 == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("dist, ref", SCIPY_TWINS, ids=lambda x: repr(x)[:30])
def test_moments_match_scipy(dist, ref):
    m = moments(dist)
    mean, var, skew, exkurt = ref.stats(moments="mvsk")
    assert m.mu == pytest.approx(float(mean), rel=1e-12, abs=1e-14)
    assert m.sigma2 == pytest.approx(float(var), rel=1e-10)
    assert m.gamma3 == pytest.approx(float(skew), rel=1e-8, abs=1e-12)
    assert m.gamma4 == pytest.approx(float(exkurt) + 3.0, rel=1e-8)


@pytest.mark.parametrize("dist, ref", SCIPY_TWINS, ids=lambda x: repr(x)[:30])
@pytest.mark.parametrize("k", [3, 5])
def test_abs_central_moments_match_scipy_quad(dist, ref, k):
    mu = float(ref.mean())
    lo, hi = ref.support()
    pieces = [(lo, mu), (mu, hi)]
    ref_val = sum(sint.quad(lambda x: abs(x - mu) ** k * ref.pdf(x), a, b,
                            epsabs=1e-13, epsrel=1e-12, limit=200)[0] for a, b in pieces)
    assert moments(dist).abs_central[k] == pytest.approx(ref_val, rel=1e-8)


@pytest.mark.parametrize("dist, ref", SCIPY_TWINS, ids=lambda x: repr(x)[:30])
def test_primitives_match_scipy(dist, ref):
    q = np.linspace(0.01, 0.99, 25)
    x = ref.ppf(q)
    np.testing.assert_allclose(dist.cdf(x), ref.cdf(x), rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(dist.pdf(x), ref.pdf(x), rtol=1e-11)
    np.testing.assert_allclose(dist.ppf(q), x, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("dist, ref", SCIPY_TWINS, ids=lambda x: repr(x)[:30])
def test_partial_expectations_match_quadrature(dist, ref):
    lo, hi = ref.support()
    for t in ref.ppf([0.1, 0.5, 0.8]):
        low = sint.quad(lambda x: (t - x) * ref.pdf(x), lo, t, epsabs=1e-13)[0]
        up = sint.quad(lambda x: (x - t) * ref.pdf(x), t, hi, epsabs=1e-13)[0]
        assert dist.lower_partial(t) == pytest.approx(low, rel=1e-9, abs=1e-12)
        assert dist.upper_partial(t) == pytest.approx(up, rel=1e-9, abs=1e-12)


def test_truncated_exponential_matches_high_precision_reference():
    import mpmath as mp

    d = Exponential(1.0).truncated()
    assert d.support.bounded
    with mp.workdps(40):
        hi = mp.mpf(d.support.hi)
        z = 1 - mp.exp(-hi)
        e = lambda f: mp.quad(lambda x: f(x) * mp.exp(-x), [0, 1, 5, hi]) / z
        mu = e(lambda x: x)
        var = e(lambda x: (x - mu) ** 2)
        g3 = e(lambda x: (x - mu) ** 3) / var**1.5
        g4 = e(lambda x: (x - mu) ** 4) / var**2
        ref = tuple(float(v) for v in (mu, var, g3, g4))
    m = moments(d)
    assert (m.mu, m.sigma2, m.gamma3, m.gamma4) == pytest.approx(ref, rel=1e-12)
    # dropping 1e-12 of tail mass moves the fourth moment by ~ hi^4 * 1e-12
    assert m.gamma4 == pytest.approx(9.0, abs=1e-6)


def test_discrete_moments_by_hand():
    d = FiniteDiscrete([(0, 0.5), (2, 0.5)])
    m = moments(d)
    assert (m.mu, m.sigma2, m.gamma3, m.gamma4) == pytest.approx((1, 1, 0, 1))
    assert m.abs_central[3] == pytest.approx(1.0)


def test_point_mass_convention():
    m = moments(FiniteDiscrete([(1.0, 1.0)]))
    assert (m.mu, m.sigma2, m.gamma3, m.gamma4) == (1.0, 0.0, 0.0, 1.0)


def test_empirical_is_plugin_law():
    d = Empirical([1.0, 2.0, 3.0, 4.0])
    m = moments(d)
    assert m.mu == 2.5
    assert m.sigma2 == pytest.approx(1.25)


def test_discrete_rejects_bad_probabilities():
    with pytest.raises(ValueError):
        FiniteDiscrete([(0, 0.5), (1, 0.4)])
    with pytest.raises(ValueError):
        FiniteDiscrete([(0, 1.2), (1, -0.2)])


def test_support_interval_rejects_reversed():
    with pytest.raises(ValueError):
        SupportInterval(1.0, 0.0)


@pytest.mark.parametrize("spec, expected", [
    ("uniform:0,2", Uniform(0.0, 2.0)),
    ("exp:1", Exponential(1.0)),
    ("normal:0,1", Normal(0.0, 1.0)),
    ("beta:2,3", Beta(2.0, 3.0)),
    ("discrete:0@0.5,2@0.5", FiniteDiscrete([(0, 0.5), (2, 0.5)])),
])
def test_parse_distribution(spec, expected):
    assert parse_distribution(spec) == expected


@pytest.mark.parametrize("spec", ["", "uniform:2,0", "gamma:1", "exp:-1", "beta:1", "discrete:1@2"])
def test_parse_distribution_rejects(spec):
    with pytest.raises(SpecParseError):
        parse_distribution(spec)


def test_read_samples(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("# header\n1\n2\n\n3\n4\n")
    d = read_samples(p)
    assert moments(d).mu == 2.5


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

shape = st.floats(0.3, 8.0)


@settings(max_examples=60, deadline=None)
@given(shape, shape)
def test_kurtosis_dominates_squared_skewness(a, b):
    m = moments(Beta(a, b))
    assert m.gamma4 >= m.gamma3**2 + 1 - 1e-9


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(0.05, 1.0)), min_size=2, max_size=8,
                unique_by=lambda p: p[0]))
def test_discrete_invariants(pairs):
    w = np.array([p for _, p in pairs])
    w = w / w.sum()
    d = FiniteDiscrete(list(zip([x for x, _ in pairs], w.tolist())))
    m = moments(d)
    assert m.sigma2 >= 0
    if m.sigma2 > 1e-12:
        assert m.gamma4 >= m.gamma3**2 + 1 - 1e-7
    for t in np.linspace(-12, 12, 13):
        assert mean_abs_dev_at(d, t) >= abs(m.mu - t) - 1e-12


@settings(max_examples=40, deadline=None)
@given(shape, shape, st.lists(st.floats(0.05, 0.95), min_size=1, max_size=3, unique=True))
def test_law_of_total_variance(a, b, cuts):
    d = Beta(a, b)
    cuts = sorted(cuts)
    cells = [c for c in cell_stats(d, PartitionSpec(tuple(cuts))) if c.defined]
    m = moments(d)
    assert math.fsum(c.p for c in cells) == pytest.approx(1.0, abs=1e-10)
    within = math.fsum(c.p * c.sigma2 for c in cells)
    between = math.fsum(c.p * (c.mu - m.mu) ** 2 for c in cells)
    assert within + between == pytest.approx(m.sigma2, rel=1e-7, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(-5, 5), st.floats(0.1, 5), st.floats(-8, 8))
def test_mean_abs_dev_dominates_distance_to_mean(mean, sd, t):
    d = Normal(mean, sd)
    assert mean_abs_dev_at(d, t) >= abs(mean - t) - 1e-12
