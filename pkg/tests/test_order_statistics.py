import math

import numpy as np
import pytest
from scipy import stats

from gbxii import distribution as dist
from gbxii import order_statistics as ost
from gbxii.distribution import Params
from gbxii.errors import DomainError, MomentExistenceError
from gbxii.numerics import Interval, integrate
from gbxii.order_statistics import OrderStatSpec
from gbxii.sampling import RngState, sample_inverse_cdf

from .conftest import GRID, grid_id

# log(0) at the lower endpoint is intended; the lam^(m n) variant is zero there
pytestmark = pytest.mark.filterwarnings("ignore:divide by zero encountered:RuntimeWarning")

STD = Params()
BASE_SEED = 20261016


def _rng(tag):
    return RngState(_sequence=np.random.SeedSequence(BASE_SEED, spawn_key=(200, tag)))


def _interior(params):
    return dist.quantile(params, np.linspace(0.05, 0.95, 10))


def _max_pdf_lam_mn(params, n, x):
    """Maximum density written with an overall factor lam^(m n) instead of lam^m."""
    lam, theta, m, p = params.lam, params.theta, params.m, params.p
    x = np.asarray(x, dtype=float)
    log_base = np.logaddexp(np.log(lam), np.log(theta) + p * np.log(x))
    # (lam + theta x^p)^m - lam^m, formed without overflow
    y = m * (log_base - np.log(lam))
    log_bracket = m * np.log(lam) + y + np.log(-np.expm1(-y))
    log_val = (
        m * n * np.log(lam) + np.log(m * n * theta * p) + (p - 1) * np.log(x)
        + (n - 1) * log_bracket - (m * n + 1) * log_base
    )
    return np.exp(log_val)


class TestSpec:
    @pytest.mark.parametrize("n,r", [(0, 1), (3, 0), (2, 3), (2.5, 1), (True, 1)])
    def test_invalid(self, n, r):
        with pytest.raises(DomainError):
            OrderStatSpec(n, r)

    def test_tuple_accepted(self):
        assert ost.order_stat_pdf(STD, (2, 1), 1.0) == ost.order_stat_pdf(STD, OrderStatSpec(2, 1), 1.0)


class TestDensity:
    def test_single_observation(self):
        for params in GRID[::7]:
            x = _interior(params)
            np.testing.assert_allclose(ost.order_stat_pdf(params, (1, 1), x), dist.pdf(params, x), rtol=1e-13)

    def test_min_of_two(self):
        assert ost.order_stat_pdf(STD, (2, 1), 1.0) == pytest.approx(0.25, rel=1e-14)

    def test_max_of_two(self):
        assert ost.max_pdf(STD, 2, 1.0) == pytest.approx(0.25, rel=1e-14)
        x = _interior(GRID[5])
        np.testing.assert_allclose(ost.max_pdf(GRID[5], 1, x), dist.pdf(GRID[5], x), rtol=1e-13)

    def test_below_support(self):
        assert ost.order_stat_pdf(Params(mu=2.0), (3, 2), 1.0) == 0.0

    @pytest.mark.parametrize("params", GRID, ids=grid_id)
    def test_decomposition(self, params):
        x = _interior(params)
        for n in range(1, 9):
            total = sum(ost.order_stat_pdf(params, (n, r), x) for r in range(1, n + 1))
            np.testing.assert_allclose(total, n * dist.pdf(params, x), rtol=1e-10)

    @pytest.mark.parametrize("params", [g for g in GRID if g.is_standard], ids=grid_id)
    def test_expanded_form(self, params):
        x = _interior(params)
        for n, r in [(1, 1), (3, 1), (3, 2), (5, 5), (6, 3)]:
            np.testing.assert_allclose(
                ost.order_stat_pdf(params, (n, r), x),
                ost.order_stat_pdf_expanded(params, (n, r), x),
                rtol=1e-10,
            )

    def test_expanded_form_needs_standard(self):
        with pytest.raises(DomainError):
            ost.order_stat_pdf_expanded(Params(mu=1.0), (2, 1), 2.0)

    @pytest.mark.parametrize("n,r", [(5, 1), (5, 3), (5, 5), (7, 7)])
    @pytest.mark.parametrize("params", GRID[::5], ids=grid_id)
    def test_normalizes(self, params, n, r):
        res = integrate(
            lambda d: ost.order_stat_pdf_offset(params, (n, r), d), Interval(0.0), 1e-10, vectorized=True
        )
        assert abs(res.value - 1) <= 1e-7

    def test_offset_matches_direct(self):
        params = Params(1, 2, 1.5, 0.5, 2, 1.5)
        d = np.array([0.1, 1.0, 10.0])
        np.testing.assert_allclose(
            ost.order_stat_pdf_offset(params, (4, 2), d), ost.order_stat_pdf(params, (4, 2), 1.0 + d), rtol=1e-13
        )

    @pytest.mark.parametrize("lam", [0.5, 2.0])
    def test_lam_mn_factor_mass(self, lam):
        """The lam^(m n) variant carries lam^(m(n-1)) times the correct mass."""
        params = Params(0, 1, lam, 1.5, 2.0, 1.3)
        n = 4
        x = _interior(params)
        np.testing.assert_allclose(
            _max_pdf_lam_mn(params, n, x), lam ** (params.m * (n - 1)) * ost.max_pdf(params, n, x), rtol=1e-10
        )
        res = integrate(lambda t: _max_pdf_lam_mn(params, n, t), Interval(0.0), 1e-10, vectorized=True)
        assert res.value == pytest.approx(lam ** (params.m * (n - 1)), rel=1e-8)

    def test_lam_mn_factor_harmless_at_unit_lambda(self):
        params = Params(0, 1, 1, 1.5, 2.0, 1.3)
        x = _interior(params)
        np.testing.assert_allclose(_max_pdf_lam_mn(params, 4, x), ost.max_pdf(params, 4, x), rtol=1e-12)


class TestCdf:
    def test_single_observation(self):
        params = GRID[20]
        x = _interior(params)
        np.testing.assert_allclose(ost.order_stat_cdf(params, (1, 1), x), dist.cdf(params, x), atol=1e-14)

    def test_limits(self):
        params = Params(mu=1.0)
        assert ost.order_stat_cdf(params, (4, 2), 1.0) == 0.0
        assert ost.order_stat_cdf(params, (4, 2), 1e300) == 1.0

    def test_closed_form_min(self):
        x = np.array([0.3, 1.0, 4.0])
        np.testing.assert_allclose(
            ost.order_stat_cdf(STD, (3, 1), x), 1 - (1 / (1 + x)) ** 3, atol=1e-13
        )

    @pytest.mark.parametrize("params", GRID[::3], ids=grid_id)
    def test_monotone_and_derivative(self, params):
        x = _interior(params)
        for n, r in [(3, 1), (5, 3), (5, 5)]:
            F = ost.order_stat_cdf(params, (n, r), x)
            assert np.all(np.diff(F) >= 0)
            h = 1e-5 * (x - params.mu)
            fd = (ost.order_stat_cdf(params, (n, r), x + h) - ost.order_stat_cdf(params, (n, r), x - h)) / (2 * h)
            f = ost.order_stat_pdf(params, (n, r), x)
            assert np.all(np.abs(fd - f) <= 1e-5 * np.maximum(1.0, f))


class TestMinLaw:
    def test_n_one(self):
        assert ost.min_distribution(GRID[3], 1) == GRID[3]

    def test_min_of_two_lomax(self):
        law = ost.min_distribution(STD, 2)
        assert law == Params(m=2.0)
        assert dist.cdf(law, 1.0) == pytest.approx(0.75, rel=1e-15)

    @pytest.mark.parametrize("params", GRID, ids=grid_id)
    def test_survival_power(self, params):
        x = _interior(params)
        np.testing.assert_allclose(
            dist.cdf(ost.min_distribution(params, 5), x), 1 - dist.survival(params, x) ** 5, atol=1e-12
        )

    def test_simulated_minima(self):
        params = Params(0.5, 2, 1.5, 0.7, 1.3, 1.7)
        draws = sample_inverse_cdf(_rng(1), params, 5 * 20_000).values.reshape(-1, 5).min(axis=1)
        law = ost.min_distribution(params, 5)
        assert stats.kstest(draws, lambda x: dist.cdf(law, x)).statistic < 1.36 / math.sqrt(20_000)


class TestMinMoments:
    def test_min_of_two_lomax_mean(self):
        assert ost.min_moment(STD, 2, 1) == pytest.approx(1.0, rel=1e-13)
        assert ost.min_mean(STD, 2) == pytest.approx(1.0, rel=1e-13)

    def test_lomax_three_variance(self):
        assert ost.min_variance(STD, 3) == pytest.approx(0.75, rel=1e-13)

    def test_existence(self):
        with pytest.raises(MomentExistenceError) as info:
            ost.min_mean(STD, 1)
        assert info.value.condition == "mn > q/p"
        assert "mn <= q/p" in str(info.value)
        with pytest.raises(MomentExistenceError):
            ost.min_moment(STD, 2, 2)

    def test_needs_standard(self):
        with pytest.raises(DomainError):
            ost.min_moment(Params(mu=1.0, m=3.0), 2, 1)

    @pytest.mark.parametrize("params", [g for g in GRID if g.m * 3 > 2 / g.p], ids=grid_id)
    def test_reduces_for_n_one(self, params):
        if params.m > 2 / params.p:
            assert ost.min_mean(params, 1) == pytest.approx(dist.mean(params), rel=1e-12)
            assert ost.min_variance(params, 1) == pytest.approx(dist.variance(params), rel=1e-11)

    @pytest.mark.parametrize("params", [g for g in GRID if g.is_standard], ids=grid_id)
    def test_consistency(self, params):
        for n in (2, 5):
            law = ost.min_distribution(params, n)
            for q in (1.0, 2.0):
                if params.m * n > q / params.p:
                    assert ost.min_moment(params, n, q) == pytest.approx(dist.raw_moment(law, q), rel=1e-12)
            if params.m * n > 2 / params.p:
                m1 = ost.min_moment(params, n, 1)
                m2 = ost.min_moment(params, n, 2)
                assert ost.min_variance(params, n) == pytest.approx(m2 - m1 * m1, rel=1e-10)

    def test_location_scale(self):
        params = Params(3, 2, 1.5, 0.5, 1.2, 2.0)
        std = params.standardized()
        assert ost.min_mean(params, 4) == pytest.approx(3 + 2 * ost.min_mean(std, 4), rel=1e-14)
        assert ost.min_variance(params, 4) == pytest.approx(4 * ost.min_variance(std, 4), rel=1e-14)

    def test_monte_carlo_mean(self):
        params = Params(0, 1, 1, 1, 1, 1)
        reps = 20_000
        minima = sample_inverse_cdf(_rng(2), params, 4 * reps).values.reshape(-1, 4).min(axis=1)
        se = math.sqrt(ost.min_variance(params, 4) / reps)
        assert abs(minima.mean() - ost.min_mean(params, 4)) <= 3 * se
