import math

import numpy as np
import pytest
from scipy import stats

from gbxii import distribution as dist
from gbxii.distribution import Params
from gbxii.errors import DomainError
from gbxii.sampling import (
    METHODS,
    RngState,
    sample,
    sample_exp_transform,
    sample_exponential,
    sample_gamma,
    sample_inverse_cdf,
    sample_ratio,
)

N = 100_000
BASE_SEED = 20261016
KS95 = 1.36 / math.sqrt(N)


def _ks(values, params):
    return stats.kstest(values, lambda x: dist.cdf(params, x)).statistic


def _rng(tag):
    """Stream derived from the pre-registered base seed; ``tag`` keeps tests independent."""
    return RngState(_sequence=np.random.SeedSequence(BASE_SEED, spawn_key=(100, tag)))


def _seed(tag):
    """Integer seed derived from the pre-registered base, for :func:`sample`."""
    state = np.random.SeedSequence(BASE_SEED, spawn_key=(101, tag)).generate_state(1, np.uint64)
    return int(state[0])


class _FixedUniform:
    """Stand-in generator that returns prescribed uniforms."""

    seed = 0

    def __init__(self, values):
        self.values = np.asarray(values, dtype=float)

    def uniform(self, n):
        return self.values[:n]


class TestRngState:
    def test_reproducible(self):
        np.testing.assert_array_equal(RngState(7).raw(10), RngState(7).raw(10))

    def test_distinct_seeds(self):
        assert not np.array_equal(RngState(7).raw(10), RngState(8).raw(10))

    def test_uniform_range_and_resolution(self):
        u = RngState(1).uniform(N)
        assert u.min() >= 0 and u.max() < 1
        assert np.all(u * 2 ** 53 == np.floor(u * 2 ** 53))

    def test_uniform_is_top_53_bits(self):
        raw = RngState(3).raw(5)
        expected = (raw >> np.uint64(11)).astype(float) * 2.0 ** -53
        np.testing.assert_array_equal(RngState(3).uniform(5), expected)

    def test_split_deterministic(self):
        a = [s.raw(3) for s in RngState(5).split(3)]
        b = [s.raw(3) for s in RngState(5).split(3)]
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x, y)
        assert not np.array_equal(a[0], a[1])

    @pytest.mark.parametrize("seed", [-1, 2 ** 64, 1.5, True])
    def test_bad_seed(self, seed):
        with pytest.raises(DomainError):
            RngState(seed)

    def test_normal_moments(self):
        z = RngState(11).normal(N)
        assert abs(z.mean()) < 3 / math.sqrt(N)
        assert abs(z.var() - 1) < 3 * math.sqrt(2 / N)


class TestExponential:
    def test_mean(self):
        y = sample_exponential(_rng(20), 1.0, N)
        assert abs(y.mean() - 1) <= 3 / math.sqrt(N)

    def test_rate_halves(self):
        np.testing.assert_array_equal(
            sample_exponential(_rng(21), 2.0, 1000), sample_exponential(_rng(21), 1.0, 1000) / 2
        )

    def test_positive(self):
        assert np.all(sample_exponential(_rng(22), 1.0, N) > 0)

    def test_scalar(self):
        assert isinstance(sample_exponential(_rng(23), 1.0), float)

    def test_bad_rate(self):
        with pytest.raises(DomainError):
            sample_exponential(_rng(0), 0.0, 3)


class TestGamma:
    @pytest.mark.parametrize("lam", [0.5, 3.0])
    def test_shape_one_is_exponential(self, lam):
        y = sample_gamma(_rng(30), 1.0, lam, N)
        assert stats.kstest(y, lambda x: -np.expm1(-lam * x)).statistic < KS95

    def test_mean(self):
        y = sample_gamma(_rng(31), 2.0, 3.0, N)
        se = math.sqrt(2.0) / 3.0 / math.sqrt(N)
        assert abs(y.mean() - 2 / 3) <= 3 * se

    def test_small_shape(self):
        y = sample_gamma(_rng(32), 0.5, 1.0, N)
        assert np.all(np.isfinite(y)) and np.all(y > 0)
        assert stats.kstest(y, stats.gamma(0.5).cdf).pvalue > 0.01

    @pytest.mark.parametrize("shape,rate", [(0.2, 2.0), (1.7, 0.5), (12.0, 4.0)])
    def test_law(self, shape, rate):
        y = sample_gamma(_rng(33), shape, rate, N)
        assert stats.kstest(y, stats.gamma(shape, scale=1 / rate).cdf).pvalue > 0.01


class TestInverseCdf:
    def test_ks(self):
        params = Params(0, 1, 2, 3, 1.5, 2)
        assert _ks(sample_inverse_cdf(_rng(40), params, N).values, params) < KS95

    def test_forced_median(self):
        batch = sample_inverse_cdf(_FixedUniform([0.5]), Params(), 1)
        assert batch.values[0] == pytest.approx(1.0, rel=1e-15)

    def test_support(self):
        params = Params(mu=3.0, p=0.5)
        assert sample_inverse_cdf(_rng(41), params, N).values.min() >= 3.0


class TestRatio:
    def test_ks_default(self):
        assert _ks(sample_ratio(_rng(50), Params(), N).values, Params()) < KS95

    def test_two_sample_against_inverse_cdf(self):
        params = Params(0, 1, 2, 3, 1.5, 2)
        a = sample_ratio(_rng(51), params, N).values
        b = sample_inverse_cdf(_rng(52), params, N).values
        assert stats.ks_2samp(a, b).pvalue > 0.05

    def test_exp_over_exp_median(self):
        v = sample_ratio(_rng(53), Params(), N).values
        # median of Y1/Y2 for unit exponentials is 1; se of the sample median = 2/sqrt(N)
        assert abs(np.median(v) - 1) <= 3 * 2 / math.sqrt(N)

    def test_chi_square_equal_probability_bins(self):
        params = Params(1, 2, 1.5, 0.5, 2.5, 0.8)
        v = sample_ratio(_rng(54), params, N).values
        edges = dist.quantile(params, np.linspace(0, 1, 51)[1:-1])
        counts = np.bincount(np.searchsorted(edges, v), minlength=50)
        assert stats.chisquare(counts).pvalue > 0.01


class TestExpTransform:
    def test_ks(self):
        assert _ks(sample_exp_transform(_rng(60), Params(), N).values, Params()) < KS95

    @pytest.mark.parametrize("params", [Params(), Params(1, 2, 0.5, 3, 0.7, 2.5), Params(0, 1, 4, 0.1, 9, 0.4)])
    def test_coupling_with_inverse_cdf(self, params):
        a = sample_exp_transform(_rng(61), params, 5000).values
        b = sample_inverse_cdf(_rng(61), params, 5000).values
        np.testing.assert_allclose(a, b, rtol=1e-12)

    def test_shifted_form_when_lambda_equals_theta(self):
        params = Params(0.5, 1.5, 2.0, 2.0, 3.0, 1.7)
        a = sample_exp_transform(_rng(62), params, 2000, shifted_form=True).values
        b = sample_exp_transform(_rng(62), params, 2000).values
        np.testing.assert_allclose(a, b, rtol=1e-10)

    def test_shifted_form_rejected_otherwise(self):
        with pytest.raises(DomainError):
            sample_exp_transform(_rng(63), Params(lam=2.0), 10, shifted_form=True)


class TestSample:
    @pytest.mark.parametrize("method", METHODS)
    def test_reproducible(self, method):
        params = Params(1, 2, 1.5, 0.5, 2.5, 0.8)
        a = sample(params, 1000, 99, method)
        b = sample(params, 1000, 99, method)
        assert a.values.tobytes() == b.values.tobytes()
        assert (a.method, a.seed, a.params) == (method, 99, params)

    @pytest.mark.parametrize("method", METHODS)
    def test_support(self, method):
        params = Params(mu=2.0, p=0.3, m=5.0)
        assert sample(params, N, 7, method).values.min() >= 2.0

    @pytest.mark.slow
    @pytest.mark.parametrize("method", METHODS)
    def test_ks_rejection_rate(self, method):
        """Over many seeds the 95% KS bound is exceeded about 5% of the time."""
        trials = 100
        ks = []
        pvalues = []
        for k in range(trials):
            values = sample(Params(), N, _seed(1000 * (1 + METHODS.index(method)) + k), method).values
            res = stats.kstest(values, lambda x: dist.cdf(Params(), x))
            ks.append(res.statistic)
            pvalues.append(res.pvalue)
        rejections = int(np.sum(np.array(ks) > KS95))
        # binomial(100, 0.05) upper tail at 1e-3
        assert rejections <= int(stats.binom.isf(1e-3, trials, 0.05))
        assert stats.kstest(pvalues, "uniform").pvalue > 1e-3

    def test_methods_agree_pairwise(self):
        params = Params(0, 1, 2, 1, 0.5, 2.5)
        draws = {m: sample(params, N, _seed(10 + i), m).values for i, m in enumerate(METHODS)}
        for i, a in enumerate(METHODS):
            for b in METHODS[i + 1:]:
                assert stats.ks_2samp(draws[a], draws[b]).pvalue > 0.01

    def test_unknown_method(self):
        with pytest.raises(DomainError):
            sample(Params(), 10, 0, "bogus")

    @pytest.mark.parametrize("n", [0, -3, 2.5])
    def test_bad_size(self, n):
        with pytest.raises(DomainError):
            sample(Params(), n, 0)
