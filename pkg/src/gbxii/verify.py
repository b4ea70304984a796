"""Self-verification suite: every invariant, at every grid point.

Each check maps a parameter point to ``(observed_error, tolerance)`` and
passes iff ``observed_error <= tolerance``.  Oracles are independent of the
closed forms they test: quadrature of the density, finite differences,
Monte Carlo.  Quadrature runs in offset coordinates ``d = x - mu`` so the
mass within one ulp of ``mu`` (large when ``p < 1``) is not lost.

Functions from :mod:`gbxii.distribution` are looked up through the module
at call time, so a patched density is what gets verified.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import distribution as dist
from . import order_statistics as ost
from . import sampling
from .distribution import PARAM_NAMES, Params
from .errors import DomainError, MomentExistenceError
from .numerics import Interval, integrate

__all__ = [
    "CHECKS",
    "VerificationRow",
    "VerificationReport",
    "default_grid",
    "load_grid",
    "run_verification",
]

_LEVELS = np.linspace(0.1, 0.9, 9)
_ROUNDTRIP_LEVELS = np.array(
    [1e-9, 1e-6, 1e-3, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1 - 1e-3, 1 - 1e-6, 1 - 1e-9]
)
_KS_DRAWS = 20_000
_SEED = 20261016


def default_grid() -> list[Params]:
    """72 points: lambda/theta in {0.5, 1, 2}, m in {0.5, 1, 2, 5}, p in {0.5, 1, 2.5},
    (mu, sigma) in {(0, 1), (1, 2)}."""
    pairs = ((1.0, 2.0), (1.5, 1.5), (2.0, 1.0))
    grid = []
    for (lam, theta), m, p, (mu, sigma) in itertools.product(
        pairs, (0.5, 1.0, 2.0, 5.0), (0.5, 1.0, 2.5), ((0.0, 1.0), (1.0, 2.0))
    ):
        grid.append(Params(mu, sigma, lam, theta, m, p))
    return grid


def load_grid(path) -> list[Params]:
    """CSV with a header drawn from ``mu,sigma,lambda,theta,m,p``; missing columns take defaults."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DomainError(f"grid file {path} is empty")
        unknown = set(reader.fieldnames) - set(PARAM_NAMES)
        if unknown:
            raise DomainError(f"unknown grid column(s): {', '.join(sorted(unknown))}")
        grid = []
        for row in reader:
            try:
                values = {k: float(v) for k, v in row.items() if v not in (None, "")}
            except ValueError as exc:
                raise DomainError(f"bad grid value: {exc}") from None
            grid.append(Params.from_dict(values))
    if not grid:
        raise DomainError(f"grid file {path} has no rows")
    return grid


# -- helpers -----------------------------------------------------------------


def _offsets(params, levels=_LEVELS):
    """Offsets x - mu of the given quantile levels, without rounding through x."""
    return params.sigma * np.asarray(dist.quantile(params.standardized(), levels))


def _rel(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def _point_rng(index, salt):
    seq = np.random.SeedSequence(_SEED, spawn_key=(index, salt))
    return sampling.RngState(_sequence=seq)


# -- checks --------------------------------------------------------------------


def check_normalization(params, index):
    res = integrate(
        lambda d: dist.pdf_offset(params, d), Interval(0.0), 1e-10, vectorized=True
    )
    return abs(res.value - 1.0), 1e-8


def check_cdf_quadrature(params, index):
    worst = 0.0
    for d in _offsets(params):
        res = integrate(
            lambda t: dist.pdf_offset(params, t), Interval(0.0, float(d)), 1e-10, vectorized=True
        )
        F = -math.expm1(dist.log_survival(params.standardized(), d / params.sigma))
        worst = max(worst, abs(F - res.value))
    return worst, 1e-7


def check_interval_probability(params, index):
    rng = _point_rng(index, 1)
    u = np.sort(rng.uniform(10).reshape(5, 2), axis=1)
    worst = 0.0
    for a1, a2 in dist.quantile(params, u):
        if not a1 < a2:
            continue
        direct = dist.interval_probability(params, a1, a2)
        worst = max(worst, abs(direct - (dist.cdf(params, a2) - dist.cdf(params, a1))))
    return worst, 1e-12


def check_quantile_roundtrip(params, index):
    u = _ROUNDTRIP_LEVELS
    return float(np.max(np.abs(dist.cdf(params, dist.quantile(params, u)) - u))), 1e-9


def check_cdf_derivative(params, index):
    # error measured in units of the allowed band max(1e-6, 1e-4 f)
    worst = 0.0
    for x in dist.quantile(params, _LEVELS):
        h = 1e-5 * (x - params.mu)
        fd = (dist.cdf(params, x + h) - dist.cdf(params, x - h)) / (2.0 * h)
        f = dist.pdf(params, x)
        worst = max(worst, abs(fd - f) / max(1e-6, 1e-4 * f))
    return worst, 1.0


def check_lambda_theta_scaling(params, index):
    x = dist.quantile(params, _LEVELS)
    base = dist.pdf(params, x)
    worst = 0.0
    for c in (1e-3, 1e3):
        scaled = params.replace(lam=params.lam * c, theta=params.theta * c)
        worst = max(worst, _rel(dist.pdf(scaled, x), base))
    return worst, 1e-12


def check_sigma_theta_redundancy(params, index):
    x = dist.quantile(params, _LEVELS)
    folded = params.replace(sigma=1.0, theta=params.theta * params.sigma ** (-params.p))
    return _rel(dist.pdf(folded, x), dist.pdf(params, x)), 1e-12


def check_special_case_reduction(params, index):
    ordinary = Params(0.0, 1.0, 1.0, params.theta, params.m, params.p)
    x = dist.quantile(ordinary, _LEVELS)
    naive = 1.0 - (1.0 + params.theta * x ** params.p) ** (-params.m)
    return float(np.max(np.abs(dist.cdf(ordinary, x) - naive))), 1e-14


def check_raw_moment_quadrature(params, index):
    std = params.standardized()
    worst = 0.0
    for n in (1, 2):
        if not std.m > n / std.p + 0.1:
            continue
        res = integrate(
            lambda z, n=n: np.exp(n * np.log(z) + dist.log_pdf_offset(std, z)),
            Interval(0.0),
            1e-10,
            vectorized=True,
        )
        worst = max(worst, abs(dist.raw_moment(std, n) - res.value) / res.value)
    return worst, 1e-6


def _raises_existence(fn, *args):
    try:
        fn(*args)
    except MomentExistenceError:
        return True
    return False


def check_mean_variance(params, index):
    std = params.standardized()
    worst = 0.0
    if std.m > 1.0 / std.p:
        e1 = dist.raw_moment(std, 1)
        worst = max(worst, _rel(dist.mean(params), params.mu + params.sigma * e1))
        if std.m > 2.0 / std.p:
            e2 = dist.raw_moment(std, 2)
            worst = max(worst, _rel(dist.variance(params), params.sigma ** 2 * (e2 - e1 * e1)))
        elif not _raises_existence(dist.variance, params):
            worst = math.inf
    elif not (_raises_existence(dist.mean, params) and _raises_existence(dist.raw_moment, std, 1)):
        worst = math.inf
    return worst, 1e-12


def check_orderstat_decomposition(params, index):
    x = dist.quantile(params, _LEVELS)
    f = dist.pdf(params, x)
    worst = 0.0
    for n in range(1, 9):
        total = sum(ost.order_stat_pdf(params, (n, r), x) for r in range(1, n + 1))
        worst = max(worst, _rel(total, n * f))
    return worst, 1e-10


def check_orderstat_closed_form(params, index):
    std = params.standardized()
    x = dist.quantile(std, np.linspace(0.2, 0.8, 7))
    worst = 0.0
    for spec in ((5, 1), (5, 3), (5, 5)):
        worst = max(worst, _rel(ost.order_stat_pdf(std, spec, x), ost.order_stat_pdf_expanded(std, spec, x)))
    return worst, 1e-10


def check_orderstat_normalization(params, index):
    worst = 0.0
    for spec in ((5, 1), (5, 3), (5, 5), (7, 7)):
        res = integrate(
            lambda d, spec=spec: ost.order_stat_pdf_offset(params, spec, d),
            Interval(0.0),
            1e-10,
            vectorized=True,
        )
        worst = max(worst, abs(res.value - 1.0))
    return worst, 1e-7


def check_orderstat_cdf_derivative(params, index):
    worst = 0.0
    for spec in ((5, 1), (5, 3), (5, 5)):
        for x in dist.quantile(params, _LEVELS):
            h = 1e-5 * (x - params.mu)
            fd = (ost.order_stat_cdf(params, spec, x + h) - ost.order_stat_cdf(params, spec, x - h)) / (2 * h)
            f = ost.order_stat_pdf(params, spec, x)
            worst = max(worst, abs(fd - f) / max(1.0, f))
    return worst, 1e-5


def check_min_law_reduction(params, index):
    x = dist.quantile(params, _LEVELS)
    worst = 0.0
    for n in (2, 5):
        law = ost.min_distribution(params, n)
        expected = -np.expm1(n * np.asarray(dist.log_survival(params, x)))
        worst = max(worst, float(np.max(np.abs(dist.cdf(law, x) - expected))))
    return worst, 1e-12


def check_min_moment_consistency(params, index):
    std = params.standardized()
    n = 3
    worst = 0.0
    for q in (1, 2):
        if std.m * n > q / std.p:
            worst = max(worst, _rel(ost.min_moment(std, n, q), dist.raw_moment(ost.min_distribution(std, n), q)))
        elif not _raises_existence(ost.min_moment, std, n, q):
            worst = math.inf
    if std.m * n > 2 / std.p:
        m1 = ost.min_moment(std, n, 1)
        m2 = ost.min_moment(std, n, 2)
        worst = max(worst, _rel(ost.min_variance(params, n), params.sigma ** 2 * (m2 - m1 * m1)))
        worst = max(worst, _rel(ost.min_mean(params, n), params.mu + params.sigma * m1))
    return worst, 1e-12


def check_sampler_coupling(params, index):
    a = sampling.sample_inverse_cdf(_point_rng(index, 2), params, 1000).values
    b = sampling.sample_exp_transform(_point_rng(index, 2), params, 1000).values
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a)))), 1e-12


def _ks_statistic(values, params):
    x = np.sort(values)
    n = x.size
    F = np.asarray(dist.cdf(params, x))
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def _ks_critical(n, alpha):
    # Kolmogorov tail P(K > c) ~ 2 exp(-2 c^2); Stephens' finite-n correction
    c = math.sqrt(-0.5 * math.log(alpha / 2.0))
    return c / (math.sqrt(n) + 0.12 + 0.11 / math.sqrt(n))


def _sampler_check(method, salt):
    fn = {
        "inverse_cdf": sampling.sample_inverse_cdf,
        "ratio": sampling.sample_ratio,
        "exp_transform": sampling.sample_exp_transform,
    }[method]

    def check(params, index, *, alpha=None):
        batch = fn(_point_rng(index, salt), params, _KS_DRAWS)
        if np.any(batch.values < params.mu):
            return math.inf, 0.0
        return _ks_statistic(batch.values, params), _ks_critical(_KS_DRAWS, alpha)

    check.__name__ = f"check_sampler_ks_{method}"
    return check


CHECKS = {
    "cdf_derivative": check_cdf_derivative,
    "cdf_quadrature": check_cdf_quadrature,
    "interval_probability": check_interval_probability,
    "lambda_theta_scaling": check_lambda_theta_scaling,
    "mean_variance": check_mean_variance,
    "min_law_reduction": check_min_law_reduction,
    "min_moment_consistency": check_min_moment_consistency,
    "normalization": check_normalization,
    "orderstat_cdf_derivative": check_orderstat_cdf_derivative,
    "orderstat_closed_form": check_orderstat_closed_form,
    "orderstat_decomposition": check_orderstat_decomposition,
    "orderstat_normalization": check_orderstat_normalization,
    "quantile_roundtrip": check_quantile_roundtrip,
    "raw_moment_quadrature": check_raw_moment_quadrature,
    "sampler_coupling": check_sampler_coupling,
    "sampler_ks_exp_transform": _sampler_check("exp_transform", 3),
    "sampler_ks_inverse_cdf": _sampler_check("inverse_cdf", 4),
    "sampler_ks_ratio": _sampler_check("ratio", 5),
    "sigma_theta_redundancy": check_sigma_theta_redundancy,
    "special_case_reduction": check_special_case_reduction,
}

_KS_CHECKS = {name for name in CHECKS if name.startswith("sampler_ks_")}


# -- report ------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationRow:
    check: str
    params: Params
    observed_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.observed_error <= self.tolerance


class VerificationReport:
    HEADER = ("check", "params", "observed_error", "tolerance", "pass")

    def __init__(self, rows):
        self.rows = list(rows)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def failures(self):
        return [row for row in self.rows if not row.passed]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.HEADER)
        for row in self.rows:
            writer.writerow((
                row.check,
                str(row.params),
                format(row.observed_error, ".17g"),
                format(row.tolerance, ".17g"),
                "true" if row.passed else "false",
            ))
        return buf.getvalue()


def _run_point(args):
    index, params, names, ks_alpha = args
    out = []
    for name in names:
        fn = CHECKS[name]
        try:
            if name in _KS_CHECKS:
                observed, tol = fn(params, index, alpha=ks_alpha)
            else:
                observed, tol = fn(params, index)
        except Exception:  # a crashing check is a failing check
            observed, tol = math.inf, 0.0
        if math.isnan(observed):
            observed = math.inf
        out.append((name, index, VerificationRow(name, params, float(observed), float(tol))))
    return out


def run_verification(grid=None, *, checks=None, jobs: int = 1) -> VerificationReport:
    """Run ``checks`` (default: all) over ``grid`` (default: :func:`default_grid`).

    Rows are sorted by check name, then grid position.  The KS checks share a
    family-wise 1% level, split evenly (Bonferroni) across all KS rows.
    """
    grid = list(default_grid() if grid is None else grid)
    names = sorted(CHECKS if checks is None else checks)
    unknown = set(names) - set(CHECKS)
    if unknown:
        raise DomainError(f"unknown check(s): {', '.join(sorted(unknown))}")
    n_ks = max(1, len(_KS_CHECKS.intersection(names)) * len(grid))
    ks_alpha = 0.01 / n_ks
    tasks = [(i, p, names, ks_alpha) for i, p in enumerate(grid)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_point, tasks))
    else:
        results = [_run_point(t) for t in tasks]
    flat = [item for chunk in results for item in chunk]
    flat.sort(key=lambda item: (item[0], item[1]))
    return VerificationReport(row for _, _, row in flat)
