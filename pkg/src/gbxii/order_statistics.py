"""Order statistics of ``n`` independent draws from the family.

Densities go through ``log F`` and ``log(1 - F)`` rather than the expanded
form ``[(lam + theta x^p)^m - lam^m]^(r-1)``, which cancels catastrophically
for small ``x``.  The expanded form lives on in :func:`order_stat_pdf_expanded`
as a cross-check.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np

from . import distribution as dist
from .distribution import Params
from .errors import DomainError, MomentExistenceError
from .numerics import beta, log_beta, reg_inc_beta

__all__ = [
    "OrderStatSpec",
    "order_stat_log_pdf",
    "order_stat_pdf",
    "order_stat_pdf_offset",
    "order_stat_pdf_expanded",
    "order_stat_cdf",
    "min_distribution",
    "max_pdf",
    "min_moment",
    "min_mean",
    "min_variance",
]


def _positive_int(name, value):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise DomainError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class OrderStatSpec:
    """The ``r``-th smallest of ``n`` draws (``1 <= r <= n``)."""

    n: int
    r: int

    def __post_init__(self):
        object.__setattr__(self, "n", _positive_int("n", self.n))
        object.__setattr__(self, "r", _positive_int("r", self.r))
        if self.r > self.n:
            raise DomainError(f"rank must satisfy 1 <= r <= n, got r={self.r}, n={self.n}")


def _spec(spec):
    if isinstance(spec, OrderStatSpec):
        return spec
    n, r = spec
    return OrderStatSpec(n, r)


def _combine(spec, log_f, log_s):
    n, r = spec.n, spec.r
    out = log_f - log_beta(r, n - r + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        if r > 1:
            # log F = log(-expm1(log S))
            out = out + (r - 1) * np.log(-np.expm1(log_s))
        if n > r:
            out = out + (n - r) * log_s
    # off the support the density is zero whatever the power terms say
    return np.where(np.isneginf(log_f), -np.inf, out)


def order_stat_log_pdf(params: Params, spec, x):
    spec = _spec(spec)
    arr = np.asarray(x, dtype=float)
    out = _combine(
        spec,
        np.asarray(dist.log_pdf(params, arr)),
        np.asarray(dist.log_survival(params, arr)),
    )
    return float(out) if arr.ndim == 0 else out


def order_stat_pdf(params: Params, spec, x):
    """Density of ``X_(r:n)``: ``F^(r-1) (1-F)^(n-r) f / B(r, n-r+1)``."""
    out = np.exp(order_stat_log_pdf(params, spec, x))
    return float(out) if np.ndim(out) == 0 else out


def order_stat_pdf_offset(params: Params, spec, d):
    """:func:`order_stat_pdf` at ``x = mu + d``, resolved near ``mu``."""
    spec = _spec(spec)
    arr = np.asarray(d, dtype=float)
    std = params.standardized()
    out = np.exp(_combine(
        spec,
        np.asarray(dist.log_pdf_offset(params, arr)),
        np.asarray(dist.log_survival(std, arr / params.sigma)),
    ))
    return float(out) if arr.ndim == 0 else out


def order_stat_pdf_expanded(params: Params, spec, x):
    """Expanded closed form for the standardized member, plain arithmetic.

    ``lam^(m(n-r+1)) m theta p x^(p-1) [(lam + theta x^p)^m - lam^m]^(r-1)
    / (B(r, n-r+1) (lam + theta x^p)^(mn+1))``.  Kept as an oracle only.
    """
    spec = _spec(spec)
    if not params.is_standard:
        raise DomainError("the expanded form is stated for mu = 0, sigma = 1")
    n, r = spec.n, spec.r
    lam, theta, m, p = params.lam, params.theta, params.m, params.p
    x = np.asarray(x, dtype=float)
    base = lam + theta * x ** p
    num = lam ** (m * (n - r + 1)) * m * theta * p * x ** (p - 1) * (base ** m - lam ** m) ** (r - 1)
    return num / (beta(r, n - r + 1) * base ** (m * n + 1))


def order_stat_cdf(params: Params, spec, x):
    """``I_F(x)(r, n - r + 1)``."""
    spec = _spec(spec)
    arr = np.asarray(x, dtype=float)
    F = np.atleast_1d(np.asarray(dist.cdf(params, arr), dtype=float))
    out = np.array([reg_inc_beta(float(v), spec.r, spec.n - spec.r + 1) for v in F])
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def min_distribution(params: Params, n: int) -> Params:
    """Law of the sample minimum: the same family with ``m`` replaced by ``m n``."""
    n = _positive_int("n", n)
    return params.replace(m=params.m * n)


def max_pdf(params: Params, n: int, x):
    """Density of the sample maximum, ``n F^(n-1) f``."""
    n = _positive_int("n", n)
    return order_stat_pdf(params, OrderStatSpec(n, n), x)


def _require_min_moment(params, n, q):
    mn = params.m * n
    if not mn > q / params.p:
        raise MomentExistenceError(
            f"moment of the minimum does not exist: mn <= q/p "
            f"(mn={mn:g}, q={q:g}, p={params.p:g})",
            "mn > q/p",
        )
    return mn


def _min_beta_term(params, mn, q):
    """mn (lam/theta)^(q/p) B(q/p + 1, mn - q/p)."""
    k = q / params.p
    log_scale = (math.log(params.lam) - math.log(params.theta)) * k
    return mn * math.exp(log_scale + log_beta(k + 1.0, mn - k))


def min_moment(params: Params, n: int, q) -> float:
    """``E[X_(1:n)^q]`` for the standardized member."""
    n = _positive_int("n", n)
    if isinstance(q, bool) or not isinstance(q, numbers.Real) or not (math.isfinite(q) and q > 0):
        raise DomainError(f"moment order q must be a positive real, got {q!r}")
    if not params.is_standard:
        raise DomainError("min_moment needs mu = 0 and sigma = 1")
    mn = _require_min_moment(params, n, float(q))
    return _min_beta_term(params, mn, float(q))


def min_mean(params: Params, n: int) -> float:
    n = _positive_int("n", n)
    mn = _require_min_moment(params, n, 1.0)
    return params.mu + params.sigma * _min_beta_term(params, mn, 1.0)


def min_variance(params: Params, n: int) -> float:
    """``mn (lam/theta)^(2/p) [B(2/p+1, mn-2/p) - mn B(1/p+1, mn-1/p)^2]``, times ``sigma^2``."""
    n = _positive_int("n", n)
    mn = _require_min_moment(params, n, 2.0)
    p = params.p
    scale = math.exp(2.0 * (math.log(params.lam) - math.log(params.theta)) / p)
    b2 = beta(2.0 / p + 1.0, mn - 2.0 / p)
    b1 = beta(1.0 / p + 1.0, mn - 1.0 / p)
    return params.sigma ** 2 * mn * scale * (b2 - mn * b1 * b1)
