"""Six-parameter generalized Burr XII distribution.

Density on the support ``[mu, inf)`` with ``z = (x - mu) / sigma``::

    f(x) = lam^m * m * theta * p * z^(p-1) / (sigma * (lam + theta * z^p)^(m+1))
    F(x) = 1 - lam^m * (lam + theta * z^p)^(-m)

All evaluation goes through ``w = (theta / lam) * z^p`` held as its
logarithm ``t = log(theta / lam) + p * log(z)``, so that

    log S(x) = -m * softplus(t)
    log f(x) = log(m p theta / lam) + (p - 1) log z - log sigma - (m + 1) softplus(t)

with ``softplus(t) = log(1 + e^t)``.  Nothing is exponentiated before the
last step, which keeps large ``m`` and extreme ``x`` finite.

Functions accept a scalar or an array for the evaluation point and return a
``float`` for scalar input.
"""

from __future__ import annotations

import dataclasses
import math
import numbers
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MomentExistenceError
from .numerics import log_gamma

__all__ = [
    "Params",
    "new_params",
    "burr_xii",
    "lomax",
    "log_logistic",
    "pdf",
    "pdf_offset",
    "log_pdf",
    "log_pdf_offset",
    "cdf",
    "survival",
    "log_survival",
    "interval_probability",
    "quantile",
    "hazard",
    "raw_moment",
    "mean",
    "variance",
]

PARAM_NAMES = ("mu", "sigma", "lambda", "theta", "m", "p")


@dataclass(frozen=True)
class Params:
    """Parameters ``(mu, sigma, lambda, theta, m, p)``.

    ``lambda`` is a Python keyword, so the attribute is spelled ``lam``;
    :meth:`as_dict` and :meth:`from_dict` use the full name.
    """

    mu: float = 0.0
    sigma: float = 1.0
    lam: float = 1.0
    theta: float = 1.0
    m: float = 1.0
    p: float = 1.0

    def __post_init__(self):
        for attr, name in zip(("mu", "sigma", "lam", "theta", "m", "p"), PARAM_NAMES):
            value = getattr(self, attr)
            if isinstance(value, bool) or not isinstance(value, numbers.Real):
                raise DomainError(f"{name} must be a real number, got {value!r}")
            value = float(value)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            if name == "mu":
                if value < 0:
                    raise DomainError(f"mu must be >= 0 (mu < 0), got {value!r}")
            elif value <= 0:
                raise DomainError(f"{name} must be > 0 ({name} <= 0), got {value!r}")
            object.__setattr__(self, attr, value)

    @property
    def is_standard(self) -> bool:
        return self.mu == 0.0 and self.sigma == 1.0

    def standardized(self) -> "Params":
        """The same shape with ``mu = 0`` and ``sigma = 1``."""
        return dataclasses.replace(self, mu=0.0, sigma=1.0)

    def replace(self, **changes) -> "Params":
        if "lambda" in changes:
            changes["lam"] = changes.pop("lambda")
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dict(zip(PARAM_NAMES, (self.mu, self.sigma, self.lam, self.theta, self.m, self.p)))

    @classmethod
    def from_dict(cls, values) -> "Params":
        unknown = set(values) - set(PARAM_NAMES)
        if unknown:
            raise DomainError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        kwargs = {("lam" if k == "lambda" else k): v for k, v in values.items()}
        return cls(**kwargs)

    def __str__(self):
        return ",".join(f"{k}={v!r}" for k, v in self.as_dict().items())


def new_params(mu, sigma, lam, theta, m, p) -> Params:
    """Validated :class:`Params`; raises :class:`DomainError` naming the first bad field."""
    return Params(mu, sigma, lam, theta, m, p)


def burr_xii(theta, m, p) -> Params:
    """Ordinary Burr XII, ``F(x) = 1 - (1 + theta x^p)^-m``."""
    return Params(0.0, 1.0, 1.0, theta, m, p)


def lomax(theta, m) -> Params:
    return Params(0.0, 1.0, 1.0, theta, m, 1.0)


def log_logistic(p) -> Params:
    return Params(0.0, 1.0, 1.0, 1.0, 1.0, p)


# -- internals ---------------------------------------------------------------


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return float(arr) if scalar else arr


def _softplus(t):
    return np.logaddexp(0.0, t)


def _log_ratio(params):
    return math.log(params.theta) - math.log(params.lam)


def _log_terms(params, z):
    """(log z, softplus(t)) for z >= 0; log z = -inf at z = 0."""
    with np.errstate(divide="ignore"):
        log_z = np.log(z)
    return log_z, _softplus(_log_ratio(params) + params.p * log_z)


def _log_pdf_z(params, z):
    """log density at standardized offset z (any real, nan passes through)."""
    out = np.full(z.shape, -np.inf)
    inside = z >= 0
    out[np.isnan(z)] = np.nan
    if not np.any(inside):
        return out
    zi = z[inside]
    log_z, sp = _log_terms(params, zi)
    p, m = params.p, params.m
    if p == 1.0:
        power = np.zeros_like(log_z)
    else:
        power = (p - 1.0) * log_z
    const = math.log(m) + _log_ratio(params) + math.log(p) - math.log(params.sigma)
    with np.errstate(invalid="ignore"):
        val = const + power - (m + 1.0) * sp
    val[np.isinf(zi)] = -np.inf
    out[inside] = val
    return out


def _log_sf_z(params, z):
    out = np.zeros(z.shape)
    out[np.isnan(z)] = np.nan
    inside = z > 0
    if np.any(inside):
        _, sp = _log_terms(params, z[inside])
        out[inside] = -params.m * sp
    return out


def _z(params, x):
    return (x - params.mu) / params.sigma


# -- evaluation -------------------------------------------------------------


def log_pdf(params: Params, x):
    """Log density; ``-inf`` off the support, ``+inf`` at ``x = mu`` when ``p < 1``."""
    arr, scalar = _as_array(x)
    return _out(_log_pdf_z(params, _z(params, arr)), scalar)


def pdf(params: Params, x):
    arr, scalar = _as_array(x)
    return _out(np.exp(_log_pdf_z(params, _z(params, arr))), scalar)


def log_pdf_offset(params: Params, d):
    """Log density at ``x = mu + d`` without forming ``x``.

    Resolves the neighbourhood of the lower endpoint even when ``mu + d``
    would round to ``mu``; quadrature oracles integrate this in ``d``.
    """
    arr, scalar = _as_array(d)
    return _out(_log_pdf_z(params, arr / params.sigma), scalar)


def pdf_offset(params: Params, d):
    arr, scalar = _as_array(d)
    return _out(np.exp(_log_pdf_z(params, arr / params.sigma)), scalar)


def log_survival(params: Params, x):
    arr, scalar = _as_array(x)
    return _out(_log_sf_z(params, _z(params, arr)), scalar)


def survival(params: Params, x):
    arr, scalar = _as_array(x)
    return _out(np.exp(_log_sf_z(params, _z(params, arr))), scalar)


def cdf(params: Params, x):
    arr, scalar = _as_array(x)
    return _out(-np.expm1(_log_sf_z(params, _z(params, arr))), scalar)


def interval_probability(params: Params, a1, a2) -> float:
    """P(a1 < X < a2) for ``a1 < a2``; endpoints are clamped to the support."""
    a1 = float(a1)
    a2 = float(a2)
    if math.isnan(a1) or math.isnan(a2) or not a1 < a2:
        raise DomainError(f"interval needs a1 < a2, got ({a1!r}, {a2!r})")
    lo = _log_sf_z(params, np.asarray(_z(params, a1)))
    hi = _log_sf_z(params, np.asarray(_z(params, a2)))
    # S(a1) - S(a2) = S(a1) * (1 - S(a2)/S(a1)), free of cancellation
    return float(np.exp(lo) * -np.expm1(hi - lo))


def quantile(params: Params, u):
    """Inverse cdf on ``[0, 1)``: ``mu + sigma * ((lam/theta)((1-u)^(-1/m) - 1))^(1/p)``."""
    arr, scalar = _as_array(u)
    if np.any(np.isnan(arr)) or np.any(arr < 0) or np.any(arr >= 1):
        bad = float(arr[np.isnan(arr) | (arr < 0) | (arr >= 1)].flat[0])
        raise DomainError(f"quantile level must satisfy 0 <= u < 1, got {bad!r}")
    with np.errstate(divide="ignore"):
        inner = np.log(np.expm1(-np.log1p(-arr) / params.m))
    log_z = (inner - _log_ratio(params)) / params.p
    return _out(params.mu + params.sigma * np.exp(log_z), scalar)


def hazard(params: Params, x):
    """pdf / survival ``= m theta p z^(p-1) / (sigma (lam + theta z^p))``; 0 below ``mu``."""
    arr, scalar = _as_array(x)
    z = _z(params, arr)
    log_h = _log_pdf_z(params, z) - _log_sf_z(params, z)
    return _out(np.exp(log_h), scalar)


# -- moments ----------------------------------------------------------------


def _check_order(n):
    if isinstance(n, bool) or not isinstance(n, numbers.Real) or not math.isfinite(n) or n <= 0:
        raise DomainError(f"moment order must be a positive real, got {n!r}")
    return float(n)


def _require_moment(params, n):
    if not params.m > n / params.p:
        raise MomentExistenceError(
            f"moment of order {n:g} does not exist: requires m > n/p "
            f"(m={params.m:g}, n/p={n / params.p:g})",
            "m > n/p",
        )


def _log_gamma_ratio(params, n):
    """log[ Γ(n/p + 1) Γ(m - n/p) / Γ(m) ]."""
    k = n / params.p
    return log_gamma(k + 1.0) + log_gamma(params.m - k) - log_gamma(params.m)


def raw_moment(params: Params, n) -> float:
    """E[X^n] for the standardized member (``mu = 0``, ``sigma = 1``)."""
    n = _check_order(n)
    if not params.is_standard:
        raise DomainError("raw_moment needs mu = 0 and sigma = 1; use mean/variance for location-scale members")
    _require_moment(params, n)
    log_scale = -_log_ratio(params) * n / params.p
    return math.exp(log_scale + _log_gamma_ratio(params, n))


def mean(params: Params) -> float:
    _require_moment(params, 1.0)
    return params.mu + params.sigma * raw_moment(params.standardized(), 1)


def variance(params: Params) -> float:
    _require_moment(params, 2.0)
    g1 = math.exp(_log_gamma_ratio(params, 1.0))
    g2 = math.exp(_log_gamma_ratio(params, 2.0))
    scale = math.exp(-2.0 * _log_ratio(params) / params.p)
    return params.sigma ** 2 * scale * (g2 - g1 * g1)
