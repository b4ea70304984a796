"""Maximum-likelihood fitting with a free-parameter mask.

With ``mu`` held fixed the law depends on ``(sigma, lambda, theta)`` only
through ``theta / (lambda * sigma**p)``, so freeing any two of those three
leaves a ridge of equal likelihood.  Such masks are rejected up front.

Positive parameters are optimized on the log scale.  A free ``mu`` lives in
``(0, min(data) - eps)`` through a logistic map, ``eps = 1e-9 * range``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import distribution as dist
from .distribution import PARAM_NAMES, Params
from .errors import DegenerateDataError, DomainError, IdentifiabilityError
from .numerics import minimize

__all__ = [
    "DEFAULT_FREE",
    "FitConfig",
    "FitResult",
    "fit_mle",
    "init_heuristic",
    "neg_log_likelihood",
]

DEFAULT_FREE = ("theta", "m", "p")
_REDUNDANT = frozenset({"sigma", "lambda", "theta"})
_ATTR = {"mu": "mu", "sigma": "sigma", "lambda": "lam", "theta": "theta", "m": "m", "p": "p"}
_CLAMP = (1e-3, 1e3)


@dataclass(frozen=True)
class FitConfig:
    free: tuple = DEFAULT_FREE
    init: Params | None = None
    max_iter: int = 2000
    x_tol: float = 1e-8
    f_tol: float = 1e-10

    def __post_init__(self):
        free = self.free
        if isinstance(free, str):
            free = [s for s in free.split(",") if s.strip()]
        free = tuple(name.strip() for name in free)
        if not free:
            raise DomainError("at least one parameter must be free")
        unknown = [name for name in free if name not in PARAM_NAMES]
        if unknown:
            raise DomainError(f"unknown parameter(s) in free set: {', '.join(unknown)}")
        clash = sorted(_REDUNDANT.intersection(free))
        if len(clash) >= 2:
            raise IdentifiabilityError(
                f"non-identifiable free set: {', '.join(clash)} enter the likelihood only "
                "through theta/(lambda*sigma^p); free at most one of sigma, lambda, theta"
            )
        # canonical order, duplicates dropped
        object.__setattr__(self, "free", tuple(n for n in PARAM_NAMES if n in free))


@dataclass(frozen=True)
class FitResult:
    params: Params
    neg_log_likelihood: float
    converged: bool
    iterations: int
    initial_neg_log_likelihood: float = field(default=math.nan)


def _data(data):
    arr = np.asarray(data, dtype=float).ravel()
    if arr.size == 0:
        raise DomainError("data must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise DomainError("data must be finite")
    return arr


def neg_log_likelihood(params: Params, data) -> float:
    """``-sum(log_pdf)``; ``+inf`` when any point is at or below ``mu``."""
    arr = _data(data)
    if np.any(arr <= params.mu):
        return math.inf
    return float(-np.sum(dist.log_pdf(params, arr)))


def _log_c(u, m):
    """log((1 - u)^(-1/m) - 1), safe for tiny m."""
    y = -math.log1p(-u) / m
    return y + math.log(-math.expm1(-y))


def _log_tail_ratio(m):
    return _log_c(0.9, m) - _log_c(0.5, m)


def _solve_m(log_target):
    lo, hi = math.log(_CLAMP[0]), math.log(_CLAMP[1])
    # the ratio falls monotonically in m
    if log_target >= _log_tail_ratio(_CLAMP[0]):
        return _CLAMP[0]
    if log_target <= _log_tail_ratio(_CLAMP[1]):
        return _CLAMP[1]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _log_tail_ratio(math.exp(mid)) > log_target:
            lo = mid
        else:
            hi = mid
    return math.exp(0.5 * (lo + hi))


def _clamp(v):
    return min(_CLAMP[1], max(_CLAMP[0], v))


def init_heuristic(data) -> Params:
    """Quantile-matching start with ``mu = 0``, ``sigma = lambda = 1``.

    ``p`` comes from the log-log slope between the 0.25 and 0.5 empirical
    quantiles, ``m`` from the 0.9/0.5 quantile ratio, and ``theta`` puts the
    median in place; the first two are iterated jointly since each slope
    depends on the other.
    """
    arr = _data(data)
    if arr.size < 10:
        raise DomainError(f"init_heuristic needs at least 10 points, got {arr.size}")
    if np.all(arr == arr[0]):
        raise DegenerateDataError("all data points are equal")
    q25, q50, q90 = np.quantile(arr, [0.25, 0.5, 0.9])
    if q25 <= 0:
        raise DomainError("init_heuristic needs a positive lower quartile")
    if not q25 < q50 < q90:
        raise DegenerateDataError("empirical quartiles do not separate")
    spread = math.log(q50 / q25)
    m = 1.0
    p = 1.0
    for _ in range(50):
        p_new = _clamp((_log_c(0.5, m) - _log_c(0.25, m)) / spread)
        m_new = _solve_m(p_new * math.log(q90 / q50))
        done = abs(p_new - p) <= 1e-12 * p and abs(m_new - m) <= 1e-12 * m
        p, m = p_new, m_new
        if done:
            break
    theta = _clamp(math.exp(_log_c(0.5, m) - p * math.log(q50)))
    return Params(0.0, 1.0, 1.0, theta, m, p)


class _Packing:
    """Map between a free-parameter vector and :class:`Params`."""

    def __init__(self, base, free, mu_upper):
        self.base = base
        self.free = free
        self.mu_upper = mu_upper

    def pack(self, params):
        out = []
        for name in self.free:
            value = getattr(params, _ATTR[name])
            if name == "mu":
                frac = value / self.mu_upper
                out.append(math.log(frac) - math.log1p(-frac))
            else:
                out.append(math.log(value))
        return np.array(out)

    def unpack(self, vec):
        changes = {}
        for name, v in zip(self.free, vec):
            if name == "mu":
                changes["mu"] = self.mu_upper / (1.0 + math.exp(-v)) if v > -700 else 0.0
            else:
                changes[_ATTR[name]] = math.exp(min(v, 700.0))
        return self.base.replace(**changes)


def fit_mle(data, config: FitConfig | None = None) -> FitResult:
    """Minimize the negative log-likelihood over ``config.free``.

    Fixed parameters come from ``config.init`` (or the all-defaults member).
    Without ``config.init`` the free parameters start from
    :func:`init_heuristic` when that beats the defaults.
    """
    config = config or FitConfig()
    arr = _data(data)
    base = config.init or Params()
    free = config.free

    mu_upper = None
    if "mu" in free:
        eps = 1e-9 * float(arr.max() - arr.min())
        mu_upper = float(arr.min()) - eps
        if mu_upper <= 0:
            raise DomainError("mu can only be fitted when min(data) > 0")
        if not 0 < base.mu < mu_upper:
            base = base.replace(mu=0.5 * mu_upper)
    packing = _Packing(base, free, mu_upper)

    candidates = [base]
    if config.init is None and arr.size >= 10:
        try:
            h = init_heuristic(arr)
        except DomainError:
            h = None
        if h is not None:
            changes = {_ATTR[n]: getattr(h, _ATTR[n]) for n in free if n != "mu"}
            candidates.insert(0, base.replace(**changes))
    scored = [(neg_log_likelihood(c, arr), i, c) for i, c in enumerate(candidates)]
    nll0, _, start = min(scored, key=lambda item: (item[0], item[1]))
    if not math.isfinite(nll0):
        raise DomainError("likelihood is zero at the starting point (data at or below mu?)")

    def objective(vec):
        try:
            params = packing.unpack(vec)
        except DomainError:
            return math.inf
        return neg_log_likelihood(params, arr)

    res = minimize(
        objective,
        packing.pack(start),
        max_iter=config.max_iter,
        x_tol=config.x_tol,
        f_tol=config.f_tol,
    )
    fitted = packing.unpack(res.x)
    nll = neg_log_likelihood(fitted, arr)
    if not nll <= nll0:
        fitted, nll = start, nll0
    return FitResult(
        params=fitted,
        neg_log_likelihood=nll,
        converged=res.converged,
        iterations=res.iterations,
        initial_neg_log_likelihood=nll0,
    )
