"""Seeded random variate generation.

Generator contract
------------------
Every stream is PCG64 (the 128-bit LCG with XSL-RR output, multiplier
``0x2360ed051fc65da44385df649fccf645``, increment derived from the seed),
seeded through numpy's ``SeedSequence(seed)``.  Only the raw 64-bit words
are taken from numpy; everything on top is fixed here:

* uniform on ``[0, 1)``: ``(word >> 11) * 2**-53``;
* standard normal: Box-Muller on consecutive uniform pairs ``(u1, u2)``,
  ``sqrt(-2 log(1 - u1)) * (cos, sin)(2 pi u2)``, interleaved;
* exponential(rate): ``-log1p(-u) / rate``, i.e. ``-log(U)/rate`` with
  ``U = 1 - u`` in ``(0, 1]``;
* gamma(shape, rate): Marsaglia-Tsang squeeze-free rejection for
  ``shape >= 1``; for ``shape < 1`` a gamma(shape + 1) batch followed by a
  batch of uniforms ``U`` and the boost ``G * U**(1/shape)``.

Methods for the distribution itself:

``inverse_cdf``
    ``quantile(params, u)`` on one uniform per draw.
``ratio``
    ``mu + sigma * (Y1 / Y2)^(1/p)``, ``Y1 ~ Exp(theta)``, ``Y2 ~ Gamma(m, lam)``.
``exp_transform``
    ``mu + sigma * ((lam/theta) * (exp(Y/m) - 1))^(1/p)``, ``Y ~ Exp(1)``.
    Drawing ``Y`` from the same uniforms makes this coincide with
    ``inverse_cdf`` value for value.  ``shifted_form=True`` uses
    ``(exp(Y/m) - lam/theta)^(1/p)``, which only has the right law when
    ``lam == theta`` and is rejected otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distribution import Params, quantile
from .errors import DomainError

__all__ = [
    "METHODS",
    "RngState",
    "SampleBatch",
    "sample",
    "sample_exponential",
    "sample_gamma",
    "sample_inverse_cdf",
    "sample_ratio",
    "sample_exp_transform",
]

METHODS = ("inverse_cdf", "ratio", "exp_transform")

_TWO_POW_M53 = 2.0 ** -53


class RngState:
    """Single-owner PCG64 stream; see the module docstring for the contract."""

    def __init__(self, seed=0, *, _sequence=None):
        if _sequence is None:
            if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
                raise DomainError(f"seed must be an integer, got {seed!r}")
            if not 0 <= int(seed) < 2 ** 64:
                raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
            _sequence = np.random.SeedSequence(int(seed))
        self.seed = int(_sequence.entropy)
        self._sequence = _sequence
        self._bitgen = np.random.PCG64(_sequence)

    def split(self, k: int) -> list["RngState"]:
        """``k`` independent child streams, deterministic in the parent seed."""
        return [RngState(_sequence=child) for child in self._sequence.spawn(k)]

    def raw(self, n: int) -> np.ndarray:
        return self._bitgen.random_raw(n)

    def uniform(self, n: int) -> np.ndarray:
        """``n`` uniforms on ``[0, 1)`` with 53 random bits each."""
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * _TWO_POW_M53

    def normal(self, n: int) -> np.ndarray:
        pairs = (n + 1) // 2
        u = self.uniform(2 * pairs).reshape(pairs, 2)
        radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        angle = 2.0 * np.pi * u[:, 1]
        out = np.empty((pairs, 2))
        out[:, 0] = radius * np.cos(angle)
        out[:, 1] = radius * np.sin(angle)
        return out.reshape(-1)[:n]


@dataclass(frozen=True)
class SampleBatch:
    values: np.ndarray
    params: Params
    method: str
    seed: int

    def __len__(self):
        return len(self.values)


def _count(n):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"sample size must be a positive integer, got {n!r}")
    return int(n)


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be > 0, got {value!r}")


def sample_exponential(rng: RngState, rate: float, size: int | None = None):
    """Exponential draws with the given rate; a float when ``size`` is None."""
    _positive("rate", rate)
    values = -np.log1p(-rng.uniform(1 if size is None else _count(size))) / rate
    return float(values[0]) if size is None else values


def _gamma_mt(rng, shape, n):
    """Marsaglia-Tsang for shape >= 1, unit rate."""
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    filled = 0
    while filled < n:
        k = n - filled
        x = rng.normal(k)
        # log of a (0, 1] uniform
        log_u = np.log1p(-rng.uniform(k))
        v = 1.0 + c * x
        ok = v > 0
        v = np.where(ok, v * v * v, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ok &= log_u < 0.5 * x * x + d - d * v + d * np.log(v)
        accepted = d * v[ok]
        out[filled:filled + accepted.size] = accepted
        filled += accepted.size
    return out


def sample_gamma(rng: RngState, shape: float, rate: float, size: int | None = None):
    """Gamma(shape, rate) draws (mean ``shape / rate``)."""
    _positive("shape", shape)
    _positive("rate", rate)
    n = 1 if size is None else _count(size)
    if shape >= 1.0:
        values = _gamma_mt(rng, shape, n)
    else:
        boosted = _gamma_mt(rng, shape + 1.0, n)
        log_u = np.log1p(-rng.uniform(n))
        values = np.exp(np.log(boosted) + log_u / shape)
    values = values / rate
    return float(values[0]) if size is None else values


def sample_inverse_cdf(rng: RngState, params: Params, n: int) -> SampleBatch:
    n = _count(n)
    values = quantile(params, rng.uniform(n))
    return SampleBatch(np.asarray(values), params, "inverse_cdf", rng.seed)


def sample_ratio(rng: RngState, params: Params, n: int) -> SampleBatch:
    n = _count(n)
    y1 = sample_exponential(rng, params.theta, n)
    y2 = sample_gamma(rng, params.m, params.lam, n)
    with np.errstate(divide="ignore"):
        z = np.exp((np.log(y1) - np.log(y2)) / params.p)
    return SampleBatch(params.mu + params.sigma * z, params, "ratio", rng.seed)


def sample_exp_transform(
    rng: RngState, params: Params, n: int, *, shifted_form: bool = False
) -> SampleBatch:
    n = _count(n)
    y = sample_exponential(rng, 1.0, n)
    if shifted_form:
        if params.lam != params.theta:
            raise DomainError(
                "shifted_form exponential transform is only valid when lambda == theta"
            )
        z = (np.exp(y / params.m) - params.lam / params.theta) ** (1.0 / params.p)
    else:
        with np.errstate(divide="ignore"):
            inner = np.log(np.expm1(y / params.m))
        log_ratio = math.log(params.theta) - math.log(params.lam)
        z = np.exp((inner - log_ratio) / params.p)
    return SampleBatch(params.mu + params.sigma * z, params, "exp_transform", rng.seed)


_DISPATCH = {
    "inverse_cdf": sample_inverse_cdf,
    "ratio": sample_ratio,
    "exp_transform": sample_exp_transform,
}


def sample(params: Params, n: int, seed: int, method: str = "inverse_cdf") -> SampleBatch:
    """Fresh stream from ``seed``, then ``n`` draws by ``method``."""
    try:
        fn = _DISPATCH[method]
    except KeyError:
        raise DomainError(f"unknown sampling method {method!r}; expected one of {METHODS}") from None
    return fn(RngState(seed), params, n)
