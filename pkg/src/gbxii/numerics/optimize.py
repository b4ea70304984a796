"""Derivative-free minimization (Nelder-Mead simplex)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

__all__ = ["MinimizeResult", "minimize"]


@dataclass(frozen=True)
class MinimizeResult:
    x: np.ndarray
    f: float
    converged: bool
    iterations: int


def _safe(objective, x):
    value = float(objective(x))
    # NaN would poison every comparison in the simplex ordering
    return math.inf if math.isnan(value) else value


def _initial_simplex(x0, step):
    n = len(x0)
    simplex = np.empty((n + 1, n))
    simplex[0] = x0
    for i in range(n):
        vertex = x0.copy()
        vertex[i] = vertex[i] + step if vertex[i] == 0 else vertex[i] * (1.0 + step)
        simplex[i + 1] = vertex
    return simplex


def _nelder_mead(objective, x0, f0, max_iter, x_tol, f_tol, step):
    n = len(x0)
    # adaptive coefficients (Gao & Han) behave better than the classic
    # (1, 2, 0.5, 0.5) set once n exceeds a handful of parameters
    rho = 1.0
    chi = 1.0 + 2.0 / n
    psi = 0.75 - 1.0 / (2.0 * n)
    sigma = 1.0 - 1.0 / n

    simplex = _initial_simplex(x0, step)
    fsim = np.empty(n + 1)
    fsim[0] = f0
    for i in range(1, n + 1):
        fsim[i] = _safe(objective, simplex[i])

    iterations = 0
    converged = False
    while iterations < max_iter:
        order = np.argsort(fsim, kind="stable")
        simplex = simplex[order]
        fsim = fsim[order]

        diameter = float(np.max(np.abs(simplex[1:] - simplex[0])))
        spread = float(np.max(np.abs(fsim[1:] - fsim[0])))
        if diameter <= x_tol and spread <= f_tol:
            converged = True
            break
        iterations += 1

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + rho * (centroid - worst)
        fr = _safe(objective, xr)
        if fr < fsim[0]:
            xe = centroid + rho * chi * (centroid - worst)
            fe = _safe(objective, xe)
            if fe < fr:
                simplex[-1], fsim[-1] = xe, fe
            else:
                simplex[-1], fsim[-1] = xr, fr
            continue
        if fr < fsim[-2]:
            simplex[-1], fsim[-1] = xr, fr
            continue
        if fr < fsim[-1]:
            xc = centroid + psi * rho * (centroid - worst)
            fc = _safe(objective, xc)
            if fc <= fr:
                simplex[-1], fsim[-1] = xc, fc
                continue
        else:
            xcc = centroid - psi * (centroid - worst)
            fcc = _safe(objective, xcc)
            if fcc < fsim[-1]:
                simplex[-1], fsim[-1] = xcc, fcc
                continue
        # shrink toward the best vertex
        for i in range(1, n + 1):
            simplex[i] = simplex[0] + sigma * (simplex[i] - simplex[0])
            fsim[i] = _safe(objective, simplex[i])

    best = int(np.argmin(fsim))
    return simplex[best].copy(), float(fsim[best]), converged, iterations


def minimize(
    objective,
    x0,
    *,
    max_iter: int = 2000,
    x_tol: float = 1e-8,
    f_tol: float = 1e-10,
    initial_step: float = 0.05,
    restarts: int = 1,
) -> MinimizeResult:
    """Minimize ``objective`` from ``x0`` with the Nelder-Mead simplex.

    Convergence means the simplex diameter is at most ``x_tol`` *and* the
    spread of its function values at most ``f_tol``.  Running out of
    iterations is reported through ``converged=False``, never raised.
    After a converged run the search is restarted from the best vertex
    (``restarts`` times) to guard against a collapsed simplex.

    The returned ``f`` never exceeds ``objective(x0)``.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    if x0.ndim != 1 or x0.size == 0:
        raise DomainError("x0 must be a non-empty vector")
    f0 = _safe(objective, x0)
    if not math.isfinite(f0):
        raise DomainError(f"objective is not finite at x0 (got {f0!r})")

    x, f, converged, used = _nelder_mead(
        objective, x0, f0, max_iter, x_tol, f_tol, initial_step
    )
    for _ in range(restarts):
        if not converged or used >= max_iter:
            break
        x2, f2, converged, more = _nelder_mead(
            objective, x, f, max_iter - used, x_tol, f_tol, initial_step
        )
        used += more
        improved = f - f2
        if f2 <= f:
            x, f = x2, f2
        if improved <= f_tol:
            break
    if f > f0:
        x, f = x0, f0
    return MinimizeResult(x=x, f=f, converged=converged, iterations=used)
