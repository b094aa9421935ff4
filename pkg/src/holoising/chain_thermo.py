"""Thermal von Neumann entropy of the critical chain and its temperature slope.

The spin-chain trace is ``Z = (C_NS + S_NS)/2 + C_R'`` where ``C`` and ``S``
are products of ``2cosh(beta eps/2)`` and ``2sinh(beta eps/2)`` and ``C_R'``
omits the R zero mode (its sinh product vanishes, its cosh factor is 2).
All three log-products are shifted by the NS ground energy ``E_NS``, which
is removed analytically, so energies of order ``L^2`` never get subtracted
from each other numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logsumexp

from holoising.fermion_core import Sector, mode_set


@dataclass(frozen=True)
class EntropyCurve:
    temperatures: np.ndarray
    S: np.ndarray
    dSdT: np.ndarray


@dataclass(frozen=True)
class MinimumResult:
    T_min: float
    value: float
    bracket: tuple[float, float]
    boundary: bool
    iterations: int


def ground_gap(L: int) -> float:
    """``E_R^0 - E_NS^0 = (L/2pi) tan(pi/(4L))``, which tends to 1/8."""
    return (L / (2.0 * np.pi)) * np.tan(np.pi / (4.0 * L))


def _sector_terms(L: int, beta: float):
    """Shifted ``(lambda, lambda', lambda'')`` for the three positive terms of Z.

    ``lambda_i = ln(c_i term_i) + beta E_NS``; derivatives are in ``beta``.
    """
    ns = mode_set(L, Sector.NS).energies
    r = mode_set(L, Sector.R).energies
    x_ns, x_r = beta * ns, beta * r
    e_ns, e_r = np.exp(-x_ns), np.exp(-x_r)
    fermi_ns = ns * expit(-x_ns)
    bose_ns = ns * e_ns / -np.expm1(-x_ns)
    fermi_r = r * expit(-x_r)
    half2 = (ns / 2.0) ** 2
    gap = ground_gap(L)

    lam = np.array([
        np.sum(np.log1p(e_ns)) - np.log(2.0),
        np.sum(np.log(-np.expm1(-x_ns))) - np.log(2.0),
        # zero mode contributes log1p(1) = ln 2, cancelling the 1/2
        -beta * gap + np.sum(np.log1p(e_r)) - np.log(2.0),
    ])
    d1 = np.array([
        -np.sum(fermi_ns),
        np.sum(bose_ns),
        -gap - np.sum(fermi_r),
    ])
    d2 = np.array([
        # sech^2(x/2) and csch^2(x/2) written with exp(-x) only
        np.sum(half2 * 4.0 * e_ns / (1.0 + e_ns) ** 2),
        -np.sum(half2 * 4.0 * e_ns / np.expm1(-x_ns) ** 2),
        np.sum((r / 2.0) ** 2 * 4.0 * e_r / (1.0 + e_r) ** 2),
    ])
    return lam, d1, d2


def _check(L: int, T: float) -> None:
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    if int(L) != L or L < 2 or L % 2:
        raise ValueError(f"L must be an even integer >= 2, got {L}")


def _moments(L: int, T: float):
    beta = 1.0 / T
    lam, d1, d2 = _sector_terms(L, beta)
    log_z = logsumexp(lam)
    w = np.exp(lam - log_z)
    mean = np.sum(w * d1)
    var = np.sum(w * (d2 + (d1 - mean) ** 2))
    return beta, log_z, mean, var


def chain_entropy(L: int, T: float) -> float:
    """``S = ln Z + beta U``; the ground-energy shift cancels between the two."""
    _check(L, T)
    beta, log_z, mean, _ = _moments(L, T)
    return float(log_z - beta * mean)


def chain_heat_capacity(L: int, T: float) -> float:
    _check(L, T)
    beta, _, _, var = _moments(L, T)
    return float(beta ** 2 * var)


def chain_entropy_derivative(L: int, T: float) -> float:
    """``dS/dT = C/T = beta^3 d^2 lnZ/dbeta^2``, including the sector-weight variance."""
    _check(L, T)
    beta, _, _, var = _moments(L, T)
    return float(beta ** 3 * var)


def chain_log_partition(L: int, T: float) -> float:
    """``ln Z`` of the spin chain including the ground energy."""
    _check(L, T)
    beta, log_z, _, _ = _moments(L, T)
    e_ns = -np.sum(mode_set(L, Sector.NS).energies) / 2.0
    return float(log_z - beta * e_ns)


def temperature_grid(t_min: float = 0.01, t_max: float = 1.0, count: int = 400,
                     split: float = 0.1) -> np.ndarray:
    """Half geometric below ``split``, half linear above, merged and deduplicated."""
    n_geo = count // 2
    geo = np.geomspace(t_min, split, n_geo, endpoint=False)
    lin = np.linspace(split, t_max, count - n_geo)
    return np.concatenate([geo, lin])


def entropy_curve(L: int, temperatures=None) -> EntropyCurve:
    temperatures = temperature_grid() if temperatures is None else np.asarray(temperatures, float)
    S = np.array([chain_entropy(L, T) for T in temperatures])
    dS = np.array([chain_entropy_derivative(L, T) for T in temperatures])
    return EntropyCurve(temperatures, S, dS)


_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_minimize(func, lo: float, hi: float, tol: float = 1e-4,
                    max_iter: int = 200) -> MinimumResult:
    """Golden-section search on ``[lo, hi]``; flags minima that sit on an endpoint."""
    if not 0 <= lo < hi:
        raise ValueError("need 0 <= lo < hi")
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = func(c), func(d)
    it = 0
    while b - a > tol and it < max_iter:
        it += 1
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = func(d)
    x = (a + b) / 2.0
    fx = func(x)
    boundary = (a - lo) < tol or (hi - b) < tol
    if not boundary:
        # an interior golden-section point can still be a one-sided minimum
        boundary = fx >= min(func(lo), func(hi))
    return MinimumResult(T_min=float(x), value=float(fx), bracket=(float(a), float(b)),
                         boundary=bool(boundary), iterations=it)


def locate_dsdt_minimum(L: int, T_lo: float = 0.05, T_hi: float = 0.4,
                        tol: float = 1e-4) -> MinimumResult:
    if not 0 < T_lo < T_hi:
        raise ValueError("need 0 < T_lo < T_hi")
    return golden_minimize(lambda T: chain_entropy_derivative(L, T), T_lo, T_hi, tol)
