"""Brute-force references for small chains.

Two routes that share nothing with the fast paths in :mod:`thermal_response`
and :mod:`chain_thermo`:

* dense exact diagonalization of the spin Hamiltonian (``L <= 10``), with
  Lehmann sums over all ``2^L`` eigenstates;
* enumeration of every quasiparticle configuration of the NS and R sectors
  (``L <= 14``), with or without the fermion-parity constraint, fed through
  the configuration-resolved double momentum sum for the density commutator.

These are slow on purpose and only meant for tests and acceptance runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from holoising.fermion_core import Sector, mode_set

DENSE_MAX_L = 10
FOCK_MAX_L = 14


@dataclass(frozen=True)
class DenseSpectrum:
    L: int
    g: float
    energies: np.ndarray
    vectors: np.ndarray
    hamiltonian: np.ndarray

    def density(self, j: int) -> np.ndarray:
        """``n_j = (1 - X_j)/2`` in the eigenbasis."""
        return self.vectors.T @ density_operator(self.L, j) @ self.vectors


def _check_dense(L: int) -> None:
    if not 2 <= L <= DENSE_MAX_L:
        raise ValueError(f"dense oracle supports 2 <= L <= {DENSE_MAX_L}, got {L}")


def density_operator(L: int, j: int) -> np.ndarray:
    """``(1 - X_j)/2`` in the computational Z basis; site ``j`` taken mod ``L``."""
    dim = 2 ** L
    idx = np.arange(dim)
    flip = idx ^ (1 << (j % L))
    n = 0.5 * np.eye(dim)
    n[idx, flip] -= 0.5
    return n


def spin_hamiltonian(L: int, g: float = 1.0) -> np.ndarray:
    """Dense periodic ``H = -(L/4pi) sum_j (Z_j Z_{j+1} + g X_j)``."""
    _check_dense(L)
    dim = 2 ** L
    idx = np.arange(dim)
    bits = (idx[:, None] >> np.arange(L)) & 1
    z = 1 - 2 * bits
    zz = np.sum(z * np.roll(z, -1, axis=1), axis=1).astype(float)
    H = np.diag(-zz)
    for j in range(L):
        H[idx, idx ^ (1 << j)] -= g
    return (L / (4.0 * np.pi)) * H


@lru_cache(maxsize=16)
def dense_spectrum(L: int, g: float = 1.0) -> DenseSpectrum:
    H = spin_hamiltonian(L, g)
    w, V = np.linalg.eigh(H)
    return DenseSpectrum(L=L, g=g, energies=w, vectors=V, hamiltonian=H)


def _boltzmann(energies: np.ndarray, T: float) -> np.ndarray:
    if T == 0:
        ground = np.isclose(energies, energies.min(), rtol=0, atol=1e-9)
        return ground / ground.sum()
    x = -(energies - energies.min()) / T
    return np.exp(x - logsumexp(x))


def dense_log_partition(L: int, T: float) -> float:
    E = dense_spectrum(L).energies
    return float(logsumexp(-E / T))


def dense_entropy(L: int, T: float) -> float:
    if not T > 0:
        raise ValueError("temperature must be positive")
    p = _boltzmann(dense_spectrum(L).energies, T)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def dense_thermal_green(L: int, T: float, t, s: int, g: float = 1.0):
    """``-i theta(t) <[n_s(t), n_0(0)]>`` by a Lehmann sum over all eigenstates.

    The commutator of two Hermitian operators with real matrix elements makes
    the result real: ``sum_mn (p_m - p_n) A_mn B_nm sin((E_m - E_n) t)``.
    Accepts scalar or array ``t``.
    """
    spec = dense_spectrum(L, g)
    p = _boltzmann(spec.energies, T)
    A = spec.density(s)
    B = spec.density(0)
    W = (p[:, None] - p[None, :]) * A * B.T
    keep = np.abs(W) > 1e-15
    weights = W[keep]
    omega = (spec.energies[:, None] - spec.energies[None, :])[keep]
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.sin(np.outer(t_arr, omega)) @ weights
    out = np.where(t_arr >= 0, out, 0.0)
    return out if np.ndim(t) else float(out[0])


def dense_linear_response(L: int, target: int, t_eval: float, T: float, profile,
                          n_time: int = 4001) -> complex:
    """Sourced density response from dense Green's functions (trapezoidal in time)."""
    from holoising.thermal_response import source_field

    half = 6.0 * profile.sigma_t
    times = np.linspace(-half, min(t_eval, half), n_time)
    total = np.zeros(n_time, dtype=complex)
    for j in range(1, L + 1):
        G = dense_thermal_green(L, T, t_eval - times, (target - j) % L)
        total += source_field(j, times, profile, L) * G
    return complex(-np.trapezoid(total, times))


# -- quasiparticle configuration enumeration --------------------------------

def _configurations(L: int) -> np.ndarray:
    idx = np.arange(2 ** L)
    return ((idx[:, None] >> np.arange(L)) & 1).astype(float)


def _sector_moments(L: int, T: float, sector: Sector, parity: int | None):
    """Unnormalized Boltzmann sums over quasiparticle configurations.

    Returns ``(log_scale, Z, pair, comb)`` where, after dividing by the common
    ``exp(log_scale)``, ``Z = sum_m w(m)``, ``pair[k,k'] = sum_m w (1-m_k) m_k'``
    and ``comb[k,k'] = sum_m w (1 - m_k - m_k')``.  ``parity`` restricts to
    configurations with ``sum m = parity mod 2``; ``None`` keeps all.
    """
    modes = mode_set(L, sector)
    m = _configurations(L)
    if parity is not None:
        m = m[(m.sum(axis=1) % 2) == parity]
    energies = m @ modes.energies - modes.energies.sum() / 2.0
    if T == 0:
        logw = np.where(np.isclose(energies, energies.min(), rtol=0, atol=1e-12), 0.0, -np.inf)
        log_scale = 0.0
    else:
        logw = -energies / T
        log_scale = float(logw.max())
        logw = logw - log_scale
    w = np.exp(logw)
    Z = w.sum()
    pair = ((1.0 - m) * w[:, None]).T @ m
    occ = w @ m
    comb = Z - occ[:, None] - occ[None, :]
    return modes, log_scale, Z, pair, comb


def _double_sum_green(modes, pair: np.ndarray, comb: np.ndarray, t: float, s: int) -> float:
    """Configuration-averaged double momentum sum for ``-i theta(t)<[n_s(t), n_0]>``."""
    if t < 0:
        return 0.0
    k, eps, u, v = modes.momenta, modes.energies, modes.u, modes.v
    L = modes.L
    c1 = (np.outer(u, u) - np.outer(v, v)) ** 2
    # index [k, k'] : v_k' u_k (v_k' u_k - v_k u_k')
    c2 = np.outer(u, v) * (np.outer(u, v) - np.outer(v, u))
    ph1 = (eps[:, None] - eps[None, :]) * t + (k[None, :] - k[:, None]) * s
    ph2 = (eps[:, None] + eps[None, :]) * t - (k[None, :] + k[:, None]) * s
    total = np.sum(c1 * pair * np.sin(ph1)) + np.sum(c2 * comb * np.sin(ph2))
    return float(-2.0 * total / L ** 2)


def fock_exact_green(L: int, T: float, t: float, s: int, projected: bool = True) -> float:
    """Density commutator from explicit enumeration of quasiparticle configurations.

    ``projected=True`` keeps the physical states only (NS with even and R with
    odd quasiparticle number) and is exact for the spin chain.
    ``projected=False`` sums every NS configuration without a parity
    constraint, which is what Fermi-factor occupations reproduce.
    """
    if not 2 <= L <= FOCK_MAX_L or L % 2:
        raise ValueError(f"Fock oracle supports even 2 <= L <= {FOCK_MAX_L}, got {L}")
    if not projected:
        modes, _, Z, pair, comb = _sector_moments(L, T, Sector.NS, None)
        return _double_sum_green(modes, pair / Z, comb / Z, t, s)
    parts = []
    for sector, parity in ((Sector.NS, 0), (Sector.R, 1)):
        modes, scale, Z, pair, comb = _sector_moments(L, T, sector, parity)
        parts.append((scale, Z, _double_sum_green(modes, pair, comb, t, s)))
    if T == 0:
        # only the lowest sector survives
        lowest = min(_sector_ground(L, sec, par) for sec, par in ((Sector.NS, 0), (Sector.R, 1)))
        parts = [p for p, (sec, par) in zip(parts, ((Sector.NS, 0), (Sector.R, 1)))
                 if np.isclose(_sector_ground(L, sec, par), lowest, atol=1e-12)]
        return sum(g for _, _, g in parts) / sum(Z for _, Z, _ in parts)
    top = max(scale for scale, _, _ in parts)
    num = sum(np.exp(scale - top) * g for scale, _, g in parts)
    den = sum(np.exp(scale - top) * Z for scale, Z, _ in parts)
    return float(num / den)


def _sector_ground(L: int, sector: Sector, parity: int) -> float:
    eps = np.sort(mode_set(L, sector).energies)
    base = -eps.sum() / 2.0
    return base if parity == 0 else base + eps[0]


def fock_log_partition(L: int, T: float) -> float:
    """``ln(Z_NS^even + Z_R^odd)`` by explicit enumeration."""
    logs = []
    for sector, parity in ((Sector.NS, 0), (Sector.R, 1)):
        modes = mode_set(L, sector)
        m = _configurations(L)
        m = m[(m.sum(axis=1) % 2) == parity]
        E = m @ modes.energies - modes.energies.sum() / 2.0
        logs.append(logsumexp(-E / T))
    return float(np.logaddexp(*logs))
