"""Single-particle data of the critical transverse-field Ising chain.

The chain ``H = -(L/4pi) sum_j (Z_j Z_{j+1} + X_j)`` maps through Jordan-Wigner
onto free fermions in two sectors: Neveu-Schwarz (antiperiodic, even fermion
parity) and Ramond (periodic, odd fermion parity).  Energies are measured in
units where the low-energy theory lives on a circle of circumference 2pi, so
the hopping is ``J = L/(4pi)`` and low-lying levels sit near half-integers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import expit


class Sector(str, enum.Enum):
    NS = "NS"
    R = "R"


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"


def _check_size(L: int) -> None:
    if int(L) != L or L < 2 or L % 2:
        raise ValueError(f"L must be an even integer >= 2, got {L!r}")


def momentum_grid(L: int, sector: Sector | str) -> np.ndarray:
    """Return the ``L`` lattice momenta ``ka`` of one Brillouin zone, ascending.

    NS momenta are ``2pi(n + 1/2)/L`` for ``n = -L/2 .. L/2-1``; R momenta are
    ``2pi n/L`` for ``n = -L/2+1 .. L/2`` so that the zone is ``(-pi, pi]``.
    """
    _check_size(L)
    sector = Sector(sector)
    if sector is Sector.NS:
        n = np.arange(-L // 2, L // 2) + 0.5
    else:
        n = np.arange(-L // 2 + 1, L // 2 + 1).astype(float)
    k = 2.0 * np.pi * n / L
    if sector is Sector.R:
        k[-1] = np.pi  # 2pi(L/2)/L can round one ulp past the zone edge
    return k


def dispersion(ka, L: int):
    """Quasiparticle energy ``(L/pi)|sin(ka/2)|``, equal to ``2J sqrt(2 - 2cos ka)``."""
    return (L / np.pi) * np.abs(np.sin(np.asarray(ka, dtype=float) / 2.0))


def bogoliubov(ka, L: int | None = None):
    """Bogoliubov coefficients ``(u, v)`` at the critical point.

    ``u = sqrt((1 + |sin(ka/2)|)/2)`` and ``v`` carries the sign of ``sin ka``.
    ``v`` is written as ``|cos(ka/2)| / sqrt(2(1 + |sin(ka/2)|))`` to avoid the
    cancellation in ``1 - |sin(ka/2)|`` near the zone edge.  The unpaired
    modes ``ka = 0`` and ``ka = pi`` get ``(1, 0)``.  ``L`` is accepted for
    symmetry with :func:`dispersion`; the coefficients do not depend on it.
    """
    ka = np.asarray(ka, dtype=float)
    s = np.abs(np.sin(ka / 2.0))
    c = np.abs(np.cos(ka / 2.0))
    u = np.sqrt((1.0 + s) / 2.0)
    v = np.sign(np.sin(ka)) * c / np.sqrt(2.0 * (1.0 + s))
    unpaired = (ka == 0.0) | (np.abs(ka) == np.pi)
    u = np.where(unpaired, 1.0, u)
    v = np.where(unpaired, 0.0, v)
    return u, v


def fermi(eps, T: float):
    """Fermi factor ``1/(1 + exp(eps/T))``; the ``T = 0`` limit is taken exactly."""
    if T < 0:
        raise ValueError(f"temperature must be nonnegative, got {T}")
    eps = np.asarray(eps, dtype=float)
    if T == 0:
        return np.where(eps > 0, 0.0, 0.5)
    with np.errstate(over="ignore"):  # eps/T -> inf gives the exact limit 0
        return expit(-eps / T)


@dataclass(frozen=True)
class ModeSet:
    """Momenta, energies and Bogoliubov coefficients of one fermion sector."""

    L: int
    sector: Sector
    momenta: np.ndarray
    energies: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        for name in ("momenta", "energies", "u", "v"):
            getattr(self, name).setflags(write=False)

    def occupations(self, T: float) -> np.ndarray:
        return fermi(self.energies, T)


def mode_set(L: int, sector: Sector | str = Sector.NS) -> ModeSet:
    ka = momentum_grid(L, sector)
    u, v = bogoliubov(ka)
    return ModeSet(L=L, sector=Sector(sector), momenta=ka,
                   energies=dispersion(ka, L), u=u, v=v)


# -- parity-projected partition functions ---------------------------------

def log_cosh_product(eps, beta: float) -> float:
    """``ln prod_k 2cosh(beta eps_k/2)`` without overflow."""
    x = beta * np.asarray(eps, dtype=float)
    return float(np.sum(x / 2.0 + np.log1p(np.exp(-x))))


def log_sinh_product(eps, beta: float) -> float:
    """``ln prod_k 2sinh(beta eps_k/2)``; ``-inf`` if any mode has zero energy."""
    x = beta * np.asarray(eps, dtype=float)
    if np.any(x == 0.0):
        return -np.inf
    return float(np.sum(x / 2.0 + np.log(-np.expm1(-x))))


def log_partition_sector(L: int, T: float, sector: Sector | str,
                         parity: Parity | str) -> float:
    """Log of the fermion-parity-projected partition function of one sector.

    ``Z = (1/2)[prod 2cosh(eps/2T) +/- prod 2sinh(eps/2T)]`` with ``+`` for even
    and ``-`` for odd quasiparticle number.
    """
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    parity = Parity(parity)
    eps = dispersion(momentum_grid(L, sector), L)
    lc = log_cosh_product(eps, 1.0 / T)
    ls = log_sinh_product(eps, 1.0 / T)
    if parity is Parity.EVEN:
        out = np.logaddexp(lc, ls) - np.log(2.0)
    else:
        # lc > ls always since cosh > sinh termwise
        out = lc + np.log(-np.expm1(ls - lc)) - np.log(2.0)
    if not np.isfinite(out):
        raise FloatingPointError(f"non-finite log partition for L={L}, T={T}, {sector}, {parity}")
    return float(out)


def log_partition_spin(L: int, T: float) -> float:
    """Log of the full spin-chain partition function, ``Z_NS^even + Z_R^odd``."""
    return float(np.logaddexp(log_partition_sector(L, T, Sector.NS, Parity.EVEN),
                              log_partition_sector(L, T, Sector.R, Parity.ODD)))
