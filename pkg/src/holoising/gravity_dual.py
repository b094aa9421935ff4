"""Closed-form quantities of the thermal AdS3 / BTZ saddle pair.

``Z_grav(T) = exp(1/(8GT)) + exp(pi^2 l^2 T/(2G))``.  Everything here is a
pure function of ``(T, l, G)``; derivatives are analytic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

ELL_CLASSICAL = 1.0
G_CLASSICAL = 3.0


class Flavor(str, enum.Enum):
    CLASSICAL = "classical"
    EFFECTIVE = "effective"


@dataclass(frozen=True)
class GravParams:
    ell: float = ELL_CLASSICAL
    G: float = G_CLASSICAL
    flavor: Flavor = Flavor.CLASSICAL

    def __post_init__(self):
        if not (self.ell > 0 and self.G > 0):
            raise ValueError(f"ell and G must be positive, got ({self.ell}, {self.G})")
        object.__setattr__(self, "flavor", Flavor(self.flavor))

    @classmethod
    def classical(cls) -> "GravParams":
        return cls(ELL_CLASSICAL, G_CLASSICAL, Flavor.CLASSICAL)

    @classmethod
    def effective(cls, ell: float = 1.28, G: float = 1.33) -> "GravParams":
        return cls(ell, G, Flavor.EFFECTIVE)


@dataclass(frozen=True)
class QnmSpec:
    Delta: float = 1.0
    T_H: float = 0.0

    def __post_init__(self):
        if not self.Delta > 0 or self.T_H < 0:
            raise ValueError("need Delta > 0 and T_H >= 0")

    @property
    def frequency(self) -> complex:
        return qnm_frequency(self.T_H, self.Delta)


def log_weights(T, g: GravParams = GravParams()):
    """Exponents ``(a, b) = (1/(8GT), pi^2 l^2 T/(2G))`` of the AdS and BTZ saddles."""
    T = np.asarray(T, dtype=float)
    if np.any(T <= 0):
        raise ValueError("log weights need T > 0")
    with np.errstate(over="ignore"):  # a -> inf as T -> 0 leaves the weights exact
        return 1.0 / (8.0 * g.G * T), np.pi ** 2 * g.ell ** 2 * T / (2.0 * g.G)


def ads_weight(T, g: GravParams = GravParams()):
    """``Z_AdS/Z_grav = 1/(1 + exp(b - a))``; exactly 1 at ``T = 0``."""
    T_arr = np.asarray(T, dtype=float)
    if np.any(T_arr < 0):
        raise ValueError("temperature must be nonnegative")
    safe = np.where(T_arr > 0, T_arr, 1.0)
    a, b = log_weights(safe, g)
    out = np.where(T_arr > 0, expit(a - b), 1.0)
    return out if out.ndim else float(out)


def btz_weight(T, g: GravParams = GravParams()):
    T_arr = np.asarray(T, dtype=float)
    safe = np.where(T_arr > 0, T_arr, 1.0)
    a, b = log_weights(safe, g)
    out = np.where(T_arr > 0, expit(b - a), 0.0)
    return out if out.ndim else float(out)


def hawking_page_temperature(ell: float) -> float:
    if not ell > 0:
        raise ValueError("ell must be positive")
    return 1.0 / (2.0 * np.pi * ell)


def _entropy_parts(T, g: GravParams):
    a, b = log_weights(T, g)
    wa, wb = expit(a - b), expit(b - a)
    log_z = np.logaddexp(a, b)
    return a, b, wa, wb, log_z


def grav_entropy(T, g: GravParams = GravParams()):
    """``S = ln Z + T dlnZ/dT``.  With ``a' = -a/T`` and ``b' = b/T`` this is
    ``ln Z - w_a a + w_b b`` where ``w`` are the saddle weights."""
    a, b, wa, wb, log_z = _entropy_parts(T, g)
    return log_z - wa * a + wb * b


def grav_entropy_derivative(T, g: GravParams = GravParams()):
    """``dS/dT = 2 dlnZ/dT + T d^2lnZ/dT^2``, all analytic.

    ``d^2lnZ/dT^2 = w_a a'' + w_a w_b (a' - b')^2`` with ``a'' = 2a/T^2`` and
    ``b'' = 0``.
    """
    T = np.asarray(T, dtype=float)
    a, b, wa, wb, _ = _entropy_parts(T, g)
    da, db = -a / T, b / T
    d1 = wa * da + wb * db
    d2 = wa * 2.0 * a / T ** 2 + wa * wb * (da - db) ** 2
    return 2.0 * d1 + T * d2


def qnm_frequency(T: float, Delta: float = 1.0) -> complex:
    """Lowest scalar quasi-normal frequency ``-2 pi i T Delta``."""
    if T < 0 or not Delta > 0:
        raise ValueError("need T >= 0 and Delta > 0")
    return complex(0.0, -2.0 * np.pi * T * Delta)


def qnm_decay_rate(T: float, Delta: float = 1.0) -> float:
    return -qnm_frequency(T, Delta).imag


def qnm_offset(T):
    """Late-time offset ``exp(-pi^2 T/2)/2`` of the summed response."""
    T = np.asarray(T, dtype=float)
    if np.any(T < 0):
        raise ValueError("temperature must be nonnegative")
    out = 0.5 * np.exp(-np.pi ** 2 * T / 2.0)
    return out if out.ndim else float(out)


def higher_curvature_G(ell_eff, ell_cl: float = ELL_CLASSICAL, G_cl: float = G_CLASSICAL):
    """Solve ``G_cl^2/G^2 + 3 = 4 l_eff^2/l_cl^2`` for the positive root ``G``."""
    ell_eff = np.asarray(ell_eff, dtype=float)
    radicand = 4.0 * (ell_eff / ell_cl) ** 2 - 3.0
    if np.any(radicand <= 0):
        bad = ell_eff[radicand <= 0] if ell_eff.ndim else ell_eff
        raise ValueError(f"no real G_eff for ell_eff={bad}: need ell_eff > sqrt(3)/2 * ell_cl")
    out = G_cl / np.sqrt(radicand)
    return out if out.ndim else float(out)


def higher_curvature_residual(ell_eff: float, G_eff: float,
                              ell_cl: float = ELL_CLASSICAL, G_cl: float = G_CLASSICAL) -> float:
    return G_cl ** 2 / G_eff ** 2 + 3.0 - 4.0 * ell_eff ** 2 / ell_cl ** 2
