"""Retarded density response of the thermal chain.

The density commutator ``G_R(t, s) = -i theta(t) <[n_{j+s}(t), n_j(0)]>`` is a
double sum over momenta ``k, k'``.  With Fermi-factor occupations every term
factorizes into products of single-momentum sums, e.g.

    sum_kk' x_k y_k' sin(a_k - a_k') = S_x C_y - C_x S_y,
    S_x = sum_k x_k sin(a_k),  a_k = eps_k t - k s,

so a full ``(t, s)`` table costs a handful of matrix products instead of
``O(L^2)`` per entry.  :func:`retarded_green_direct` keeps the plain double
sum as a reference.

The exact spin-chain trace keeps NS states with even and R states with odd
quasiparticle number.  Writing each parity projector as ``(1 +/- (-1)^N)/2``
turns the constrained average into five signed Fermi-like ensembles, each of
which factorizes as above, so projection costs ``O(L)`` per entry as well.
This is the default; ``Ensemble.NS`` keeps the parity-blind Fermi factors.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from holoising.fermion_core import (ModeSet, Sector, log_cosh_product, log_sinh_product,
                                     mode_set)

T_TRANS = np.pi

_QUAD_START = 2001
_QUAD_CAP = 2 ** 15
_QUAD_RTOL = 1e-6
_CHUNK = 512


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class SourceProfile:
    """Gaussian wavepacket source centred on ``origin`` at ``t = 0``.

    ``origin=None`` means the middle site ``L/2``.  ``gain`` multiplies the
    size-dependent amplitude ``sqrt(2L/(sigma_t sigma_phi))/(4pi)``.
    """

    sigma_t: float = 0.25
    sigma_phi: float = 0.25
    Omega: float = 10.0
    M_source: int = 0
    origin: int | None = None
    gain: float = 1.0

    def __post_init__(self):
        if not (self.sigma_t > 0 and self.sigma_phi > 0):
            raise ValueError("source widths must be positive")
        if not 6 * self.sigma_t < T_TRANS:
            raise ValueError(f"6*sigma_t = {6 * self.sigma_t} must fit before t = pi")

    def amplitude(self, L: int) -> float:
        return self.gain * np.sqrt(2.0 * L / (self.sigma_t * self.sigma_phi)) / (4.0 * np.pi)

    def angle(self, j, L: int):
        origin = L // 2 if self.origin is None else self.origin
        return 2.0 * np.pi * (np.asarray(j) - origin) / L

    def spatial(self, j, L: int):
        phi = self.angle(j, L)
        return np.exp(-phi ** 2 / (2 * self.sigma_phi ** 2) + 1j * self.M_source * phi)

    def temporal(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(-t ** 2 / (2 * self.sigma_t ** 2) - 1j * self.Omega * t)


def source_field(j, t, p: SourceProfile, L: int):
    """Complex source amplitude at site ``j`` (1..L) and time ``t``."""
    return p.amplitude(L) * p.spatial(j, L) * p.temporal(t)


def _modes(L: int, sector) -> ModeSet:
    return mode_set(L, sector)


def _weight_vectors(modes: ModeSet, f: np.ndarray):
    g = 1.0 - f
    u2, v2, uv = modes.u ** 2, modes.v ** 2, modes.u * modes.v
    return np.stack([g * u2, g * uv, g * v2, f * u2, f * uv, f * v2])


def green_table(taus, seps, modes: ModeSet, occupations) -> np.ndarray:
    """``G_R(tau, s)`` on the outer grid ``taus x seps`` via separable sums.

    ``occupations`` are per-mode factors standing in for ``m_k``; the result
    is bilinear in them, so signed "twisted" factors are allowed.  Summation
    runs over momenta in ascending order inside fixed-size matrix products,
    so results are reproducible bit for bit.
    """
    taus = np.asarray(taus, dtype=float)
    seps = np.asarray(seps, dtype=float)
    L = modes.L
    X = _weight_vectors(modes, np.asarray(occupations, dtype=float))
    ks = np.outer(modes.momenta, seps)
    cos_ks, sin_ks = np.cos(ks), np.sin(ks)
    out = np.empty((taus.size, seps.size))
    for start in range(0, taus.size, _CHUNK):
        tau = taus[start:start + _CHUNK]
        et = np.outer(tau, modes.energies)
        sin_et, cos_et = np.sin(et), np.cos(et)
        S, C = [], []
        for x in X:
            xs, xc = sin_et * x, cos_et * x
            # sin(eps t - k s), cos(eps t - k s)
            S.append(xs @ cos_ks - xc @ sin_ks)
            C.append(xc @ cos_ks + xs @ sin_ks)
        gu2, guv, gv2, fu2, fuv, fv2 = range(6)

        def diff(a, b):
            return S[a] * C[b] - C[a] * S[b]

        def plus(a, b):
            return S[a] * C[b] + C[a] * S[b]

        scatter = diff(gu2, fu2) - 2.0 * diff(guv, fuv) + diff(gv2, fv2)
        pairs = plus(gu2, gv2) - plus(fu2, fv2) - plus(guv, guv) + plus(fuv, fuv)
        out[start:start + tau.size] = -2.0 * (scatter + pairs) / L ** 2
    out[taus < 0] = 0.0
    return out


class Ensemble(str, enum.Enum):
    """How occupations are averaged.

    ``NS``: grand-canonical Fermi factors on the NS momentum grid, blind to
    fermion parity.  ``PROJECTED``: the exact spin-chain trace, NS with even
    plus R with odd quasiparticle number.
    """

    NS = "ns"
    PROJECTED = "projected"


def _twisted(eps: np.ndarray, T: float) -> np.ndarray:
    # occupation factor of the (-1)^N-weighted ensemble: -1/(e^{eps/T} - 1)
    x = eps / T
    return np.exp(-x) / np.expm1(-x)


def ensemble_components(L: int, T: float, ensemble=Ensemble.PROJECTED):
    """Signed components ``(weight, modes, occupations)`` whose weighted sum of
    :func:`green_table` values is the thermal ``G_R``.

    The parity projector ``(1 +/- (-1)^N)/2`` splits each sector trace into a
    Fermi-factor part and a twisted part with factors ``-1/(e^{eps/T} - 1)``.
    The R zero mode (``eps = 0``) is summed by hand: with it empty the other
    R modes must be odd, with it filled they must be even.
    """
    ensemble = Ensemble(ensemble)
    if T < 0:
        raise ValueError("temperature must be nonnegative")
    ns = _modes(L, Sector.NS)
    if ensemble is Ensemble.NS or T == 0 or not np.isfinite(1.0 / T):
        # the T = 0 projected state is the NS vacuum; subnormal T is T = 0
        return [(1.0, ns, ns.occupations(T))]
    beta = 1.0 / T
    r = _modes(L, Sector.R)
    zero = r.energies == 0.0
    rest = r.energies[~zero]
    log_c_ns = log_cosh_product(ns.energies, beta)
    log_s_ns = log_sinh_product(ns.energies, beta)
    log_c_r = log_cosh_product(rest, beta)
    log_s_r = log_sinh_product(rest, beta)
    log_z = np.logaddexp(np.logaddexp(log_c_ns, log_s_ns) - np.log(2.0), log_c_r)

    twisted_ns = _twisted(ns.energies, T)
    fermi_r = r.occupations(T)  # zero mode at 1/2
    twisted_r = np.where(zero, 0.0, _twisted(np.where(zero, 1.0, r.energies), T))
    filled = np.where(zero, 1.0, twisted_r)
    return [
        (0.5 * np.exp(log_c_ns - log_z), ns, ns.occupations(T)),
        (0.5 * np.exp(log_s_ns - log_z), ns, twisted_ns),
        (np.exp(log_c_r - log_z), r, fermi_r),
        (0.5 * np.exp(log_s_r - log_z), r, filled),
        (-0.5 * np.exp(log_s_r - log_z), r, twisted_r),
    ]


def thermal_green_table(taus, seps, L: int, T: float, ensemble=Ensemble.PROJECTED) -> np.ndarray:
    total = None
    for weight, modes, occ in ensemble_components(L, T, ensemble):
        part = weight * green_table(taus, seps, modes, occ)
        total = part if total is None else total + part
    return total


def retarded_green(t, s, L: int, T: float, ensemble=Ensemble.PROJECTED):
    """``G_R(t, s)`` for scalar or 1-D ``t`` and ``s``; zero for ``t < 0``.

    Scalars in give a float; otherwise the shape is ``(len(t), len(s))`` with
    scalar axes dropped.
    """
    table = thermal_green_table(np.atleast_1d(t), np.atleast_1d(s), L, T, ensemble)
    if np.ndim(t) == 0 and np.ndim(s) == 0:
        return float(table[0, 0])
    if np.ndim(s) == 0:
        return table[:, 0]
    if np.ndim(t) == 0:
        return table[0]
    return table


def retarded_green_direct(t: float, s: int, L: int, T: float, ensemble=Ensemble.PROJECTED) -> float:
    """Plain ``O(L^2)`` double momentum sum; reference for :func:`green_table`."""
    if t < 0:
        return 0.0
    total = 0.0
    for weight, modes, f in ensemble_components(L, T, ensemble):
        k, eps, u, v = modes.momenta, modes.energies, modes.u, modes.v
        c1 = (np.outer(u, u) - np.outer(v, v)) ** 2
        c2 = np.outer(u, v) * (np.outer(u, v) - np.outer(v, u))
        occ1 = np.outer(1.0 - f, f)
        occ2 = 1.0 - f[:, None] - f[None, :]
        ph1 = (eps[:, None] - eps[None, :]) * t + (k[None, :] - k[:, None]) * s
        ph2 = (eps[:, None] + eps[None, :]) * t - (k[None, :] + k[:, None]) * s
        total += weight * (np.sum(c1 * occ1 * np.sin(ph1)) + np.sum(c2 * occ2 * np.sin(ph2)))
    return float(-2.0 * total / L ** 2)


# -- sourced response ------------------------------------------------------

@dataclass
class _Integrand:
    """Source-weighted spatial sum of ``G_R`` at each quadrature time, per profile."""

    target: int
    t_eval: float
    T: float
    L: int
    profiles: tuple
    ensemble: Ensemble

    def __call__(self, times: np.ndarray) -> np.ndarray:
        L = self.L
        sites = np.arange(1, L + 1)
        seps = (self.target - sites) % L
        G = thermal_green_table(self.t_eval - times, seps, L, self.T, self.ensemble)
        rows = [p.amplitude(L) * p.temporal(times) * (G @ p.spatial(sites, L))
                for p in self.profiles]
        return np.array(rows)


def _trapezoid_refined(integrand, lo: float, hi: float, n_start: int = _QUAD_START,
                       cap: int = _QUAD_CAP, rtol: float = _QUAD_RTOL) -> np.ndarray:
    """Trapezoid rule, doubling the grid until successive results agree to ``rtol``."""
    n = n_start
    times = np.linspace(lo, hi, n)
    values = integrand(times)
    previous = np.trapezoid(values, times, axis=-1)
    while True:
        n_new = 2 * n - 1
        if n_new > cap:
            raise QuadratureError(f"quadrature did not reach rtol={rtol} within {cap} points")
        mids = 0.5 * (times[:-1] + times[1:])
        mid_values = integrand(mids)
        merged = np.empty(values.shape[:-1] + (n_new,), dtype=values.dtype)
        merged[..., 0::2] = values
        merged[..., 1::2] = mid_values
        times = np.linspace(lo, hi, n_new)
        values, n = merged, n_new
        current = np.trapezoid(values, times, axis=-1)
        scale = np.maximum(np.abs(current), np.finfo(float).tiny)
        if np.all(np.abs(current - previous) <= rtol * scale):
            return current
        previous = current


def linear_responses(target: int, t_eval: float, T: float, profiles, L: int,
                     ensemble=Ensemble.PROJECTED) -> np.ndarray:
    """Vectorized :func:`linear_response` for several source profiles at once.

    All profiles must share ``sigma_t`` so the time window is common.
    """
    profiles = tuple(profiles)
    sigma_t = {p.sigma_t for p in profiles}
    if len(sigma_t) != 1:
        raise ValueError("profiles must share sigma_t")
    half = 6.0 * sigma_t.pop()
    if t_eval <= -half:
        return np.zeros(len(profiles), dtype=complex)
    integrand = _Integrand(target, t_eval, T, L, profiles, Ensemble(ensemble))
    return -_trapezoid_refined(integrand, -half, min(t_eval, half))


def linear_response(target: int, t_eval: float, T: float, p: SourceProfile, L: int,
                    ensemble=Ensemble.PROJECTED) -> complex:
    """First-order change of ``<n_target(t_eval)>`` driven by the source ``p``.

    ``-sum_j int dt J_j(t) G_R(t_eval - t, target - j)``, trapezoidal in time
    over the source support ``[-6 sigma_t, min(t_eval, 6 sigma_t)]``.
    """
    return complex(linear_responses(target, t_eval, T, [p], L, ensemble)[0])


def antipodal_signal(T: float, profiles, L: int, ensemble=Ensemble.PROJECTED) -> np.ndarray:
    """``|delta<n_L(pi)>|`` per profile; the numerator of the transport ratio."""
    if T < 0:
        raise ValueError("temperature must be nonnegative")
    return np.abs(linear_responses(L, T_TRANS, T, tuple(profiles), L, ensemble))


def transport_ratios(T: float, profiles, L: int, ensemble=Ensemble.PROJECTED) -> np.ndarray:
    """Antipodal signal at ``t = pi`` relative to its ``T = 0`` value, per profile."""
    if T < 0:
        raise ValueError("temperature must be nonnegative")
    profiles = tuple(profiles)
    base = antipodal_signal(0.0, profiles, L, ensemble)
    if np.any(base == 0):
        raise ZeroDivisionError("zero-temperature antipodal signal vanishes")
    if T == 0:
        return np.ones(len(profiles))
    return antipodal_signal(T, profiles, L, ensemble) / base


def transport_ratio(T: float, p: SourceProfile, L: int, ensemble=Ensemble.PROJECTED) -> float:
    return float(transport_ratios(T, [p], L, ensemble)[0])


# -- spatially summed response ---------------------------------------------

def summed_response(t, L: int, T: float, ensemble=Ensemble.PROJECTED):
    """``R(t) = -i theta(t) sum_j <[n_j(t), n_1(0)]>``.

    Summing over sites forces ``k' = -k``, leaving the single sum
    ``-(1/L) sum_k 4u_k^2 v_k^2 (1 - 2f_k) sin(2 eps_k t)``; on the NS grid
    ``4u^2 v^2 = cos^2(ka/2)`` and ``1 - 2f = tanh(eps/2T)``.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros(t_arr.size)
    for w, modes, f in ensemble_components(L, T, ensemble):
        weight = 4.0 * (modes.u * modes.v) ** 2 * (1.0 - 2.0 * f)
        out += w * (np.sin(2.0 * np.outer(t_arr, modes.energies)) @ weight)
    out = -out / L
    out[t_arr < 0] = 0.0
    return out if np.ndim(t) else float(out[0])
