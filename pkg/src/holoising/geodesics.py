"""Null geodesics in global AdS3 and in the non-rotating BTZ black hole.

Metrics (boundary time ``t`` is dimensionless, ``f = (rho^2 - rho_h^2)/l^2``)::

    AdS:  ds^2 = -(l^2 + rho^2) dt^2 + l^2 drho^2/(l^2 + rho^2) + rho^2 dphi^2
    BTZ:  ds^2 = -f dt^2 + drho^2/f + rho^2 dphi^2

with conserved ``Omega = (l^2 + rho^2) t'`` (resp. ``f t'``) and ``M = rho^2 phi'``.
The AdS radial equation is ``l^2 rho'^2 = Omega^2 - (l^2 + rho^2) M^2/rho^2`` and
the BTZ one ``rho'^2 = Omega^2 - f M^2/rho^2``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

RTOL = 1e-10
ATOL = 1e-13
EPS_STOP = 1e-6
RHO_MAX = 1e6


class Classification(str, enum.Enum):
    REACHES_ANTIPODE = "ReachesAntipode"
    CAPTURED = "Captured"
    NOT_BOUNDARY_LAUNCHABLE = "NotBoundaryLaunchable"


class GeodesicError(RuntimeError):
    """Integration failure; ``state`` holds the last accepted ``(rho, t, phi)``."""

    def __init__(self, message: str, state=None):
        super().__init__(message)
        self.state = state


@dataclass(frozen=True)
class GeodesicParams:
    Omega: float
    M_ang: float = 0.0
    ell: float = 1.0
    rho_h: float = 0.0

    def __post_init__(self):
        if not self.Omega > 0:
            raise ValueError(f"Omega must be positive, got {self.Omega}")
        if not self.ell > 0:
            raise ValueError(f"ell must be positive, got {self.ell}")
        if self.rho_h < 0:
            raise ValueError(f"rho_h must be nonnegative, got {self.rho_h}")

    def btz_mass(self, G: float) -> float:
        """``M_BTZ`` from ``rho_h = l sqrt(8 G M_BTZ)``."""
        return self.rho_h ** 2 / (8.0 * G * self.ell ** 2)


@dataclass(frozen=True)
class GeodesicTrajectory:
    parameter: np.ndarray  # affine lambda_tilde (AdS closed form) or rho (BTZ)
    samples: np.ndarray  # columns t, rho, phi
    classification: Classification
    ell: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def t(self) -> np.ndarray:
        return self.samples[:, 0]

    @property
    def rho(self) -> np.ndarray:
        return self.samples[:, 1]

    @property
    def phi(self) -> np.ndarray:
        return self.samples[:, 2]

    @property
    def r_compactified(self) -> np.ndarray:
        rho = np.abs(self.rho)
        return rho / np.sqrt(rho ** 2 + self.ell ** 2)

    def rows(self) -> np.ndarray:
        """Columns ``(lambda_or_rho, t, rho, phi, r_compactified)``."""
        return np.column_stack([self.parameter, self.samples, self.r_compactified])


# -- global AdS3 -----------------------------------------------------------

def _check_ads(p: GeodesicParams) -> None:
    if not p.Omega ** 2 > p.M_ang ** 2:
        raise ValueError(f"need Omega^2 > M^2 for a boundary-to-boundary ray, "
                         f"got Omega={p.Omega}, M={p.M_ang}")


def ads_rho_min(p: GeodesicParams) -> float:
    _check_ads(p)
    return p.ell * abs(p.M_ang) / np.sqrt(p.Omega ** 2 - p.M_ang ** 2)


def ads_null_geodesic(lambda_tilde, p: GeodesicParams):
    """Closed-form ``(t, rho, phi)`` at rescaled affine parameter ``lambda_tilde``.

    ``lambda_tilde = (Omega^2 - M^2) lambda``; the ray leaves ``(t, phi) = (0, 0)``
    at ``-inf``, passes ``rho_min`` at 0 and lands on ``(pi, +/-pi)``.  With
    ``M = 0`` the ray crosses the centre and ``phi`` jumps from 0 to pi there
    (pi/2 is returned at the crossing itself).
    """
    _check_ads(p)
    lam = np.asarray(lambda_tilde, dtype=float)
    ell, Om, M = p.ell, p.Omega, p.M_ang
    rho = np.sqrt((ell ** 2 * M ** 2 + lam ** 2 / ell ** 2) / (Om ** 2 - M ** 2))
    t = np.pi / 2 + np.arctan(lam / (ell ** 2 * Om))
    if M == 0:
        phi = np.pi / 2 * (1.0 + np.sign(lam))
    else:
        phi = np.sign(M) * (np.pi / 2 + np.arctan(lam / (ell ** 2 * abs(M))))
    if lam.ndim == 0:
        return float(t), float(rho), float(phi)
    return t, rho, phi


def ads_trajectory(p: GeodesicParams, lambda_max: float = 50.0, count: int = 401) -> GeodesicTrajectory:
    """Closed-form samples on ``lambda_tilde in [-lambda_max, lambda_max]``."""
    lam = np.linspace(-lambda_max, lambda_max, count)
    t, rho, phi = ads_null_geodesic(lam, p)
    return GeodesicTrajectory(lam, np.column_stack([t, rho, phi]),
                              Classification.REACHES_ANTIPODE, p.ell)


def _ads_branch(p: GeodesicParams, rho_max: float, dense: bool = False, with_phi: bool = True):
    """Integrate ``(dt, dphi)`` from the turning point out to ``rho_max``.

    Uses ``rho^2 = rho_min^2 + w^2``; in ``w`` the inverse-square-root
    singularity of ``dt/drho`` at the turning point cancels against ``drho/dw``.
    """
    ell, Om, M = p.ell, p.Omega, p.M_ang
    rho_min = ads_rho_min(p)
    if not rho_max > rho_min:
        raise ValueError(f"rho_max={rho_max} must exceed rho_min={rho_min}")
    k = np.sqrt(Om ** 2 - M ** 2)
    w_max = np.sqrt(rho_max ** 2 - rho_min ** 2)

    def rhs(w, y):
        dt = ell * Om / (k * (ell ** 2 + rho_min ** 2 + w * w))
        if not with_phi:
            return [dt]
        # dphi/dw peaks with width rho_min; arrival times skip it
        return [dt, 0.0 if M == 0 else ell * M / (k * (rho_min ** 2 + w * w))]

    y0 = [0.0, 0.0] if with_phi else [0.0]
    sol = solve_ivp(rhs, (0.0, w_max), y0, method="DOP853", rtol=RTOL * 1e-2,
                    atol=ATOL * 1e-1, dense_output=dense)
    if sol.status != 0:
        raise GeodesicError(f"AdS integration failed: {sol.message}",
                            state=(float(np.sqrt(rho_min ** 2 + sol.t[-1] ** 2)), *sol.y[:, -1]))
    return sol, rho_min


def _ads_arrival_at(p: GeodesicParams, rho_max: float) -> float:
    # ingoing branch rho_max -> rho_min, then the outgoing one back out
    inward, _ = _ads_branch(p, rho_max, with_phi=False)
    outward, _ = _ads_branch(p, rho_max, with_phi=False)
    return float(inward.y[0, -1] + outward.y[0, -1])


def ads_arrival_time_numeric(p: GeodesicParams, rho_max: float = RHO_MAX) -> float:
    """Boundary-to-boundary coordinate time, extrapolated to ``rho_max -> inf``.

    The cutoff error is ``O(1/rho_max)``, so one Richardson step with
    ``rho_max`` and ``2 rho_max`` removes it.
    """
    t1 = _ads_arrival_at(p, rho_max)
    t2 = _ads_arrival_at(p, 2.0 * rho_max)
    return 2.0 * t2 - t1


def ads_numeric_profile(p: GeodesicParams, rho, rho_max: float = RHO_MAX):
    """Numeric ``(t, phi)`` at radii ``rho`` on both branches, measured from the
    boundary point ``rho_max`` on the ingoing side.

    Returns arrays of shape ``(2, len(rho))``: row 0 ingoing, row 1 outgoing.
    """
    sol, rho_min = _ads_branch(p, rho_max, dense=True)
    rho = np.asarray(rho, dtype=float)
    w = np.sqrt(np.maximum(rho ** 2 - rho_min ** 2, 0.0))
    half_t, half_phi = sol.y[:, -1]
    t_w, phi_w = sol.sol(w)
    t = np.stack([half_t - t_w, half_t + t_w])
    phi = np.stack([half_phi - phi_w, half_phi + phi_w])
    return t, phi


def ads_affine_check(p: GeodesicParams, rho_start: float | None = None) -> dict:
    """Integrate the full second-order geodesic equations in affine form and
    report drift of ``Omega``, ``M`` and of the null condition.
    """
    ell, Om, M = p.ell, p.Omega, p.M_ang
    rho_min = ads_rho_min(p)
    rho0 = rho_start if rho_start is not None else max(2.0 * rho_min, ell)
    k2 = Om ** 2 - M ** 2
    lam0 = np.sqrt(k2 * rho0 ** 2 - ell ** 2 * M ** 2) * ell / k2  # lambda_tilde / k2
    rho_dot0 = -np.sqrt(Om ** 2 - (ell ** 2 + rho0 ** 2) * M ** 2 / rho0 ** 2) / ell
    y0 = [0.0, rho0, 0.0, Om / (ell ** 2 + rho0 ** 2), rho_dot0, M / rho0 ** 2]

    def rhs(_, y):
        t, rho, phi, td, rd, pd = y
        h = ell ** 2 + rho ** 2
        tdd = -2.0 * rho * rd * td / h
        rdd = (h / ell ** 2) * (-rho * td ** 2 + rho * pd ** 2 + ell ** 2 * rho * rd ** 2 / h ** 2)
        pdd = -2.0 * rd * pd / rho if rho != 0 else 0.0
        return [td, rd, pd, tdd, rdd, pdd]

    sol = solve_ivp(rhs, (0.0, 2.0 * lam0), y0, method="DOP853", rtol=RTOL * 1e-2,
                    atol=ATOL * 1e-1)
    if sol.status != 0:
        raise GeodesicError(f"affine integration failed: {sol.message}")
    t, rho, phi, td, rd, pd = sol.y
    h = ell ** 2 + rho ** 2
    energy = h * td
    ang = rho ** 2 * pd
    null = -h * td ** 2 + ell ** 2 * rd ** 2 / h + rho ** 2 * pd ** 2
    scale = h * td ** 2
    return {
        "omega_drift": float(np.max(np.abs(energy - Om)) / Om),
        "M_drift": float(np.max(np.abs(ang - M))) / max(abs(M), 1.0),
        "null_residual": float(np.max(np.abs(null) / scale)),
        "steps": int(sol.t.size),
    }


# -- BTZ -------------------------------------------------------------------

def btz_classify(p: GeodesicParams) -> Classification:
    """Algebraic sign analysis of the BTZ radial equation.

    ``rho^2 rho'^2 = rho^2 (Omega^2 - M^2/l^2) + M^2 rho_h^2/l^2``.  A ray can
    come in from the boundary only if the first bracket is positive, and then
    the right side never vanishes outside the horizon: no turning point.
    """
    if not p.rho_h > 0:
        raise ValueError("BTZ classification needs rho_h > 0")
    if p.Omega ** 2 * p.ell ** 2 <= p.M_ang ** 2:
        return Classification.NOT_BOUNDARY_LAUNCHABLE
    return Classification.CAPTURED


def btz_turning_point(p: GeodesicParams) -> float | None:
    """Real turning radius outside the horizon, or ``None``."""
    den = p.M_ang ** 2 - p.Omega ** 2 * p.ell ** 2
    if den <= 0:
        return None
    rho_t = float(np.sqrt(p.M_ang ** 2 * p.rho_h ** 2 / den))
    return rho_t if rho_t > p.rho_h else None


def _btz_rates(rho, p: GeodesicParams):
    """Ingoing ``(dt/drho, dphi/drho)``; both negative since rho decreases."""
    ell, Om, M, rh = p.ell, p.Omega, p.M_ang, p.rho_h
    f = (rho * rho - rh * rh) / ell ** 2
    root = np.sqrt(rho * rho * Om ** 2 - M ** 2 * f)
    return -Om * rho / (f * root), -M / (rho * root), f


def btz_integrate(p: GeodesicParams, rho_start: float = 2.0,
                  eps_stop: float = EPS_STOP) -> GeodesicTrajectory:
    """Ingoing ray from ``rho_start`` to ``rho_h (1 + eps_stop)``.

    ``rho`` is the independent variable; ``t`` grows like ``-log(rho - rho_h)``
    so the final time depends on ``eps_stop``.  Samples are the integrator's
    accepted steps.
    """
    if btz_classify(p) is not Classification.CAPTURED:
        raise ValueError(f"ray is {btz_classify(p).value}; only captured rays are integrated")
    if not rho_start > p.rho_h:
        raise ValueError("rho_start must lie outside the horizon")
    if not 0 < eps_stop:
        raise ValueError("eps_stop must be positive")
    rho_end = p.rho_h * (1.0 + eps_stop)
    if not rho_end < rho_start:
        raise ValueError("rho_start must exceed the stopping radius")

    def rhs(rho, y):
        dt, dphi, _ = _btz_rates(rho, p)
        return [dt, dphi]

    sol = solve_ivp(rhs, (rho_start, rho_end), [0.0, 0.0], method="DOP853",
                    rtol=RTOL, atol=ATOL)
    if sol.status != 0:
        last = (float(sol.t[-1]), float(sol.y[0, -1]), float(sol.y[1, -1]))
        raise GeodesicError(f"BTZ integration failed near rho={last[0]}: {sol.message}", last)
    rho = sol.t
    t, phi = sol.y
    dt, dphi, f = _btz_rates(rho, p)
    # g(x', x') with rho as the parameter, relative to the radial term 1/f
    null = (-f * dt ** 2 + 1.0 / f + rho ** 2 * dphi ** 2) * f
    return GeodesicTrajectory(rho, np.column_stack([t, rho, phi]), Classification.CAPTURED, p.ell,
                              diagnostics={"null_residual": float(np.max(np.abs(null))),
                                           "steps": int(rho.size), "rho_stop": float(rho_end)})
