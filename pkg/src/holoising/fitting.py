"""Parameter extraction: the universal transport curve and QNM decay fits."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar

from holoising.gravity_dual import GravParams, ads_weight


class FitError(ValueError):
    pass


class UnidentifiableError(FitError):
    """Data do not constrain the parameters (e.g. every point on one plateau)."""


@dataclass
class FitResult:
    params: dict
    sse: float
    iterations: int
    converged: bool
    bracket: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        out = {k: v for k, v in asdict(self).items() if k != "extra"}
        out.update(self.extra)
        return json.dumps(out, indent=2, sort_keys=True)


# -- universal transport curve ---------------------------------------------

ELL_RANGE = (0.5, 3.0)
G_RANGE = (0.5, 3.0)
GRID_SIZE = 50


def _as_points(points):
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise FitError("points must be a sequence of (T, ratio) pairs")
    return arr[:, 0], arr[:, 1]


def curve_sse(ell: float, G: float, T: np.ndarray, ratio: np.ndarray) -> float:
    if ell <= 0 or G <= 0:
        return np.inf
    return float(np.sum((ratio - ads_weight(T, GravParams(ell, G))) ** 2))


def spans_crossover(ratio: np.ndarray) -> bool:
    return bool(ratio.max() > 0.5 > ratio.min())


@dataclass(frozen=True)
class Landscape:
    ell_grid: np.ndarray
    G_grid: np.ndarray
    sse: np.ndarray  # indexed [ell, G]
    flat: bool

    @property
    def argmin(self) -> tuple[int, int]:
        i, j = np.unravel_index(np.argmin(self.sse), self.sse.shape)
        return int(i), int(j)

    @property
    def minimum(self) -> float:
        return float(self.sse.min())

    def cell_contains(self, ell: float, G: float) -> bool:
        """True when ``(ell, G)`` lies within one grid step of the minimum cell."""
        i, j = self.argmin
        el, gg = self.ell_grid, self.G_grid
        lo_e, hi_e = el[max(i - 1, 0)], el[min(i + 1, el.size - 1)]
        lo_g, hi_g = gg[max(j - 1, 0)], gg[min(j + 1, gg.size - 1)]
        return lo_e <= ell <= hi_e and lo_g <= G <= hi_g


def sse_landscape(points, ell_grid, G_grid) -> Landscape:
    """SSE of the AdS-weight curve against ``points`` on an ``ell x G`` grid."""
    T, ratio = _as_points(points)
    ell_grid = np.asarray(ell_grid, dtype=float)
    G_grid = np.asarray(G_grid, dtype=float)
    if ell_grid.size == 0 or G_grid.size == 0:
        raise FitError("grids must be nonempty")
    if np.any(np.diff(ell_grid) <= 0) or np.any(np.diff(G_grid) <= 0):
        raise FitError("grids must be strictly ascending")
    E, G = np.meshgrid(ell_grid, G_grid, indexing="ij")
    safe_T = np.where(T > 0, T, 1.0)
    a = 1.0 / (8.0 * G[..., None] * safe_T)
    b = np.pi ** 2 * E[..., None] ** 2 * safe_T / (2.0 * G[..., None])
    model = np.where(T > 0, 1.0 / (1.0 + np.exp(np.clip(b - a, -700, 700))), 1.0)
    sse = np.sum((ratio - model) ** 2, axis=-1)
    spread = sse.max() - sse.min()
    flat = (not spans_crossover(ratio)) or spread <= 1e-9 * max(sse.max(), 1e-300)
    return Landscape(ell_grid, G_grid, sse, bool(flat))


def _doubling_bracket(func, x0: float, f0: float, lo: float, hi: float):
    """Distance on each side of ``x0`` at which ``func`` reaches ``2 f0``."""
    target = 2.0 * f0
    if f0 <= 0:
        return (0.0, 0.0)
    out = []
    for end in (lo, hi):
        g = lambda x: func(x) - target
        if g(end) <= 0:
            out.append(abs(end - x0))
        else:
            out.append(abs(brentq(g, x0, end, xtol=1e-12) - x0))
    return tuple(out)


def fit_universal_curve(points, ell_range=ELL_RANGE, G_range=G_RANGE,
                        grid_size: int = GRID_SIZE, xtol: float = 1e-6) -> FitResult:
    """Fit ``ratio(T) = Z_AdS/Z_grav`` for ``(ell_eff, G_eff)``.

    A ``grid_size x grid_size`` scan seeds a Nelder-Mead refinement from the
    best cell.  Uncertainty is the SSE-doubling distance along each axis.
    """
    T, ratio = _as_points(points)
    if T.size < 4:
        raise FitError(f"need at least 4 points, got {T.size}")
    if not spans_crossover(ratio):
        raise UnidentifiableError("data do not cross ratio = 1/2; (ell, G) is unidentifiable")
    ell_grid = np.linspace(*ell_range, grid_size)
    G_grid = np.linspace(*G_range, grid_size)
    land = sse_landscape(points, ell_grid, G_grid)
    i, j = land.argmin
    x0 = np.array([ell_grid[i], G_grid[j]])
    step = np.array([ell_grid[1] - ell_grid[0], G_grid[1] - G_grid[0]])
    simplex = np.array([x0, x0 + [step[0], 0.0], x0 + [0.0, step[1]]])

    def objective(x):
        return curve_sse(x[0], x[1], T, ratio)

    res = minimize(objective, x0, method="Nelder-Mead",
                   options={"initial_simplex": simplex, "xatol": xtol, "fatol": 1e-15,
                            "maxiter": 20000, "maxfev": 40000})
    ell, G = (float(v) for v in res.x)
    sse = float(res.fun)
    if sse > land.minimum:
        # refinement must never lose to the grid
        ell, G, sse = float(x0[0]), float(x0[1]), land.minimum
    bracket = {
        "ell": _doubling_bracket(lambda e: curve_sse(e, G, T, ratio), ell, sse, 1e-3, 10 * ell),
        "G": _doubling_bracket(lambda g: curve_sse(ell, g, T, ratio), G, sse, 1e-3, 10 * G),
    }
    return FitResult(params={"ell_eff": ell, "G_eff": G}, sse=sse, iterations=int(res.nit),
                     converged=bool(res.success), bracket=bracket,
                     extra={"grid_minimum": land.minimum})


# -- exponential decay with offset ------------------------------------------

def _linear_fit(t, y, rate):
    X = np.column_stack([np.exp(-rate * t), np.ones_like(t)])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    r = y - X @ coef
    return coef, float(r @ r)


def _fit_window(t, y, rate_grid):
    sse = [ _linear_fit(t, y, g)[1] for g in rate_grid]
    k = int(np.argmin(sse))
    lo = rate_grid[max(k - 1, 0)]
    hi = rate_grid[min(k + 1, rate_grid.size - 1)]
    if hi > lo:
        res = minimize_scalar(lambda g: _linear_fit(t, y, g)[1], bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-13, "maxiter": 500})
        rate, iters = float(res.x), int(res.nfev)
        if res.fun > sse[k]:
            rate = float(rate_grid[k])
    else:
        rate, iters = float(rate_grid[k]), 0
    (amp, off), s = _linear_fit(t, y, rate)
    return float(amp), rate, float(off), s, iters


def fit_exp_offset(samples, rate_grid=None, dominance: float = 10.0) -> FitResult:
    """Fit ``y = A exp(-rate t) + c`` by variable projection.

    For each trial rate ``(A, c)`` follow from linear least squares; the best
    grid rate is polished with a bounded scalar search.  The fit is then
    repeated once on the samples where ``A exp(-rate t) > dominance * c``.
    ``y`` is normalized by its maximum internally so results scale exactly.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise FitError("samples must be (t, y) pairs")
    t, y = arr[:, 0], arr[:, 1]
    if t.size < 6:
        raise FitError(f"need at least 6 samples, got {t.size}")
    if np.any(y <= 0):
        raise FitError("y must be positive")
    scale = float(y.max())
    y = y / scale
    span = float(t.max() - t.min())
    if rate_grid is None:
        rate_grid = np.geomspace(1e-3 / span, 1e3 / span, 601)
    rate_grid = np.asarray(rate_grid, dtype=float)

    amp, rate, off, sse, iters = _fit_window(t, y, rate_grid)
    window = np.ones(t.size, dtype=bool)
    for _ in range(1):
        keep = amp * np.exp(-rate * t) > dominance * abs(off)
        if amp <= 0 or keep.sum() < 6:
            raise FitError("window collapse: decaying part never dominates the offset")
        window = keep
        amp, rate, off, sse, more = _fit_window(t[keep], y[keep], rate_grid)
        iters += more
    return FitResult(params={"amplitude": amp * scale, "rate": rate, "offset": off * scale},
                     sse=sse * scale ** 2, iterations=iters, converged=True,
                     extra={"window": [float(t[window].min()), float(t[window].max())],
                            "n_window": int(window.sum())})
