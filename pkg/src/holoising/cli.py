"""Command-line driver emitting plot-ready CSV/JSON.

    python -m holoising [global flags] <command> [command flags]

Commands: transport, qnm, entropy, geodesic, fit, landscape, oracle-check.
A JSON config (``--config``) fills :class:`RunConfig`; command-line flags
override it.  Data files never contain timestamps; those go to
``manifest_<command>.json`` next to them.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from holoising import chain_thermo, fitting, geodesics, gravity_dual, thermal_response
from holoising.thermal_response import Ensemble, SourceProfile

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValueError):
    pass


# -- configuration ---------------------------------------------------------

@dataclass
class GridSpec:
    min: float
    max: float
    count: int
    spacing: str = "linear"  # linear | geometric | hybrid

    def __post_init__(self):
        if self.spacing not in ("linear", "geometric", "hybrid"):
            raise ConfigError(f"spacing: unknown value {self.spacing!r}")
        if int(self.count) != self.count or self.count < 1:
            raise ConfigError(f"count: must be a positive integer, got {self.count}")
        if not (self.min >= 0 and self.max >= self.min):
            raise ConfigError(f"min/max: need 0 <= min <= max, got ({self.min}, {self.max})")
        if self.spacing != "linear" and self.min <= 0:
            raise ConfigError("min: geometric spacing needs min > 0")

    def values(self) -> np.ndarray:
        if self.spacing == "linear":
            return np.linspace(self.min, self.max, self.count)
        if self.spacing == "geometric":
            return np.geomspace(self.min, self.max, self.count)
        return chain_thermo.temperature_grid(self.min, self.max, self.count)


_SOURCE_KEYS = {"sigma_t", "sigma_phi", "Omega", "origin", "gain"}
_GRAV_KEYS = {"flavor", "ell", "G"}
_GEO_KEYS = {"Omega", "M_ang", "ell", "rho_h"}

_DEFAULT_T = {
    "transport": GridSpec(0.02, 0.6, 15),
    "landscape": GridSpec(0.02, 0.6, 15),
    "entropy": GridSpec(0.01, 1.0, 400, "hybrid"),
}
_DEFAULT_L = {"transport": (128, 256, 512), "landscape": (512,), "qnm": (1000,),
              "entropy": (1000,)}


@dataclass
class RunConfig:
    """Everything a run depends on.  Empty/None fields take per-command defaults."""

    L: tuple = ()
    T_grid: GridSpec | None = None
    M_source: tuple = (0, 2, 5)
    source: dict = field(default_factory=dict)
    grav: dict = field(default_factory=dict)
    ensemble: str = "projected"
    qnm_T: tuple = (1.0, 2.0)
    qnm_samples: int = 400
    geodesics: tuple = ({"Omega": 5.0, "M_ang": 0.0, "ell": 1.0, "rho_h": 0.3},
                        {"Omega": 5.0, "M_ang": 0.0, "ell": 1.0, "rho_h": 0.1})
    arrival_grid: dict = field(default_factory=lambda: {"Omega": [1.0, 2.0, 4.0, 8.0, 16.0],
                                                        "M_fraction": [-0.9, -0.45, 0.0, 0.45, 0.9]})
    rho_start: float = 2.0
    eps_stop: float = 1e-6
    points: str | None = None
    fit_kind: str = "universal"
    ell_grid: GridSpec = field(default_factory=lambda: GridSpec(0.5, 3.0, 50))
    G_grid: GridSpec = field(default_factory=lambda: GridSpec(0.5, 3.0, 50))
    out: str = "out"
    format: str = "csv"
    threads: int = 0
    seedless: bool = False

    def __post_init__(self):
        self.L = tuple(int(x) for x in self.L)
        for L in self.L:
            if L < 2 or L % 2:
                raise ConfigError(f"L: must be even and >= 2, got {L}")
        if isinstance(self.T_grid, dict):
            self.T_grid = _grid_from(self.T_grid, "T_grid")
        for name in ("ell_grid", "G_grid"):
            value = getattr(self, name)
            if isinstance(value, dict):
                setattr(self, name, _grid_from(value, name))
            if getattr(self, name).min <= 0:
                raise ConfigError(f"{name}: values must be positive")
        self.M_source = tuple(int(m) for m in self.M_source)
        if not self.M_source:
            raise ConfigError("M_source: must be nonempty")
        _check_keys(self.source, _SOURCE_KEYS, "source")
        _check_keys(self.grav, _GRAV_KEYS, "grav")
        for i, g in enumerate(self.geodesics):
            _check_keys(g, _GEO_KEYS, f"geodesics[{i}]")
        self.geodesics = tuple(dict(g) for g in self.geodesics)
        _check_keys(self.arrival_grid, {"Omega", "M_fraction"}, "arrival_grid")
        if self.ensemble not in {e.value for e in Ensemble}:
            raise ConfigError(f"ensemble: unknown value {self.ensemble!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format: must be csv or json, got {self.format!r}")
        if self.fit_kind not in ("universal", "exp"):
            raise ConfigError(f"fit_kind: must be universal or exp, got {self.fit_kind!r}")
        self.qnm_T = tuple(float(T) for T in self.qnm_T)
        if not self.qnm_T or any(T <= 0 for T in self.qnm_T):
            raise ConfigError("qnm_T: temperatures must be positive")
        if self.qnm_samples < 6:
            raise ConfigError("qnm_samples: need at least 6")
        if self.threads < 0:
            raise ConfigError("threads: must be >= 0")
        if not (self.rho_start > 0 and self.eps_stop > 0):
            raise ConfigError("rho_start/eps_stop: must be positive")
        try:
            self.profiles()
            self.grav_params()
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        _check_keys(data, {f.name for f in fields(cls)}, "config")
        return cls(**data)

    def sizes(self, command: str) -> tuple:
        return self.L or _DEFAULT_L.get(command, (128,))

    def temperatures(self, command: str) -> np.ndarray:
        spec = self.T_grid or _DEFAULT_T.get(command, GridSpec(0.02, 0.6, 15))
        return spec.values()

    def profiles(self) -> tuple:
        return tuple(SourceProfile(M_source=m, **self.source) for m in self.M_source)

    def grav_params(self, default_flavor: str = "classical") -> gravity_dual.GravParams:
        flavor = self.grav.get("flavor", default_flavor)
        base = (gravity_dual.GravParams.classical() if flavor == "classical"
                else gravity_dual.GravParams.effective())
        return gravity_dual.GravParams(self.grav.get("ell", base.ell), self.grav.get("G", base.G),
                                       flavor)

    def workers(self) -> int:
        return self.threads or os.cpu_count() or 1


def _grid_from(data: dict, name: str) -> GridSpec:
    _check_keys(data, {"min", "max", "count", "spacing"}, name)
    try:
        return GridSpec(**data)
    except TypeError as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def _check_keys(data: dict, allowed: set, where: str) -> None:
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(map(repr, unknown))}")


# -- output ----------------------------------------------------------------

def fmt(x) -> str:
    """Locale-free round-trip formatting (17 significant digits)."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def write_table(path: Path, header, rows, form: str = "csv") -> Path:
    path = path.with_suffix("." + form)
    if form == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([fmt(v) for v in row])
    else:
        records = [{h: _jsonable(v) for h, v in zip(header, row)} for row in rows]
        path.write_text(json.dumps(records, indent=1) + "\n")
    return path


def read_table(path) -> tuple[list, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = np.array([[float(v) for v in row] for row in reader], dtype=float)
    return header, data


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


def write_json(path: Path, payload) -> Path:
    path = path.with_suffix(".json")
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
    return path


def _pmap(func, tasks, workers: int):
    """Ordered map; results do not depend on ``workers``."""
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(func, tasks, chunksize=1))


# -- commands --------------------------------------------------------------

def _signal_task(task):
    L, T, profiles, ensemble = task
    return thermal_response.antipodal_signal(T, profiles, L, ensemble)


def transport_sweep(cfg: RunConfig, command: str = "transport"):
    """Rows ``(T, L, M_source, ratio)``, T = 0 first in every series."""
    Ts = np.concatenate([[0.0], cfg.temperatures(command)])
    Ts = np.unique(Ts)
    profiles = cfg.profiles()
    tasks = [(L, float(T), profiles, cfg.ensemble) for L in cfg.sizes(command) for T in Ts]
    signals = _pmap(_signal_task, tasks, cfg.workers())
    rows = []
    n = Ts.size
    for i, L in enumerate(cfg.sizes(command)):
        block = np.array(signals[i * n:(i + 1) * n])
        base = block[0]
        if np.any(base == 0):
            raise ZeroDivisionError(f"zero-temperature antipodal signal vanishes at L={L}")
        for m_idx, p in enumerate(profiles):
            for T, sig in zip(Ts, block[:, m_idx]):
                rows.append((float(T), L, p.M_source, 1.0 if T == 0 else float(sig / base[m_idx])))
    return rows


def cmd_transport(cfg: RunConfig, out: Path) -> list[Path]:
    rows = transport_sweep(cfg)
    points = [(T, r) for T, _, _, r in rows]
    fit = fitting.fit_universal_curve(points)
    T_curve = np.linspace(0.0, float(max(T for T, _ in points)), 201)
    curve = gravity_dual.ads_weight(T_curve, gravity_dual.GravParams.effective(
        fit.params["ell_eff"], fit.params["G_eff"]))
    paths = [write_table(out / "transport", ("T", "L", "M_source", "ratio"), rows, cfg.format)]
    paths.append(write_json(out / "transport_fit", {
        "params": fit.params, "sse": fit.sse, "converged": fit.converged,
        "iterations": fit.iterations, "bracket": fit.bracket,
        "curve": {"T": T_curve, "ads_weight": curve},
        "reference": {"ell_eff": 1.28, "G_eff": 1.33},
    }))
    return paths


def qnm_window(T: float) -> tuple[float, float]:
    """Sample window for the decay fit: from ``1/(pi T)`` to ``pi/2``.

    It starts once the source-free response has settled into its slowest
    exponential and stops halfway to the first revival at ``t = pi``.
    """
    return 1.0 / (np.pi * T), np.pi / 2


def qnm_fit(L: int, T: float, samples: int, ensemble="projected"):
    lo, hi = qnm_window(T)
    t = np.linspace(lo, hi, samples)
    y = np.abs(thermal_response.summed_response(t, L, T, ensemble))
    return t, y, fitting.fit_exp_offset(np.column_stack([t, y]))


def cmd_qnm(cfg: RunConfig, out: Path) -> list[Path]:
    paths, summary = [], {}
    L = cfg.sizes("qnm")[0]
    for T in cfg.qnm_T:
        t, y, fit = qnm_fit(L, T, cfg.qnm_samples, cfg.ensemble)
        A, g, c = fit.params["amplitude"], fit.params["rate"], fit.params["offset"]
        model = A * np.exp(-g * t) + c
        tag = fmt(T).replace(".", "p")
        paths.append(write_table(out / f"qnm_T{tag}", ("t", "abs_R", "model"),
                                 zip(t, y, model), cfg.format))
        summary[fmt(T)] = {
            "L": L, "params": fit.params, "sse": fit.sse, "window": fit.extra["window"],
            "rate_reference": gravity_dual.qnm_decay_rate(T),
            "rate_over_reference": g / gravity_dual.qnm_decay_rate(T),
            "offset_normalized": c / A,
            "offset_reference": gravity_dual.qnm_offset(T),
            "offset_over_reference": (c / A) / gravity_dual.qnm_offset(T),
        }
        # diagnostic only: without the dominance cut the plateau stays in the window
        full = fitting.fit_exp_offset(np.column_stack([t, y]), dominance=0.0).params
        summary[fmt(T)]["full_window"] = {
            "rate_over_reference": full["rate"] / gravity_dual.qnm_decay_rate(T),
            "offset_over_reference": (full["offset"] / full["amplitude"]) / gravity_dual.qnm_offset(T),
        }
    paths.append(write_json(out / "qnm_fit", summary))
    return paths


def cmd_entropy(cfg: RunConfig, out: Path) -> list[Path]:
    L = cfg.sizes("entropy")[0]
    Ts = cfg.temperatures("entropy")
    if np.any(Ts <= 0):
        raise ConfigError("T_grid: entropy needs T > 0")
    g = cfg.grav_params("classical")
    curve = chain_thermo.entropy_curve(L, Ts)
    S_g = gravity_dual.grav_entropy(Ts, g)
    dS_g = gravity_dual.grav_entropy_derivative(Ts, g)
    rows = zip(Ts, curve.S, curve.dSdT, S_g, dS_g)
    paths = [write_table(out / "entropy", ("T", "S_chain", "dS_chain", "S_grav", "dS_grav"),
                         rows, cfg.format)]
    chain_min = chain_thermo.locate_dsdt_minimum(L, 0.05, 0.4)
    grav_min = chain_thermo.golden_minimize(
        lambda T: float(gravity_dual.grav_entropy_derivative(T, g)), 0.05, 0.4)
    paths.append(write_json(out / "entropy_minima", {
        "L": L,
        "chain": asdict(chain_min),
        "grav": asdict(grav_min),
        "hawking_page": gravity_dual.hawking_page_temperature(g.ell),
        "grav_params": {"ell": g.ell, "G": g.G},
    }))
    return paths


def cmd_geodesic(cfg: RunConfig, out: Path) -> list[Path]:
    paths = []
    for i, spec in enumerate(cfg.geodesics):
        p = geodesics.GeodesicParams(**spec)
        header = ("lambda_or_rho", "t", "rho", "phi", "r_compactified")
        if p.rho_h > 0:
            cls = geodesics.btz_classify(p)
            if cls is not geodesics.Classification.CAPTURED:
                print(f"geodesics[{i}]: {cls.value}, nothing to integrate", file=sys.stderr)
                continue
            traj = geodesics.btz_integrate(p, cfg.rho_start, cfg.eps_stop)
        else:
            traj = geodesics.ads_trajectory(p)
        paths.append(write_table(out / f"geodesic_{i}", header, traj.rows(), cfg.format))
    rows = []
    for Om in cfg.arrival_grid["Omega"]:
        for frac in cfg.arrival_grid["M_fraction"]:
            p = geodesics.GeodesicParams(float(Om), float(frac) * Om)
            t = geodesics.ads_arrival_time_numeric(p)
            rows.append((p.Omega, p.M_ang, p.ell, t, t - np.pi))
    paths.append(write_table(out / "ads_arrival", ("Omega", "M_ang", "ell", "t_arrive", "error"),
                             rows, cfg.format))
    return paths


def _load_points(cfg: RunConfig) -> np.ndarray:
    if cfg.points is None:
        raise ConfigError("points: a CSV with two numeric columns is required")
    try:
        header, data = read_table(cfg.points)
    except (OSError, ValueError, StopIteration) as exc:
        raise ConfigError(f"points: cannot read {cfg.points}: {exc}") from exc
    if "ratio" in header and "T" in header:
        return data[:, [header.index("T"), header.index("ratio")]]
    if data.ndim != 2 or data.shape[1] < 2:
        raise ConfigError("points: need at least two columns")
    return data[:, :2]


def cmd_fit(cfg: RunConfig, out: Path) -> list[Path]:
    pts = _load_points(cfg)
    if cfg.fit_kind == "universal":
        res = fitting.fit_universal_curve(pts)
    else:
        res = fitting.fit_exp_offset(pts)
    path = (out / "fit").with_suffix(".json")
    path.write_text(res.to_json() + "\n")
    return [path]


def cmd_landscape(cfg: RunConfig, out: Path) -> list[Path]:
    if cfg.points is not None:
        pts = _load_points(cfg)
    else:
        pts = np.array([(T, r) for T, _, _, r in transport_sweep(cfg, "landscape")])
    ell_grid, G_grid = cfg.ell_grid.values(), cfg.G_grid.values()
    land = fitting.sse_landscape(pts, ell_grid, G_grid)
    fit = fitting.fit_universal_curve(pts)
    rows = [(e, *land.sse[i]) for i, e in enumerate(ell_grid)]
    header = ("ell",) + tuple("G=" + fmt(g) for g in G_grid)
    paths = [write_table(out / "landscape", header, rows, cfg.format)]
    ells = ell_grid[4.0 * ell_grid ** 2 > 3.0]
    curve = gravity_dual.higher_curvature_G(ells)
    paths.append(write_table(out / "higher_curvature", ("ell", "G"), zip(ells, curve), cfg.format))
    ell_eff = fit.params["ell_eff"]
    G_rel = gravity_dual.higher_curvature_G(ell_eff)
    sse_rel = fitting.curve_sse(ell_eff, G_rel, pts[:, 0], pts[:, 1])
    paths.append(write_json(out / "landscape_summary", {
        "grid_minimum": land.minimum, "fit": fit.params, "fit_sse": fit.sse,
        "flat": land.flat,
        "higher_curvature_point": {"ell": ell_eff, "G": G_rel, "sse": sse_rel,
                                   "sse_over_minimum": sse_rel / min(land.minimum, fit.sse)},
        "classical_residual": gravity_dual.higher_curvature_residual(1.0, 3.0),
    }))
    return paths


def oracle_check(sizes=(4, 6, 8), temperatures=(0.5, 1.0, 5.0), times=(0.3, 1.0, 2.7)) -> dict:
    """Largest relative gaps between dense diagonalization and the fast routes.

    Green's-function gaps are measured against ``max_s |G(t, s)|`` at the same
    ``t``: outside the light cone single entries are exponentially small and
    carry no significant digits in either route.
    """
    from holoising import fermion_core, oracle

    worst = {"green": 0.0, "entropy": 0.0, "log_partition": 0.0}
    for L in sizes:
        seps = np.arange(L)
        for T in temperatures:
            fast = thermal_response.retarded_green(np.array(times), seps, L, T)
            ref = np.array([[oracle.dense_thermal_green(L, T, t, s) for s in seps] for t in times])
            scale = np.max(np.abs(ref), axis=1, keepdims=True)
            worst["green"] = max(worst["green"], float(np.max(np.abs(fast - ref) / scale)))
            S_ref = oracle.dense_entropy(L, T)
            worst["entropy"] = max(worst["entropy"], abs(chain_thermo.chain_entropy(L, T) - S_ref) / S_ref)
            lz = fermion_core.log_partition_spin(L, T)
            worst["log_partition"] = max(worst["log_partition"],
                                         abs(np.exp(lz - oracle.dense_log_partition(L, T)) - 1.0))
    return worst


def cmd_oracle_check(cfg: RunConfig, out: Path) -> list[Path]:
    sizes = cfg.L or (4, 6, 8)
    worst = oracle_check(sizes)
    path = write_json(out / "oracle_check", {"sizes": list(sizes), "max_relative": worst,
                                             "tolerance": 1e-8})
    for key, val in worst.items():
        print(f"{key:14s} max rel {val:.3e}")
    if max(worst.values()) > 1e-8:
        raise FloatingPointError("oracle disagreement above 1e-8")
    return [path]


COMMANDS = {
    "transport": cmd_transport,
    "qnm": cmd_qnm,
    "entropy": cmd_entropy,
    "geodesic": cmd_geodesic,
    "fit": cmd_fit,
    "landscape": cmd_landscape,
    "oracle-check": cmd_oracle_check,
}


# -- RNG guard -------------------------------------------------------------

class RandomnessUsed(RuntimeError):
    pass


@contextlib.contextmanager
def no_rng():
    """Make every common RNG entry point raise while the block runs."""
    def forbid(name):
        def _raise(*_a, **_k):
            raise RandomnessUsed(f"{name} called during a --seedless run")
        return _raise

    targets = [(np.random, n) for n in ("default_rng", "seed", "random", "rand", "randn",
                                        "randint", "normal", "uniform", "choice", "RandomState")]
    targets += [(random, n) for n in ("random", "seed", "randint", "uniform", "choice", "shuffle")]
    saved = [(mod, n, getattr(mod, n)) for mod, n in targets]
    try:
        for mod, n, _ in saved:
            setattr(mod, n, forbid(f"{mod.__name__}.{n}"))
        yield
    finally:
        for mod, n, orig in saved:
            setattr(mod, n, orig)


# -- entry point -----------------------------------------------------------

def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="holoising", description=__doc__.splitlines()[0])
    ap.add_argument("--config", type=Path, help="JSON file with RunConfig fields")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--threads", type=int, help="worker processes (default: all cores)")
    ap.add_argument("--seedless", action="store_true", default=None,
                    help="fail if any random number generator is touched")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--L", type=_int_list, help="system sizes, e.g. 128,256,512")
        if name in ("transport", "landscape"):
            sp.add_argument("--M", dest="M_source", type=_int_list, help="source angular momenta")
        if name in ("transport", "landscape", "entropy"):
            sp.add_argument("--T-min", type=float)
            sp.add_argument("--T-max", type=float)
            sp.add_argument("--T-count", type=int)
            sp.add_argument("--T-spacing", choices=("linear", "geometric", "hybrid"))
        if name in ("transport", "landscape", "qnm"):
            sp.add_argument("--ensemble", choices=[e.value for e in Ensemble])
        if name == "qnm":
            sp.add_argument("--T", dest="qnm_T", type=_float_list, help="temperatures, e.g. 1,2")
        if name in ("fit", "landscape"):
            sp.add_argument("--points", help="CSV of (T, ratio) or (t, y) samples")
        if name == "fit":
            sp.add_argument("--kind", dest="fit_kind", choices=("universal", "exp"))
    return ap


def resolve_config(args: argparse.Namespace) -> RunConfig:
    data = {}
    if args.config is not None:
        try:
            data = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigError(f"--config: cannot read {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--config: line {exc.lineno}: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise ConfigError("--config: top level must be an object")
        _check_keys(data, {f.name for f in fields(RunConfig)}, "config")
    for key in ("out", "format", "threads", "seedless", "M_source", "ensemble", "qnm_T",
                "points", "fit_kind"):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    if getattr(args, "L", None) is not None:
        data["L"] = args.L
    grid_flags = {k: getattr(args, f"T_{k}", None) for k in ("min", "max", "count", "spacing")}
    if any(v is not None for v in grid_flags.values()):
        grid = dict(data.get("T_grid") or asdict(_DEFAULT_T.get(args.command, GridSpec(0.02, 0.6, 15))))
        grid.update({k: v for k, v in grid_flags.items() if v is not None})
        data["T_grid"] = grid
    try:
        return RunConfig.from_dict(data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def run(command: str, cfg: RunConfig) -> list[Path]:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    guard = no_rng() if cfg.seedless else contextlib.nullcontext()
    started = time.time()
    with guard:
        paths = COMMANDS[command](cfg, out)
    manifest = {
        "command": command,
        "config": asdict(cfg),
        "files": sorted(p.name for p in paths),
        "started_unix": started,
        "elapsed_s": time.time() - started,
    }
    (out / f"manifest_{command}.json").write_text(json.dumps(_jsonable(manifest), indent=2) + "\n")
    return paths


NUMERIC_ERRORS = (fitting.FitError, thermal_response.QuadratureError, geodesics.GeodesicError,
                  FloatingPointError, ZeroDivisionError, RandomnessUsed)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args)
        paths = run(args.command, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for p in paths:
        print(p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
