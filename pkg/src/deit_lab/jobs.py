"""Job configuration and the figure/scan jobs behind the command line."""

from __future__ import annotations

import configparser
import dataclasses
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .blockade import CavityParams, blockade_spectrum_scan, build_manifold, five_level_dynamics
from .catlab import duan_S, split_cat_density
from .eit import C_LIGHT, MediumParams, propagation_constants
from .errors import ConfigError, ValidationError
from .fockspace import default_cutoff
from .numerics import eig_general, eig_hermitian
from .series import CurveSeries

JOBS = ("fig3a", "fig3b", "fig5a", "fig5b", "fig7", "constants", "spectrum", "duan")
THREADS_ENV = "DEIT_LAB_THREADS"
MIN_CAT_CUTOFF = 20


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.points < 2:
            raise ConfigError(f"grid.points must be at least 2, got {self.points}")
        if not self.stop > self.start:
            raise ConfigError(f"grid must be strictly increasing: start={self.start}, stop={self.stop}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class CatSettings:
    gamma_amp: float = 2.0
    c: float = 1.0
    eta: float = 1.0
    c_values: tuple[float, ...] = (0.0, 0.5, 1.0)
    eta_values: tuple[float, ...] = (0.0, 0.4, 0.8, 1.0)
    cutoff: int | None = None


@dataclass(frozen=True)
class RunSettings:
    excitations: int = 2
    t_points: int = 2001
    t_max: float | None = None


_DEFAULT_GRIDS = {
    "fig3a": GridSpec(0.0, 3.0, 200),
    "fig3b": GridSpec(0.0, 3.0, 200),
    "fig5a": GridSpec(0.0, 1.0, 200),
    "fig5b": GridSpec(0.0, 1.0, 200),
}

_JOB_CAVITY = {
    "fig5b": {"N_atoms": 2, "delta": 0.1},
    "fig7": {"g_a": 0.5, "g_b": 0.5, "eps_pump": 0.02},
}


@dataclass(frozen=True)
class JobConfig:
    job: str
    medium: MediumParams = field(default_factory=MediumParams)
    cavity: CavityParams = field(default_factory=CavityParams)
    cat: CatSettings = field(default_factory=CatSettings)
    run: RunSettings = field(default_factory=RunSettings)
    grid: GridSpec | None = None
    out: str | None = None

    def grid_values(self) -> np.ndarray:
        spec = self.grid or _DEFAULT_GRIDS.get(self.job)
        if spec is None:
            raise ConfigError(f"job {self.job} takes no grid")
        return spec.values()

    def parameters(self) -> dict:
        d = {
            "job": self.job,
            "medium": dataclasses.asdict(self.medium),
            "cavity": dataclasses.asdict(self.cavity),
            "cat": dataclasses.asdict(self.cat),
            "run": dataclasses.asdict(self.run),
        }
        spec = self.grid or _DEFAULT_GRIDS.get(self.job)
        if spec is not None:
            d["grid"] = dataclasses.asdict(spec)
        return d


# -- parsing -----------------------------------------------------------------

_SECTIONS = {
    "medium": MediumParams,
    "cavity": CavityParams,
    "cat": CatSettings,
    "run": RunSettings,
    "grid": GridSpec,
}


def _field_types(cls) -> dict[str, str]:
    return {f.name: str(f.type) for f in dataclasses.fields(cls)}


def _convert(section: str, key: str, raw: str, typ: str):
    raw = raw.strip()
    try:
        if "tuple" in typ:
            return tuple(float(v) for v in raw.replace(",", " ").split())
        if raw.lower() in ("none", "") and "None" in typ:
            return None
        if typ.startswith("int"):
            val = float(raw)
            if val != int(val):
                raise ValueError
            return int(val)
        return float(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: cannot parse {raw!r} as {typ}") from None


def _section_values(section: str, items: dict[str, str]) -> dict:
    cls = _SECTIONS[section]
    types = _field_types(cls)
    out = {}
    for key, raw in items.items():
        name, scale = key, 1.0
        if key.endswith("_hz"):
            name, scale = key[:-3], 2 * math.pi
        if name not in types:
            raise ConfigError(f"{section}.{key}: unknown key (known: {', '.join(sorted(types))})")
        val = _convert(section, key, raw, types[name])
        if scale != 1.0:
            if not isinstance(val, float):
                raise ConfigError(f"{section}.{key}: _hz suffix only applies to frequencies")
            val *= scale
        out[name] = val
    return out


def load_config(job: str, path: str | None = None, overrides: list[str] | None = None,
                out: str | None = None) -> JobConfig:
    """Build a :class:`JobConfig` from an INI file and ``section.key=value`` overrides."""
    if job not in JOBS:
        raise ConfigError(f"unknown job {job!r}; choose from {', '.join(JOBS)}")
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    if path is not None:
        try:
            with open(path) as fh:
                cp.read_file(fh)
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from None
    for item in overrides or []:
        key, sep, val = item.partition("=")
        sec, dot, name = key.strip().partition(".")
        if not sep or not dot or not name:
            raise ConfigError(f"--set {item!r}: expected section.key=value")
        if not cp.has_section(sec):
            cp.add_section(sec)
        cp.set(sec, name, val)
    job_out = out
    values: dict[str, dict] = {s: {} for s in _SECTIONS}
    for sec in cp.sections():
        if sec == "job":
            for key, val in cp.items(sec):
                if key != "out":
                    raise ConfigError(f"job.{key}: unknown key (known: out)")
                job_out = job_out or val
            continue
        if sec not in _SECTIONS:
            raise ConfigError(f"[{sec}]: unknown section (known: job, {', '.join(_SECTIONS)})")
        values[sec] = _section_values(sec, dict(cp.items(sec)))
    cav = {**_JOB_CAVITY.get(job, {}), **values["cavity"]}
    try:
        grid = GridSpec(**{**dataclasses.asdict(_DEFAULT_GRIDS.get(job, GridSpec(0, 1, 2))), **values["grid"]}) \
            if values["grid"] else None
        return JobConfig(
            job=job,
            medium=MediumParams(**values["medium"]),
            cavity=CavityParams(**cav),
            cat=CatSettings(**values["cat"]),
            run=RunSettings(**values["run"]),
            grid=grid,
            out=job_out,
        )
    except ValidationError as exc:
        raise ConfigError(str(exc)) from None


# -- running -----------------------------------------------------------------


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be at least 1")
    return n


def ordered_map(fn: Callable, items) -> list:
    """Map over ``items`` with up to ``DEIT_LAB_THREADS`` workers, keeping input order."""
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _cat_cutoff(cfg: JobConfig, gamma: float) -> int:
    if cfg.cat.cutoff is not None:
        return int(cfg.cat.cutoff)
    return max(default_cutoff(gamma / math.sqrt(2)), MIN_CAT_CUTOFF)


def _fig3a(cfg: JobConfig) -> CurveSeries:
    grid = cfg.grid_values()
    cs = cfg.cat.c_values
    pts = [(g, c) for g in grid for c in cs]
    vals = ordered_map(lambda gc: duan_S(split_cat_density(gc[0], gc[1], _cat_cutoff(cfg, gc[0])), cfg.cat.eta).S, pts)
    rows = np.array(vals).reshape(len(grid), len(cs))
    return CurveSeries(["gamma"] + [f"S_c{c:g}" for c in cs], np.column_stack([grid, rows]))


def _fig3b(cfg: JobConfig) -> CurveSeries:
    grid = cfg.grid_values()
    etas = cfg.cat.eta_values
    pts = [(g, e) for g in grid for e in etas]
    vals = ordered_map(lambda ge: duan_S(split_cat_density(ge[0], cfg.cat.c, _cat_cutoff(cfg, ge[0])), ge[1]).S, pts)
    rows = np.array(vals).reshape(len(grid), len(etas))
    return CurveSeries(["gamma"] + [f"S_eta{e:g}" for e in etas], np.column_stack([grid, rows]))


def _fig5(cfg: JobConfig) -> CurveSeries:
    return blockade_spectrum_scan(cfg.cavity, cfg.grid_values(), mapper=ordered_map)


def _fig7(cfg: JobConfig) -> CurveSeries:
    t_grid = None
    if cfg.run.t_max is not None:
        t_grid = np.linspace(0.0, cfg.run.t_max, cfg.run.t_points)
    res = five_level_dynamics(cfg.cavity, t_grid)
    if t_grid is None and cfg.run.t_points != len(res.t):
        t_grid = np.linspace(0.0, res.t[-1], cfg.run.t_points)
        res = five_level_dynamics(cfg.cavity, t_grid, warn=False)
    cols = ["t"] + [f"P{k}" for k in range(1, 6)] + [f"P{k}_analytic" for k in range(1, 4)]
    rows = np.column_stack([res.t, res.populations, res.analytic_populations[:, :3]])
    meta = {"rabi_frequency": f"{res.rabi_frequency:.12g}", "omega_R": f"{res.omega_R:.12g}"}
    return CurveSeries(cols, rows, meta)


def _constants(cfg: JobConfig) -> CurveSeries:
    m = cfg.medium
    pc = propagation_constants(m)
    cols = ["Omega_d", "sigma0", "v_group", "v_group_over_c", "chi", "pi_over_chi_us",
            "alpha_a_re", "alpha_a_im", "self_phase_ratio", "weak_two_photon_absorption"]
    row = [m.Omega_d, pc.sigma0, pc.v_group, pc.v_group / C_LIGHT, pc.chi, pc.pi_time * 1e6,
           pc.alpha_a.real, pc.alpha_a.imag, pc.self_phase_ratio, float(pc.weak_two_photon_absorption)]
    return CurveSeries(cols, np.array([row]))


def _spectrum(cfg: JobConfig) -> CurveSeries:
    model = build_manifold(cfg.cavity, cfg.run.excitations, include_decay=True)
    if np.allclose(model.H, model.H.conj().T):
        vals = eig_hermitian(model.H)[0].astype(complex)
    else:
        vals = eig_general(model.H)[0]
    rows = np.column_stack([np.arange(len(vals)), vals.real, vals.imag])
    return CurveSeries(["index", "re", "im"], rows, {"dimension": model.dim})


def _duan(cfg: JobConfig) -> CurveSeries:
    g = cfg.cat.gamma_amp
    res = duan_S(split_cat_density(g, cfg.cat.c, _cat_cutoff(cfg, g)), cfg.cat.eta)
    return CurveSeries(["gamma", "S", "var_u", "var_v", "inseparable"],
                       np.array([[g, res.S, res.var_u, res.var_v, float(res.inseparable)]]))


_RUNNERS = {
    "fig3a": _fig3a,
    "fig3b": _fig3b,
    "fig5a": _fig5,
    "fig5b": _fig5,
    "fig7": _fig7,
    "constants": _constants,
    "spectrum": _spectrum,
    "duan": _duan,
}


def run_job(cfg: JobConfig, timestamp: str | None = None) -> CurveSeries:
    """Run ``cfg`` and, when ``cfg.out`` is set, write the CSV there."""
    series = _RUNNERS[cfg.job](cfg)
    series.metadata = {**series.metadata, "job": cfg.job, "version": __version__,
                       "parameters": cfg.parameters()}
    if cfg.out:
        series.write_csv(cfg.out, timestamp)
    return series
