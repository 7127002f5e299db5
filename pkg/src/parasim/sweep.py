"""Configuration-driven Monte Carlo sweeps and beam-pattern tables.

A sweep evaluates the selected architectures on shared channel
realizations along one axis (radiated power, parasitic count, active
count, or parasitic spacing) and reduces per-trial results into mean
spectral efficiency, energy efficiency, and SNR per (axis value,
architecture) cell.

Reproducibility contract: trial t draws its path set from the key
``(seed, t)`` and the random baseline from ``(seed, t, 101)``, so
results are independent of execution order and worker count; rows are
reduced in trial-index order, giving byte-identical CSV output for a
fixed seed.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import benchmarks
from .benchmarks import PowerModel, total_power
from .channel import (LinkBudget, PathSet, link_constant, multipath_channel,
                      sample_paths)
from .circuit import (DEFAULT_FIXED_RESISTANCE, OPEN_CIRCUIT_REACTANCE,
                      LoadConfig, currents_from_voltages, effective_channel)
from .em_model import ArrayGeometry, DipoleSpec, PartitionedImpedance, \
    assemble_impedance
from .errors import ConfigError, ResonanceError, SolverError
from .solver import OracleConfig, beam_pattern_reference, \
    random_search_baseline

ARCHITECTURES = ("hrp-upa", "fd-ula", "fd-upa", "hps-upa", "random-baseline")
AXES = ("pmax_dbm", "n_parasitic", "n_active", "dx_over_lambda")
BASELINE_SALT = 101


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** (p_dbm / 10.0) / 1000.0


@dataclass(frozen=True)
class SweepConfig:
    """Resolved sweep settings; see README for the JSON schema."""

    n_active: int = 6
    n_parasitic: int = 2
    dx_over_lambda: float = 0.4
    dy_over_lambda: float = 0.5
    carrier_frequency_hz: float = 7e9
    dipole_length_over_lambda: float = 0.5
    dipole_radius_over_lambda: float = 1 / 500
    link: LinkBudget = field(default_factory=LinkBudget)
    power: PowerModel = field(default_factory=PowerModel)
    fixed_resistance_ohm: float = DEFAULT_FIXED_RESISTANCE
    n_paths: int = 4
    axis: str = "pmax_dbm"
    values: tuple = tuple(float(v) for v in range(-10, 31))
    pmax_dbm: float = 10.0
    trials: int = 500
    seed: int = 1
    architectures: tuple = ("hrp-upa", "fd-ula", "fd-upa", "hps-upa")
    baseline_budget: int = 64

    def __post_init__(self):
        if self.axis not in AXES:
            raise ConfigError(f"sweep.axis must be one of {AXES}, got {self.axis!r}")
        if len(self.values) == 0:
            raise ConfigError("sweep.values must be nonempty")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ConfigError("sweep.values must be strictly increasing")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        bad = [a for a in self.architectures if a not in ARCHITECTURES]
        if bad:
            raise ConfigError(f"unknown architectures {bad}; valid: {ARCHITECTURES}")
        if self.baseline_budget < 1:
            raise ConfigError("baseline_budget must be at least 1")

    def dipole(self) -> DipoleSpec:
        lam = 299792458.0 / self.carrier_frequency_hz
        return DipoleSpec(length=lam * self.dipole_length_over_lambda,
                          radius=lam * self.dipole_radius_over_lambda,
                          carrier_frequency=self.carrier_frequency_hz)

    def geometry_at(self, axis_value: float) -> ArrayGeometry:
        n_a, n_p, dxl = self.n_active, self.n_parasitic, self.dx_over_lambda
        if self.axis == "n_parasitic":
            n_p = int(axis_value)
        elif self.axis == "n_active":
            n_a = int(axis_value)
        elif self.axis == "dx_over_lambda":
            dxl = float(axis_value)
        dip = self.dipole()
        lam = dip.wavelength
        return ArrayGeometry(n_active=n_a, n_parasitic_per_active=n_p,
                             dx=dxl * lam, dy=self.dy_over_lambda * lam,
                             dipole=dip)

    def pmax_watts_at(self, axis_value: float) -> float:
        dbm = axis_value if self.axis == "pmax_dbm" else self.pmax_dbm
        return dbm_to_watts(float(dbm))

    def echo(self) -> dict:
        d = {
            "n_active": self.n_active, "n_parasitic": self.n_parasitic,
            "dx_over_lambda": self.dx_over_lambda,
            "dy_over_lambda": self.dy_over_lambda,
            "carrier_frequency_hz": self.carrier_frequency_hz,
            "dipole_length_over_lambda": self.dipole_length_over_lambda,
            "dipole_radius_over_lambda": self.dipole_radius_over_lambda,
            "range_m": self.link.range_m,
            "bandwidth_hz": self.link.bandwidth_hz,
            "antenna_temperature_k": self.link.antenna_temperature_k,
            "radiation_resistance_ohm": self.link.radiation_resistance_ohm,
            "boltzmann_j_per_k": self.link.boltzmann_j_per_k,
            "p_rfc_w": self.power.p_rfc, "p_ps_w": self.power.p_ps,
            "p_var_w": self.power.p_var,
            "insertion_loss_db": self.power.insertion_loss_db,
            "fixed_resistance_ohm": self.fixed_resistance_ohm,
            "n_paths": self.n_paths, "axis": self.axis,
            "values": list(self.values), "pmax_dbm": self.pmax_dbm,
            "trials": self.trials, "seed": self.seed,
            "architectures": list(self.architectures),
            "baseline_budget": self.baseline_budget,
        }
        return d


def _get_section(data: dict, name: str) -> dict:
    sec = data.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"section {name!r} must be an object")
    return sec


def _pick(section: dict, names: dict, where: str) -> dict:
    out = {}
    for json_name, attr in names.items():
        if json_name in section:
            out[attr] = section[json_name]
    unknown = set(section) - set(names)
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")
    return out


def config_from_dict(data: dict) -> SweepConfig:
    """Build a SweepConfig from parsed JSON, naming offending fields."""
    if not isinstance(data, dict):
        raise ConfigError("top-level config must be a JSON object")
    kwargs: dict = {}
    kwargs.update(_pick(_get_section(data, "geometry"), {
        "n_active": "n_active", "n_parasitic": "n_parasitic",
        "dx_over_lambda": "dx_over_lambda", "dy_over_lambda": "dy_over_lambda",
    }, "geometry"))
    kwargs.update(_pick(_get_section(data, "dipole"), {
        "carrier_frequency_hz": "carrier_frequency_hz",
        "length_over_lambda": "dipole_length_over_lambda",
        "radius_over_lambda": "dipole_radius_over_lambda",
    }, "dipole"))
    link_kw = _pick(_get_section(data, "link"), {
        "range_m": "range_m", "bandwidth_hz": "bandwidth_hz",
        "antenna_temperature_k": "antenna_temperature_k",
        "radiation_resistance_ohm": "radiation_resistance_ohm",
        "boltzmann_j_per_k": "boltzmann_j_per_k",
    }, "link")
    power_kw = _pick(_get_section(data, "power"), {
        "p_rfc_w": "p_rfc", "p_ps_w": "p_ps", "p_var_w": "p_var",
        "insertion_loss_db": "insertion_loss_db",
    }, "power")
    kwargs.update(_pick(_get_section(data, "loads"), {
        "fixed_resistance_ohm": "fixed_resistance_ohm",
    }, "loads"))
    kwargs.update(_pick(_get_section(data, "channel"), {
        "n_paths": "n_paths",
    }, "channel"))
    sweep_sec = _get_section(data, "sweep")
    kwargs.update(_pick(sweep_sec, {
        "axis": "axis", "values": "values", "pmax_dbm": "pmax_dbm",
    }, "sweep"))
    for scalar in ("trials", "seed", "baseline_budget"):
        if scalar in data:
            kwargs[scalar] = data[scalar]
    if "architectures" in data:
        arch = data["architectures"]
        if not isinstance(arch, list):
            raise ConfigError("architectures must be a list of names")
        kwargs["architectures"] = tuple(arch)
    if "values" in kwargs:
        kwargs["values"] = tuple(float(v) for v in kwargs["values"])
    try:
        return SweepConfig(link=LinkBudget(**link_kw),
                           power=PowerModel(**power_kw), **kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str) -> tuple[SweepConfig, dict]:
    """Read a JSON config file; returns the config and the raw dict."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})"
        ) from exc
    return config_from_dict(data), data


@dataclass(frozen=True)
class SweepRow:
    axis: str
    axis_value: float
    architecture: str
    mean_se: float
    mean_ee: float
    mean_snr_db: float
    trials: int
    failures: int


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    rows: tuple


# Per-process state for the worker pool (set once by the initializer so
# the impedance matrix is not re-pickled for every trial).
_WORKER_STATE: dict | None = None


def _init_worker(state: dict) -> None:
    global _WORKER_STATE
    _WORKER_STATE = state


def _pool_trial(trial: int) -> dict:
    return _eval_trial(_WORKER_STATE, trial)


def _eval_trial(state: dict, trial: int) -> dict:
    """SNR-per-watt of every selected architecture on one shared realization.

    Returns ``{architecture: q or None}`` with q the SNR at one watt of
    radiated power; the SNR of every architecture here scales linearly in
    the power budget, so each trial is evaluated once and rescaled along
    the power axis.
    """
    z: PartitionedImpedance = state["z"]
    geom: ArrayGeometry = state["geom"]
    link = state["link_value"]
    pm: PowerModel = state["power"]
    rfix = state["fixed_resistance"]
    paths = sample_paths(state["n_paths"], (state["seed"], trial))
    ch = multipath_channel(paths, geom)
    out: dict = {}
    for arch in state["architectures"]:
        try:
            if arch == "hrp-upa":
                res = benchmarks.eval_hrp_upa(z, geom, ch, link, 1.0, pm, rfix)
            elif arch == "fd-ula":
                res = benchmarks.eval_fd_ula(z.z_a, ch, link, 1.0, pm)
            elif arch == "fd-upa":
                res = benchmarks.eval_fd_upa(z, ch, link, 1.0, pm)
            elif arch == "hps-upa":
                res = benchmarks.eval_hps_upa(z, ch, link, 1.0, pm)
            else:
                sol = random_search_baseline(
                    ch, z, geom, state["baseline_budget"],
                    (state["seed"], trial, BASELINE_SALT), 1.0, link, rfix)
                out[arch] = sol.snr
                continue
            out[arch] = res.snr
        except (ResonanceError, SolverError):
            out[arch] = None
    return out


def _trial_results(state: dict, trials: int, workers: int) -> list[dict]:
    if workers <= 1:
        return [_eval_trial(state, t) for t in range(trials)]
    chunk = max(1, trials // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                             initargs=(state,)) as pool:
        return list(pool.map(_pool_trial, range(trials), chunksize=chunk))


def run_sweep(cfg: SweepConfig, workers: int = 1) -> SweepResult:
    """Execute the configured sweep and reduce per-trial results to rows."""
    dip = cfg.dipole()
    link_value = link_constant(cfg.link, dip)
    rows: list[SweepRow] = []

    def reduce_rows(axis_value: float, results: list[dict]) -> None:
        p_w = cfg.pmax_watts_at(axis_value)
        geom = cfg.geometry_at(axis_value)
        for arch in cfg.architectures:
            qs = np.array([r[arch] for r in results
                           if r[arch] is not None], dtype=float)
            failures = sum(1 for r in results if r[arch] is None)
            if qs.size:
                snr_lin = p_w * qs
                mean_se = float(np.mean(np.log2(1.0 + snr_lin)))
                p_tot = total_power(arch, p_w, geom.n_active,
                                    geom.n_parasitic_per_active, cfg.power)
                mean_ee = mean_se / p_tot
                mean_snr = float(np.mean(snr_lin))
                snr_db = 10.0 * np.log10(mean_snr) if mean_snr > 0 else -np.inf
            else:
                mean_se = mean_ee = snr_db = float("nan")
            rows.append(SweepRow(
                axis=cfg.axis, axis_value=float(axis_value),
                architecture=arch, mean_se=mean_se, mean_ee=mean_ee,
                mean_snr_db=snr_db, trials=len(results) - failures,
                failures=failures))

    def state_for(axis_value: float) -> dict:
        geom = cfg.geometry_at(axis_value)
        if set(cfg.architectures) == {"fd-ula"}:
            # actives-only runs never touch the parasitic blocks
            geom = ArrayGeometry(n_active=geom.n_active,
                                 n_parasitic_per_active=0, dx=geom.dx,
                                 dy=geom.dy, dipole=geom.dipole)
        return {
            "z": assemble_impedance(geom), "geom": geom,
            "link_value": link_value, "power": cfg.power,
            "fixed_resistance": cfg.fixed_resistance_ohm,
            "n_paths": cfg.n_paths, "seed": cfg.seed,
            "architectures": cfg.architectures,
            "baseline_budget": cfg.baseline_budget,
        }

    if cfg.axis == "pmax_dbm":
        # geometry and channel do not depend on the power axis: evaluate
        # each trial once and rescale
        results = _trial_results(state_for(cfg.values[0]), cfg.trials, workers)
        for v in cfg.values:
            reduce_rows(v, results)
    else:
        for v in cfg.values:
            results = _trial_results(state_for(v), cfg.trials, workers)
            reduce_rows(v, results)
    return SweepResult(config=cfg, rows=tuple(rows))


def _fmt(x: float) -> str:
    if np.isnan(x):
        return "nan"
    if np.isinf(x):
        return "-inf" if x < 0 else "inf"
    return f"{x:.10g}"


def write_sweep_csv(result: SweepResult, file: str | TextIO) -> None:
    """Write sweep rows with the resolved config echoed as comment lines."""
    lines = [f"# {k}={json.dumps(v)}" for k, v in result.config.echo().items()]
    lines.append("# mean_snr_db is 10*log10 of the mean linear SNR")
    lines.append("axis,axis_value,architecture,mean_se_bps_hz,"
                 "mean_ee_bps_hz_w,mean_snr_db,trials,failures")
    for r in result.rows:
        lines.append(f"{r.axis},{_fmt(r.axis_value)},{r.architecture},"
                     f"{_fmt(r.mean_se)},{_fmt(r.mean_ee)},"
                     f"{_fmt(r.mean_snr_db)},{r.trials},{r.failures}")
    text = "\n".join(lines) + "\n"
    if isinstance(file, str):
        with open(file, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        file.write(text)


def failure_fraction(result: SweepResult) -> float:
    total = sum(r.trials + r.failures for r in result.rows)
    failed = sum(r.failures for r in result.rows)
    return failed / total if total else 0.0


@dataclass(frozen=True)
class PatternConfig:
    """Settings for the beam-pattern tables (see README for the JSON keys)."""

    sweep: SweepConfig
    theta_start_deg: float = -90.0
    theta_stop_deg: float = 90.0
    theta_points: int = 181
    reactances_ohm: tuple = ()
    v_active: tuple = ()
    oracle: OracleConfig = field(default_factory=OracleConfig)

    def theta_grid(self) -> np.ndarray:
        if self.theta_points < 2:
            raise ConfigError("pattern.theta_deg.points must be at least 2")
        return np.linspace(self.theta_start_deg, self.theta_stop_deg,
                           self.theta_points)


def pattern_config_from_dict(data: dict) -> PatternConfig:
    base = config_from_dict({k: v for k, v in data.items() if k != "pattern"})
    sec = _get_section(data, "pattern")
    kwargs: dict = {}
    grid = sec.get("theta_deg", {})
    if grid:
        kwargs["theta_start_deg"] = float(grid.get("start", -90.0))
        kwargs["theta_stop_deg"] = float(grid.get("stop", 90.0))
        kwargs["theta_points"] = int(grid.get("points", 181))
    if "reactances_ohm" in sec:
        kwargs["reactances_ohm"] = tuple(float(v) for v in sec["reactances_ohm"])
    if "v_active" in sec:
        kwargs["v_active"] = tuple(complex(v) for v in sec["v_active"])
    if "oracle" in sec:
        okw = _pick(sec["oracle"], {
            "multistarts": "multistarts", "lower": "lower", "upper": "upper",
            "tol_ohm": "tol_ohm", "max_sweeps": "max_sweeps", "seed": "seed",
            "include_closed_form_start": "include_closed_form_start",
        }, "pattern.oracle")
        kwargs["oracle"] = OracleConfig(**okw)
    return PatternConfig(sweep=base, **kwargs)


def load_pattern_config(path: str) -> PatternConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})"
        ) from exc
    return pattern_config_from_dict(data)


def run_pattern_maxgain(cfg: PatternConfig) -> list[tuple[float, float, float]]:
    """Per-angle best beam pattern: closed form next to the numerical oracle.

    Returns (theta_deg, gain_closed_form, gain_oracle) tuples; linear gains.
    """
    sc = cfg.sweep
    if sc.n_active != 1:
        raise ConfigError("maxgain mode requires geometry.n_active = 1")
    geom = _fixed_geometry(sc)
    z = assemble_impedance(geom)
    out = []
    for theta_deg in cfg.theta_grid():
        theta = float(np.deg2rad(theta_deg))
        g_cf, g_or = beam_pattern_reference(
            theta, z, geom, cfg.oracle, sc.fixed_resistance_ohm)
        out.append((float(theta_deg), g_cf, g_or))
    return out


def run_pattern_fixedload(cfg: PatternConfig) -> list[tuple[float, float]]:
    """Normalized pattern of a voltage-driven array with explicit loads.

    Active currents follow from the source voltages with the loaded
    parasitic network absorbed; the pattern is the response to a
    single-path channel swept over angle, normalized so its maximum sits
    at 0 dB.  Returns (theta_deg, pattern_db) tuples.
    """
    sc = cfg.sweep
    geom = _fixed_geometry(sc)
    z = assemble_impedance(geom)
    n_pt = geom.n_parasitic_total
    if cfg.reactances_ohm:
        if len(cfg.reactances_ohm) != n_pt:
            raise ConfigError(
                f"pattern.reactances_ohm needs {n_pt} entries in canonical "
                f"port order, got {len(cfg.reactances_ohm)}")
        x = np.array(cfg.reactances_ohm).reshape(
            (geom.n_active, geom.n_parasitic_per_active)).T
    else:
        x = np.full((geom.n_parasitic_per_active, geom.n_active),
                    OPEN_CIRCUIT_REACTANCE)
    loads = LoadConfig(fixed_resistance=sc.fixed_resistance_ohm, reactances=x)
    v_a = np.array(cfg.v_active, dtype=complex) if cfg.v_active \
        else np.ones(geom.n_active, dtype=complex)
    if len(v_a) != geom.n_active:
        raise ConfigError(f"pattern.v_active needs {geom.n_active} entries")
    i_a = currents_from_voltages(z, loads, v_a)
    thetas = cfg.theta_grid()
    values = np.empty(len(thetas))
    for k, theta_deg in enumerate(thetas):
        path = PathSet(alphas=np.array([1.0 + 0j]),
                       thetas=np.array([float(np.deg2rad(theta_deg))]))
        ch = multipath_channel(path, geom)
        h_eff = effective_channel(z, loads, ch)
        values[k] = np.abs(i_a @ h_eff) ** 2
    peak = values.max()
    if peak <= 0:
        raise SolverError("pattern is identically zero")
    db = 10.0 * np.log10(values / peak)
    return [(float(t), float(v)) for t, v in zip(thetas, db)]


def _fixed_geometry(sc: SweepConfig) -> ArrayGeometry:
    dip = sc.dipole()
    return ArrayGeometry(n_active=sc.n_active,
                         n_parasitic_per_active=sc.n_parasitic,
                         dx=sc.dx_over_lambda * dip.wavelength,
                         dy=sc.dy_over_lambda * dip.wavelength, dipole=dip)


def write_pattern_csv(rows: Sequence[tuple], header: Iterable[str],
                      echo: dict, file: str | TextIO) -> None:
    lines = [f"# {k}={json.dumps(v)}" for k, v in echo.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if isinstance(file, str):
        with open(file, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        file.write(text)
