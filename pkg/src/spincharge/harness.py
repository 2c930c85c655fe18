"""Experiment orchestration: configs, single runs, sweeps, and reports.

A run charges one lattice through one schedule and reports exact and
sampled observables. A sweep executes runs over axes of N, gamma, or
cross-talk bias on a worker pool, then fits the precision scaling
1/sigma^2 = c * N^alpha per (gamma, j_crosstalk) group.
"""
from __future__ import annotations

import concurrent.futures
import csv
import functools
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__ as _version
from .errors import ConfigError, SpinChargeError
from .lattice import SpinLattice, connectivity_ratio, from_edge_list, ring, torus
from .models import ScalingFit, fit_scaling
from .observables import (
    MagnetizationDistribution,
    distribution,
    fluctuation,
    magnetization,
    sample_shots,
    sample_stats,
    stored_power,
)
from .operators import N_CAP, hs_norm_closed_form
from .propagate import (
    LINDBLAD_N_CAP,
    evolve_lindblad,
    evolve_unitary,
    ground_state,
)
from .schedule import (
    PRESETS,
    EnergyTable,
    ProtocolSchedule,
    coefficients,
    equalize_local,
)

__all__ = [
    "ExperimentConfig",
    "RunResult",
    "SweepOutcome",
    "run_single",
    "run_sweep",
    "emit_report",
    "audit_equalization",
    "calibrate_tau",
    "fit_from_results",
    "results_to_csv",
    "results_from_csv",
    "CSV_COLUMNS",
]

CSV_COLUMNS = (
    "preset", "mode", "N", "n_C", "tau", "dt", "gamma", "j_crosstalk",
    "h_used", "J_used", "mu_exact", "sigma_exact", "mu_bar", "sigma_bar",
    "nu", "seed", "energy_J", "power_W",
)

PLOT_COLUMNS = (
    "N", "mu_bar", "sigma_bar", "inv_sigma_bar_sq", "mu_exact",
    "sigma_exact", "inv_sigma_exact_sq",
)

_AUDIT_TOL = 1e-9
_AUDIT_SAMPLES = 61


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: lattice family, schedule source, and sweep axes.

    Fields left at None inherit from the named preset. Sweep axes that are
    empty fall back to the scalar field of the same name.
    """

    preset: str = "numerics"
    mode: str = "cooperative"
    lattice: str = "ring"
    torus_shape: tuple[int, int] | None = None
    edge_list_path: str | None = None
    n_spins: int = 4
    tau: float | None = None
    dt: float | None = None
    h: float | None = None
    J: float | None = None
    eta: float = 1.0
    phase_factor: float | None = None
    table_path: str | None = None
    gamma: float = 0.0
    j_crosstalk: float = 0.0
    crosstalk_all_pairs: bool = False
    nu: int = 1000
    seed: int = 1
    equalize: bool = True
    equalization_scheme: str = "scalar"
    sweep_n: tuple[int, ...] = ()
    sweep_gamma: tuple[float, ...] = ()
    sweep_j_crosstalk: tuple[float, ...] = ()
    out: str | None = None

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}")
        if self.mode not in ("local", "cooperative"):
            raise ConfigError(f"mode must be local|cooperative, got {self.mode!r}")
        if self.lattice not in ("ring", "torus", "edge_list"):
            raise ConfigError(f"unknown lattice kind {self.lattice!r}")
        if self.lattice == "torus" and self.torus_shape is None:
            raise ConfigError("lattice 'torus' requires torus_shape")
        if self.lattice == "edge_list" and self.edge_list_path is None:
            raise ConfigError("lattice 'edge_list' requires edge_list_path")
        if self.gamma < 0 or any(g < 0 for g in self.sweep_gamma):
            raise ConfigError("gamma must be >= 0")
        if self.nu < 1:
            raise ConfigError(f"nu must be >= 1, got {self.nu}")
        object.__setattr__(self, "sweep_n", tuple(int(n) for n in self.sweep_n))
        object.__setattr__(self, "sweep_gamma", tuple(float(g) for g in self.sweep_gamma))
        object.__setattr__(
            self, "sweep_j_crosstalk",
            tuple(float(j) for j in self.sweep_j_crosstalk),
        )
        if self.torus_shape is not None:
            object.__setattr__(self, "torus_shape", tuple(self.torus_shape))

    @classmethod
    def from_json(cls, source) -> "ExperimentConfig":
        """Load a config from JSON text or a file path."""
        if hasattr(source, "read"):
            text = source.read()
        else:
            text = str(source)
            if not text.lstrip().startswith("{"):
                try:
                    with open(text, "r", encoding="utf-8") as fh:
                        text = fh.read()
                except OSError as err:
                    raise ConfigError(f"cannot read config: {err}") from err
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise ConfigError(f"config is not valid JSON: {err}") from err
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as err:
            raise ConfigError(f"bad config: {err}") from err

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    def preset_params(self) -> dict:
        return dict(PRESETS[self.preset])

    def effective_dt(self) -> float:
        return self.dt if self.dt is not None else self.preset_params()["dt"]


@dataclass(frozen=True)
class RunResult:
    """One row of a results table: config echo plus observables."""

    preset: str
    mode: str
    n_spins: int
    n_couplings: int
    tau: float
    dt: float
    gamma: float
    j_crosstalk: float
    h_used: float
    j_used: float
    mu_exact: float
    sigma_exact: float
    mu_bar: float
    sigma_bar: float
    nu: int
    seed: int
    energy_j: float
    power_w: float
    audit_max_dev: float = 0.0
    wall_time: float = 0.0
    version: str = _version

    def __post_init__(self):
        if not -1.0 <= self.mu_exact <= 1.0:
            raise ValueError(f"mu_exact {self.mu_exact} outside [-1, 1]")
        if self.sigma_exact < 0 or self.sigma_bar < 0:
            raise ValueError("fluctuations must be >= 0")

    def csv_row(self) -> list:
        return [
            self.preset, self.mode, self.n_spins, self.n_couplings,
            repr(self.tau), repr(self.dt), repr(self.gamma),
            repr(self.j_crosstalk), repr(self.h_used), repr(self.j_used),
            repr(self.mu_exact), repr(self.sigma_exact), repr(self.mu_bar),
            repr(self.sigma_bar), self.nu, self.seed,
            repr(self.energy_j), repr(self.power_w),
        ]


@dataclass(frozen=True)
class SweepOutcome:
    """Aggregated sweep output: rows, per-group fits, and failures."""

    results: tuple[RunResult, ...]
    fits: tuple[tuple[float, float, ScalingFit], ...]
    failures: tuple[tuple[tuple, str], ...] = ()


def _build_lattice(cfg: ExperimentConfig, n: int) -> SpinLattice:
    if cfg.lattice == "ring":
        return ring(n)
    if cfg.lattice == "torus":
        rows, cols = cfg.torus_shape
        lat = torus(rows, cols)
        if lat.n_spins != n:
            raise ConfigError(
                f"torus{cfg.torus_shape} has {lat.n_spins} spins, expected {n}"
            )
        return lat
    lat = from_edge_list(cfg.edge_list_path, label="edge_list")
    if lat.n_spins != n:
        raise ConfigError(
            f"edge list has {lat.n_spins} spins, expected {n}"
        )
    return lat


def _build_schedules(
    cfg: ExperimentConfig, lat: SpinLattice, j_crosstalk: float
) -> tuple[ProtocolSchedule, ProtocolSchedule]:
    """Return (executed schedule, cooperative source schedule)."""
    params = cfg.preset_params()
    kwargs = {
        "tau": cfg.tau if cfg.tau is not None else params["tau"],
        "h": cfg.h if cfg.h is not None else params["h"],
        "J": cfg.J if cfg.J is not None else params["J"],
        "eta": cfg.eta,
        "phase_factor": (
            cfg.phase_factor if cfg.phase_factor is not None
            else params["phase_factor"]
        ),
        "j_crosstalk": j_crosstalk,
    }
    if cfg.table_path is not None:
        kwargs["table"] = EnergyTable.from_csv(cfg.table_path)
    cp = ProtocolSchedule(mode="cooperative", **kwargs)
    if cfg.mode == "cooperative":
        return cp, cp
    if cfg.equalize:
        lp = equalize_local(
            cp, connectivity_ratio(lat), scheme=cfg.equalization_scheme
        )
        return replace(lp, j_crosstalk=j_crosstalk), cp
    return replace(cp, mode="local", J=0.0), cp


def audit_equalization(
    cp: ProtocolSchedule, lat: SpinLattice, n_samples: int = _AUDIT_SAMPLES
) -> float:
    """Largest relative HS-norm mismatch between the protocols over a cycle.

    Compares the normalized Hilbert-Schmidt norm of the cooperative
    Hamiltonian against the local one carrying the instantaneous equalized
    field, at n_samples times. The identity is exact in the algebra, so
    any deviation is floating-point round-off.
    """
    n = lat.n_spins
    ratio = connectivity_ratio(lat)
    lp = equalize_local(cp, ratio, scheme="pointwise")
    worst = 0.0
    for t in np.linspace(0.0, cp.tau, n_samples):
        bx_c, bz_c, jc = coefficients(t, cp)
        bx_l, bz_l, _ = coefficients(t, lp)
        norm_c = hs_norm_closed_form(bx_c, bz_c, jc, n, lat.n_couplings)
        norm_l = hs_norm_closed_form(bx_l, bz_l, 0.0, n, 0)
        scale = max(norm_c, norm_l, 1e-30)
        worst = max(worst, abs(norm_c - norm_l) / scale)
    return worst


@functools.lru_cache(maxsize=64)
def _single_spin_mu(sched: ProtocolSchedule, dt: float) -> float:
    # schedules are frozen and hashable; N-sweeps over rings of equal
    # connectivity ratio share one single-spin evolution
    traj = evolve_unitary(ground_state(1), sched, SpinLattice(1, ()), dt)
    return magnetization(traj[-1][1])


def _product_fast_path(
    sched: ProtocolSchedule, n: int, dt: float
) -> tuple[float, float, MagnetizationDistribution]:
    """Local uncoupled dynamics factorize: evolve one spin, then combine.

    N independent spins each with up-probability q give mu = 2q - 1,
    per-spin variance (1 - mu_1^2)/N, and a binomial S_z distribution.
    """
    mu1 = _single_spin_mu(sched, dt)
    q = (mu1 + 1.0) / 2.0
    support = np.arange(-n, n + 1, 2, dtype=float)
    k = np.arange(n + 1)
    log_pmf = (
        [math.lgamma(n + 1) - math.lgamma(i + 1) - math.lgamma(n - i + 1)
         for i in k]
    )
    with np.errstate(divide="ignore"):
        log_q = np.log(q) if q > 0 else -np.inf
        log_1q = np.log1p(-q) if q < 1 else -np.inf
    probs = np.exp(np.array(log_pmf) + k * log_q + (n - k) * log_1q)
    probs = np.maximum(probs, 0.0)
    probs /= probs.sum()
    dist = MagnetizationDistribution(support, probs)
    sigma = math.sqrt(max(1.0 - mu1 * mu1, 0.0) / n)
    return mu1, sigma, dist


def run_single(
    cfg: ExperimentConfig,
    n: int | None = None,
    gamma: float | None = None,
    j_crosstalk: float | None = None,
) -> RunResult:
    """Execute one charging cycle and assemble its result row.

    n, gamma, and j_crosstalk override the config scalars (used by sweeps).
    Deterministic for a fixed (config, seed) apart from wall_time.
    """
    t_start = time.perf_counter()
    n = int(n if n is not None else cfg.n_spins)
    gamma = float(gamma if gamma is not None else cfg.gamma)
    j_ct = float(j_crosstalk if j_crosstalk is not None else cfg.j_crosstalk)
    lat = _build_lattice(cfg, n)
    sched, cp = _build_schedules(cfg, lat, j_ct)
    dt = cfg.effective_dt()

    audit = 0.0
    if cfg.mode == "local" and cfg.equalize:
        audit = audit_equalization(cp, lat)
        if audit > _AUDIT_TOL:
            raise SpinChargeError(
                f"resource-equalization audit failed: {audit} > {_AUDIT_TOL}"
            )

    if gamma > 0.0:
        traj = evolve_lindblad(
            ground_state(n).density(), sched, lat, gamma=gamma, dt=dt,
            crosstalk_all_pairs=cfg.crosstalk_all_pairs,
        )
        state = traj[-1][1]
        mu, sigma, dist = magnetization(state), fluctuation(state), distribution(state)
    elif cfg.mode == "local" and j_ct == 0.0:
        mu, sigma, dist = _product_fast_path(sched, n, dt)
    else:
        traj = evolve_unitary(
            ground_state(n), sched, lat, dt,
            crosstalk_all_pairs=cfg.crosstalk_all_pairs,
        )
        state = traj[-1][1]
        mu, sigma, dist = magnetization(state), fluctuation(state), distribution(state)

    shots = sample_shots(dist, cfg.nu, cfg.seed)
    mu_bar, sigma_bar = sample_stats(shots)
    params = cfg.preset_params()
    b1 = sched.table.b_of_s(1.0) * cfg.eta
    energy_j, power_w = stored_power(mu, n, b1, params["tau_seconds"])

    return RunResult(
        preset=cfg.preset,
        mode=cfg.mode,
        n_spins=n,
        n_couplings=lat.n_couplings,
        tau=sched.tau,
        dt=dt,
        gamma=gamma,
        j_crosstalk=j_ct,
        h_used=sched.h,
        j_used=sched.J,
        mu_exact=mu,
        sigma_exact=sigma,
        mu_bar=mu_bar,
        sigma_bar=sigma_bar,
        nu=cfg.nu,
        seed=cfg.seed,
        energy_j=energy_j,
        power_w=power_w,
        audit_max_dev=audit,
        wall_time=time.perf_counter() - t_start,
    )


def _sweep_points(cfg: ExperimentConfig) -> list[tuple[int, float, float]]:
    ns = cfg.sweep_n or (cfg.n_spins,)
    gammas = cfg.sweep_gamma or (cfg.gamma,)
    jcts = cfg.sweep_j_crosstalk or (cfg.j_crosstalk,)
    return [(n, g, j) for n in ns for g in gammas for j in jcts]


def _run_point(args):
    cfg, point = args
    n, g, j = point
    return point, run_single(cfg, n=n, gamma=g, j_crosstalk=j)


def fit_from_results(
    results, use_sampled: bool = False
) -> list[tuple[float, float, ScalingFit]]:
    """Fit 1/sigma^2 = c * N^alpha within each (gamma, j_crosstalk) group.

    Groups with fewer than 3 distinct N are skipped. Fits use the exact
    quantum sigma unless use_sampled is set.
    """
    groups: dict[tuple[float, float], list[RunResult]] = {}
    for r in results:
        groups.setdefault((r.gamma, r.j_crosstalk), []).append(r)
    fits = []
    for key in sorted(groups):
        rows = sorted(groups[key], key=lambda r: r.n_spins)
        points = [
            (r.n_spins, r.sigma_bar if use_sampled else r.sigma_exact)
            for r in rows
        ]
        if len({p[0] for p in points}) < 3:
            continue
        fits.append((key[0], key[1], fit_scaling(points)))
    return fits


def run_sweep(
    cfg: ExperimentConfig, workers: int = 1, use_sampled: bool = False
) -> SweepOutcome:
    """Run every sweep point, tolerating per-point failures.

    Points run on a process pool when workers > 1. Output rows are sorted
    by (N, gamma, j_crosstalk) regardless of completion order.
    """
    points = _sweep_points(cfg)
    if not points:
        raise ConfigError("sweep has no points")
    results: list[RunResult] = []
    failures: list[tuple[tuple, str]] = []

    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_run_point, (cfg, point)): point for point in points
            }
            for future in concurrent.futures.as_completed(futures):
                point = futures[future]
                try:
                    results.append(future.result()[1])
                except Exception as err:  # isolation: record and continue
                    failures.append((point, f"{type(err).__name__}: {err}"))
    else:
        for point in points:
            try:
                results.append(_run_point((cfg, point))[1])
            except Exception as err:
                failures.append((point, f"{type(err).__name__}: {err}"))

    results.sort(key=lambda r: (r.n_spins, r.gamma, r.j_crosstalk))
    fits = fit_from_results(results, use_sampled=use_sampled)
    return SweepOutcome(
        results=tuple(results),
        fits=tuple(fits),
        failures=tuple(sorted(failures)),
    )


def results_to_csv(results) -> str:
    """Render result rows in the documented column order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in results:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def results_from_csv(source) -> list[dict]:
    """Parse a results CSV back into typed row dictionaries."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = str(source)
        if "\n" not in text:
            with open(text, "r", encoding="utf-8") as fh:
                text = fh.read()
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
        raise ConfigError(
            f"results CSV must have columns {','.join(CSV_COLUMNS)}"
        )
    rows = []
    for raw in reader:
        row = dict(raw)
        for key in ("N", "n_C", "nu", "seed"):
            row[key] = int(row[key])
        for key in ("tau", "dt", "gamma", "j_crosstalk", "h_used", "J_used",
                    "mu_exact", "sigma_exact", "mu_bar", "sigma_bar",
                    "energy_J", "power_W"):
            row[key] = float(row[key])
        rows.append(row)
    return rows


def _plot_csv(results) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PLOT_COLUMNS)
    for r in results:
        writer.writerow([
            r.n_spins, repr(r.mu_bar), repr(r.sigma_bar),
            repr(1.0 / r.sigma_bar**2) if r.sigma_bar > 0 else "",
            repr(r.mu_exact), repr(r.sigma_exact),
            repr(1.0 / r.sigma_exact**2) if r.sigma_exact > 0 else "",
        ])
    return buf.getvalue()


def emit_report(outcome: SweepOutcome, out_dir) -> dict[str, str]:
    """Write results.csv, plot.csv, and fit JSON files under out_dir.

    Returns a map from logical name to the written path. A fit file is
    only written when at least one group had enough points to fit.
    """
    import os

    if not outcome.results:
        raise ConfigError("nothing to report: sweep produced no results")
    os.makedirs(out_dir, exist_ok=True)
    written = {}

    path = os.path.join(out_dir, "results.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(results_to_csv(outcome.results))
    written["results"] = path

    path = os.path.join(out_dir, "plot.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_plot_csv(outcome.results))
    written["plot"] = path

    if outcome.fits:
        payload = [
            {"gamma": g, "j_crosstalk": j, **json.loads(fit.to_json())}
            for g, j, fit in outcome.fits
        ]
        path = os.path.join(out_dir, "fit.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        written["fit"] = path

    if outcome.failures:
        path = os.path.join(out_dir, "failures.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(
                [{"point": list(p), "error": e} for p, e in outcome.failures],
                fh, indent=2,
            )
            fh.write("\n")
        written["failures"] = path
    return written


def calibrate_tau(
    cfg: ExperimentConfig,
    n_ref: int = 4,
    threshold: float = 1.05,
    tau_start: float = 10.0,
    factor: float = 2.0,
    max_doublings: int = 10,
) -> float:
    """Grow tau until the cooperative run reaches Heisenberg-like precision.

    Starting from tau_start, multiply tau by factor until the fluctuation
    product N * sigma at N = n_ref drops to the threshold. The final
    magnetization cannot exceed 1 - 1/N for this protocol, so the
    convergence criterion is the fluctuation product rather than mu
    itself. Returns the first passing tau.
    """
    if cfg.mode != "cooperative":
        raise ConfigError("tau calibration applies to the cooperative protocol")
    tau = tau_start
    for _ in range(max_doublings + 1):
        result = run_single(replace(cfg, tau=tau), n=n_ref)
        if n_ref * result.sigma_exact <= threshold:
            return tau
        tau *= factor
    raise SpinChargeError(
        f"calibration did not converge below N*sigma = {threshold} "
        f"within {max_doublings} doublings from tau = {tau_start}"
    )
