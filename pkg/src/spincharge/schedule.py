"""Piecewise annealing schedules and their Hamiltonian coefficients.

One charging cycle of duration tau is controlled by two piecewise-linear
functions s(t) and g(t) plus an energy table (A(s), B(s)) in GHz. The
instantaneous Hamiltonian coefficients are

    Bx = -A(s)/2,   Bz = g(t) * h * B(s)/2,   Jc = J * B(s)/2.

The cycle is symmetric: s(0) = s(tau) = 1 and g(0) = g(tau) = 0, so the
longitudinal field vanishes at both ends.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InterpolationError, ScheduleError

__all__ = [
    "EnergyTable",
    "ProtocolSchedule",
    "Equalization",
    "s_of_t",
    "g_of_t",
    "coefficients",
    "equalized_local_field",
    "equalize_local",
    "PRESETS",
    "schedule_from_preset",
]

TWO_PI = 2.0 * math.pi

# default surrogate energy-table anchors, GHz
A_MAX_DEFAULT = 11.0
B_MAX_DEFAULT = 7.57

# slack for t at the interval ends, relative to tau
_T_SLACK = 1e-9


@dataclass(frozen=True)
class EnergyTable:
    """Sampled annealer energy factors A(s), B(s) with linear interpolation.

    s must be strictly increasing and cover the endpoints 0 and 1; A and B
    are non-negative everywhere.
    """

    s: tuple[float, ...]
    A: tuple[float, ...]
    B: tuple[float, ...]

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        a = np.asarray(self.A, dtype=float)
        b = np.asarray(self.B, dtype=float)
        if not (len(s) == len(a) == len(b)) or len(s) < 2:
            raise InterpolationError("table needs matching s, A, B columns (>= 2 rows)")
        if np.any(np.diff(s) <= 0):
            raise InterpolationError("s samples must be strictly increasing")
        if s[0] != 0.0 or s[-1] != 1.0:
            raise InterpolationError("s samples must cover [0, 1] endpoints")
        if np.any(a < 0) or np.any(b < 0):
            raise InterpolationError("A and B must be non-negative")

    def a_of_s(self, s: float) -> float:
        self._check(s)
        return float(np.interp(s, self.s, self.A))

    def b_of_s(self, s: float) -> float:
        self._check(s)
        return float(np.interp(s, self.s, self.B))

    def _check(self, s: float):
        if not (0.0 - 1e-12 <= s <= 1.0 + 1e-12):
            raise InterpolationError(f"s = {s} outside [0, 1]")

    @classmethod
    def surrogate(cls, a_max: float = A_MAX_DEFAULT, b_max: float = B_MAX_DEFAULT):
        """Piecewise-linear stand-in for the annealer's published tables.

        A(s) = a_max * max(0, 1 - 2s): the transverse field is fully off
        for s > 0.5. B(s) = b_max * s, anchored so B(1) = 7.57 GHz by
        default. The s = 0.5 breakpoint is an explicit sample so linear
        interpolation reproduces both branches exactly.
        """
        return cls(s=(0.0, 0.5, 1.0), A=(a_max, 0.0, 0.0), B=(0.0, b_max / 2, b_max))

    @classmethod
    def from_csv(cls, source) -> "EnergyTable":
        """Load a table from CSV text or a file path; header must be s,A,B."""
        if hasattr(source, "read"):
            text = source.read()
        else:
            try:
                with open(source, "r", encoding="utf-8") as fh:
                    text = fh.read()
            except OSError:
                text = str(source)
        reader = csv.reader(io.StringIO(text))
        rows = [row for row in reader if row and any(cell.strip() for cell in row)]
        if not rows or [c.strip() for c in rows[0]] != ["s", "A", "B"]:
            raise InterpolationError("energy-table CSV must start with header 's,A,B'")
        s_vals, a_vals, b_vals = [], [], []
        for row in rows[1:]:
            if len(row) != 3:
                raise InterpolationError(f"bad table row {row!r}")
            try:
                s_vals.append(float(row[0]))
                a_vals.append(float(row[1]))
                b_vals.append(float(row[2]))
            except ValueError:
                raise InterpolationError(f"non-numeric table row {row!r}") from None
        return cls(tuple(s_vals), tuple(a_vals), tuple(b_vals))

    def to_csv(self) -> str:
        lines = ["s,A,B"]
        lines += [f"{s},{a},{b}" for s, a, b in zip(self.s, self.A, self.B)]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Equalization:
    """Record of a local field equalized against a cooperative protocol.

    h_source and j_source are the cooperative (h, J); ratio is n_C / N of
    the lattice the cooperative protocol runs on. scheme 'scalar' bakes a
    constant h_L using the slope parameter g_scalar; scheme 'pointwise'
    tracks the instantaneous g(t), which makes the Hilbert-Schmidt norms
    of the two protocols agree at every time.
    """

    h_source: float
    j_source: float
    ratio: float
    scheme: str = "scalar"
    g_scalar: float = 1.0

    def __post_init__(self):
        if self.scheme not in ("scalar", "pointwise"):
            raise ScheduleError(f"unknown equalization scheme {self.scheme!r}")
        if self.ratio < 0:
            raise ScheduleError("connectivity ratio must be >= 0")


@dataclass(frozen=True)
class ProtocolSchedule:
    """Control parameters for one charging cycle."""

    tau: float
    h: float
    J: float
    j_crosstalk: float = 0.0
    eta: float = 1.0
    mode: str = "cooperative"
    table: EnergyTable = field(default_factory=EnergyTable.surrogate)
    phase_factor: float = TWO_PI
    equalization: Equalization | None = None

    def __post_init__(self):
        if self.tau <= 0:
            raise ScheduleError(f"tau must be positive, got {self.tau}")
        if self.eta <= 0:
            raise ScheduleError(f"eta must be positive, got {self.eta}")
        if self.mode not in ("local", "cooperative"):
            raise ScheduleError(f"mode must be local|cooperative, got {self.mode!r}")
        if self.mode == "local" and self.J != 0.0:
            raise ScheduleError("local mode requires J = 0")


def _check_t(t: float, tau: float) -> float:
    if tau <= 0:
        raise ScheduleError(f"tau must be positive, got {tau}")
    if not (-_T_SLACK * tau <= t <= tau * (1 + _T_SLACK)):
        raise ScheduleError(f"t = {t} outside [0, {tau}]")
    return min(max(t, 0.0), tau)


def s_of_t(t: float, tau: float) -> float:
    """Annealer schedule fraction: 1 -> 0.35, hold, 0.35 -> 1."""
    t = _check_t(t, tau)
    x = t / tau
    if x <= 1.0 / 3.0:
        return 1.0 - 1.95 * x
    if x <= 2.0 / 3.0:
        return 0.35
    return -0.95 + 1.95 * x


def g_of_t(t: float, tau: float) -> float:
    """Longitudinal-field ramp: off, linear ramp up, linear ramp down."""
    t = _check_t(t, tau)
    x = t / tau
    if x <= 1.0 / 3.0:
        return 0.0
    if x <= 2.0 / 3.0:
        return -1.0 + 3.0 * x
    return 3.0 - 3.0 * x


def coefficients(t: float, sched: ProtocolSchedule) -> tuple[float, float, float]:
    """Instantaneous (Bx, Bz, Jc) in GHz for the schedule at time t."""
    s = s_of_t(t, sched.tau)
    g = g_of_t(t, sched.tau)
    a = sched.table.a_of_s(s)
    b = sched.table.b_of_s(s)
    bx = -a / 2.0
    eq = sched.equalization
    if eq is not None and eq.scheme == "pointwise":
        # g(t) * h_L(g(t)) written in the form that stays finite at g = 0
        sign = -1.0 if eq.h_source < 0 else 1.0
        bz = sign * (b / 2.0) * math.sqrt(
            g * g * eq.h_source**2 + eq.ratio * eq.j_source**2
        )
    else:
        bz = g * sched.h * b / 2.0
    jc = sched.J * b / 2.0
    return bx, bz, jc


def crosstalk_bias(t: float, sched: ProtocolSchedule) -> float:
    """Uniform coupling bias J_CT * B(s(t))/2 applied on the edge set."""
    s = s_of_t(t, sched.tau)
    return sched.j_crosstalk * sched.table.b_of_s(s) / 2.0


def equalized_local_field(h_c: float, j: float, ratio: float, g: float) -> float:
    """Local field h_L whose protocol matches the cooperative HS norm.

    h_L = sqrt(h_C^2 + (n_C/N) * J^2 / g^2), with g the slope parameter of
    the longitudinal ramp (g = 1 approximates the ramp at its peak).
    """
    if g == 0:
        raise ScheduleError("equalization slope parameter g must be nonzero")
    if ratio < 0:
        raise ScheduleError("connectivity ratio must be >= 0")
    return math.sqrt(h_c * h_c + ratio * j * j / (g * g))


def equalize_local(
    cp: ProtocolSchedule,
    ratio: float,
    scheme: str = "scalar",
    g_scalar: float = 1.0,
) -> ProtocolSchedule:
    """Derive the resource-equalized local protocol from a cooperative one.

    The returned schedule has J = 0 and a local field carrying the sign of
    the cooperative h, sized so the energy cost matches the cooperative
    protocol (exactly in the 'pointwise' scheme, at the ramp peak in the
    'scalar' scheme).
    """
    if cp.mode != "cooperative":
        raise ScheduleError("can only equalize against a cooperative schedule")
    h_l = equalized_local_field(cp.h, cp.J, ratio, g_scalar)
    sign = -1.0 if cp.h < 0 else 1.0
    eq = Equalization(
        h_source=cp.h, j_source=cp.J, ratio=ratio, scheme=scheme, g_scalar=g_scalar
    )
    return replace(cp, mode="local", J=0.0, h=sign * h_l, equalization=eq)


# Named parameter presets. 'dwave' follows the hardware runs (times in ns,
# energies in GHz, so the phase per unit time is 2*pi*E). 'numerics' is the
# dimensionless set used for the exact-propagation studies; its tau is the
# calibrated cycle duration (see propagate.calibrate_tau).
PRESETS: dict[str, dict] = {
    "dwave": {
        "tau": 60_000.0,  # 60 us in ns
        "h": 0.5,
        "J": 0.2,
        "phase_factor": TWO_PI,
        "dt": 0.01,
        "tau_seconds": 60e-6,
    },
    "numerics": {
        "tau": 1250.0,  # calibrated; see harness.calibrate_tau
        "h": -0.5,
        "J": -0.2,
        "phase_factor": 1.0,
        "dt": 0.01,
        "tau_seconds": 60e-6,
    },
}


def schedule_from_preset(
    name: str, mode: str = "cooperative", **overrides
) -> ProtocolSchedule:
    """Build a ProtocolSchedule from a named preset with optional overrides."""
    if name not in PRESETS:
        raise ScheduleError(f"unknown preset {name!r}; known: {sorted(PRESETS)}")
    params = dict(PRESETS[name])
    params.pop("dt", None)
    params.pop("tau_seconds", None)
    params.update(overrides)
    if mode == "local":
        params["J"] = 0.0
    return ProtocolSchedule(mode=mode, **params)
