"""State propagation: exact unitary evolution and Lindblad dynamics.

Unitary steps apply exp(-i * phase * H(t + dt/2) * dt) to the state with a
scaled Taylor action of the matrix exponential, never forming the dense
exponential. Open dynamics integrate the Lindblad master equation with
single-site sigma^x jump operators using a fixed-step 4th-order scheme.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, IntegratorError, ScheduleError
from .lattice import SpinLattice
from .operators import N_CAP, HamiltonianTerms
from .schedule import ProtocolSchedule

__all__ = [
    "PureState",
    "DensityState",
    "LINDBLAD_N_CAP",
    "ground_state",
    "evolve_unitary",
    "evolve_lindblad",
    "expm_apply",
]

# density-matrix cost grows as 2^(2N)
LINDBLAD_N_CAP = 6

_NORM_TOL = 1e-9
_NORM_FAIL = 1e-6
_TRACE_TOL = 1e-9
_POSITIVITY_TOL = 1e-6


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over the 2^N computational basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amp)
        dim = amp.shape[0]
        if amp.ndim != 1 or dim & (dim - 1) != 0:
            raise ValueError("amplitudes must be a length-2^N vector")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {_NORM_TOL}")

    @property
    def n_spins(self) -> int:
        return self.amplitudes.shape[0].bit_length() - 1

    def density(self) -> "DensityState":
        return DensityState(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityState:
    """Density matrix with trace, hermiticity, and positivity checks."""

    matrix: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", rho)
        dim = rho.shape[0]
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or dim & (dim - 1) != 0:
            raise ValueError("matrix must be square with 2^N rows")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > _TRACE_TOL:
            raise ValueError(f"trace {tr} deviates from 1 beyond {_TRACE_TOL}")
        if np.max(np.abs(rho - rho.conj().T)) > _NORM_TOL:
            raise ValueError("matrix is not Hermitian within tolerance")
        min_eig = float(np.linalg.eigvalsh(rho)[0])
        if min_eig < -_POSITIVITY_TOL:
            raise ValueError(f"minimum eigenvalue {min_eig} below positivity tolerance")

    @property
    def n_spins(self) -> int:
        return self.matrix.shape[0].bit_length() - 1


def ground_state(n: int) -> PureState:
    """All-|0> product state, the ground state of the internal Hamiltonian."""
    if n < 1:
        raise CapacityError(f"need at least one spin, got {n}")
    amp = np.zeros(2**n, dtype=complex)
    amp[0] = 1.0
    return PureState(amp)


def expm_apply(apply_h, psi: np.ndarray, z: complex, norm_bound: float,
               tol: float = 1e-14, max_terms: int = 60) -> np.ndarray:
    """Compute exp(z * H) @ psi by a scaled Taylor series.

    apply_h(v) must return H @ v. norm_bound is any upper bound on a
    matrix norm of H, used only to pick the number of substeps.
    """
    n_sub = max(1, int(math.ceil(abs(z) * norm_bound / 2.0)))
    zs = z / n_sub
    out = psi
    for _ in range(n_sub):
        term = out
        acc = out.copy()
        for k in range(1, max_terms + 1):
            term = (zs / k) * apply_h(term)
            acc += term
            if np.linalg.norm(term) <= tol * np.linalg.norm(acc):
                break
        else:
            raise IntegratorError("Taylor series for the exponential did not converge")
        out = acc
    return out


def _n_steps(tau: float, dt: float) -> int:
    if dt <= 0:
        raise ScheduleError(f"dt must be positive, got {dt}")
    n = round(tau / dt)
    if n < 1 or abs(n * dt - tau) > 1e-9 * tau:
        raise ScheduleError(f"dt = {dt} does not divide tau = {tau}")
    return n


def evolve_unitary(
    psi: PureState,
    sched: ProtocolSchedule,
    lat: SpinLattice,
    dt: float,
    sampling: str = "midpoint",
    store_every: int | None = None,
    crosstalk_all_pairs: bool = False,
) -> list[tuple[float, PureState]]:
    """Propagate a pure state through one charging cycle.

    Each step applies exp(-i * phase * H(t*) * dt), with t* at the step
    midpoint by default (sampling='left' uses the left endpoint). Returns
    (t, state) pairs; store_every=None keeps only t=0 and t=tau.
    """
    if lat.n_spins > N_CAP:
        raise CapacityError(f"N = {lat.n_spins} exceeds the unitary cap {N_CAP}")
    if sampling not in ("midpoint", "left"):
        raise ValueError(f"sampling must be midpoint|left, got {sampling!r}")
    n_steps = _n_steps(sched.tau, dt)
    terms = HamiltonianTerms(lat, sched, crosstalk_all_pairs=crosstalk_all_pairs)
    z = -1j * sched.phase_factor * dt

    vec = psi.amplitudes.copy()
    out = [(0.0, psi)]
    for k in range(n_steps):
        t_k = k * dt
        t_star = t_k + dt / 2.0 if sampling == "midpoint" else t_k
        bound = terms.one_norm_bound(t_star)
        vec = expm_apply(lambda v: terms.apply(t_star, v), vec, z, bound)
        drift = abs(np.linalg.norm(vec) - 1.0)
        if drift > _NORM_FAIL:
            raise IntegratorError(
                f"norm drift {drift} at step {k + 1} exceeds {_NORM_FAIL}"
            )
        t_next = (k + 1) * dt
        if store_every and (k + 1) % store_every == 0 and k + 1 < n_steps:
            out.append((t_next, PureState(vec.copy())))
    out.append((sched.tau, PureState(vec)))
    return out


def _lindblad_rhs(terms: HamiltonianTerms, perms: list[np.ndarray],
                  gamma: float, phase: float, t: float,
                  rho: np.ndarray) -> np.ndarray:
    h = terms.dense(t)
    out = -1j * phase * (h @ rho - rho @ h)
    if gamma > 0.0:
        # L_k = sigma_k^x permutes basis indices; L_k^dag L_k = identity
        diss = -len(perms) * rho
        for perm in perms:
            diss = diss + rho[np.ix_(perm, perm)]
        out = out + gamma * diss
    return out


def evolve_lindblad(
    rho: DensityState,
    sched: ProtocolSchedule,
    lat: SpinLattice,
    gamma: float,
    dt: float,
    store_every: int | None = None,
    crosstalk_all_pairs: bool = False,
) -> list[tuple[float, DensityState]]:
    """Integrate the Lindblad master equation with local sigma^x jumps.

    drho/dt = -i * phase * [H(t), rho]
            + gamma * sum_k (L_k rho L_k - (1/2){L_k^dag L_k, rho})

    with L_k the sigma^x operator on spin k. Fixed-step RK4; the state is
    re-symmetrized after each step. gamma = 0 recovers unitary dynamics.
    """
    n = lat.n_spins
    if n > LINDBLAD_N_CAP:
        raise CapacityError(f"N = {n} exceeds the Lindblad cap {LINDBLAD_N_CAP}")
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    n_steps = _n_steps(sched.tau, dt)
    terms = HamiltonianTerms(lat, sched, crosstalk_all_pairs=crosstalk_all_pairs)
    idx = np.arange(2**n)
    perms = [idx ^ (1 << k) for k in range(n)]
    phase = sched.phase_factor

    def rhs(t, r):
        return _lindblad_rhs(terms, perms, gamma, phase, t, r)

    mat = rho.matrix.copy()
    out = [(0.0, rho)]
    for k in range(n_steps):
        t_k = k * dt
        k1 = rhs(t_k, mat)
        k2 = rhs(t_k + dt / 2.0, mat + dt / 2.0 * k1)
        k3 = rhs(t_k + dt / 2.0, mat + dt / 2.0 * k2)
        k4 = rhs(t_k + dt, mat + dt * k3)
        mat = mat + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        mat = (mat + mat.conj().T) / 2.0
        drift = abs(np.trace(mat).real - 1.0)
        if drift > _TRACE_TOL:
            raise IntegratorError(
                f"trace drift {drift} at step {k + 1} exceeds {_TRACE_TOL}"
            )
        t_next = (k + 1) * dt
        if store_every and (k + 1) % store_every == 0 and k + 1 < n_steps:
            out.append((t_next, DensityState(mat.copy())))
    min_eig = float(np.linalg.eigvalsh(mat)[0])
    if min_eig < -_POSITIVITY_TOL:
        raise IntegratorError(
            f"final state minimum eigenvalue {min_eig} violates positivity"
        )
    out.append((sched.tau, DensityState(mat)))
    return out
