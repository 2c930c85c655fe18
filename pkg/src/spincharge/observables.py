"""Magnetization, fluctuations, shot statistics, and stored energy/power.

The per-spin magnetization is mu = <S_z>/N in [-1, 1]; its quantum
fluctuation is sigma = sqrt((<S_z^2> - <S_z>^2) / N^2). Shot sampling
draws from the exact magnetization distribution with a seeded PCG64
generator so records are bit-reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.constants

from .operators import sz_diagonal
from .propagate import DensityState, PureState

__all__ = [
    "MagnetizationDistribution",
    "ShotRecord",
    "GENERATOR_NAME",
    "magnetization",
    "fluctuation",
    "distribution",
    "sample_shots",
    "sample_stats",
    "stored_power",
]

GENERATOR_NAME = "PCG64"


@dataclass(frozen=True)
class MagnetizationDistribution:
    """Probabilities over the S_z eigenvalues {-N, -N+2, ..., N}."""

    support: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        support = np.asarray(self.support, dtype=float)
        probs = np.asarray(self.probabilities, dtype=float)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probabilities", probs)
        if support.shape != probs.shape:
            raise ValueError("support and probabilities must match in length")
        if np.any(np.diff(support) != 2.0):
            raise ValueError("support must increase in steps of 2")
        if np.any(probs < 0):
            raise ValueError("probabilities must be non-negative")
        if abs(probs.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {probs.sum()}, not 1")

    @property
    def n_spins(self) -> int:
        return int(self.support[-1])

    def mean(self) -> float:
        """Mean per-spin magnetization."""
        return float(np.dot(self.support, self.probabilities)) / self.n_spins

    def variance(self) -> float:
        """Per-spin magnetization variance."""
        m1 = np.dot(self.support, self.probabilities)
        m2 = np.dot(self.support**2, self.probabilities)
        return max(float(m2 - m1 * m1), 0.0) / self.n_spins**2


@dataclass(frozen=True)
class ShotRecord:
    """nu simulated magnetization measurements plus their provenance."""

    nu: int
    samples: np.ndarray
    seed: int
    generator: str = GENERATOR_NAME

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if samples.shape != (self.nu,):
            raise ValueError(f"expected {self.nu} samples, got {samples.shape}")

    def to_csv(self) -> str:
        lines = [f"# seed={self.seed} nu={self.nu} generator={self.generator}", "mu"]
        lines.extend(repr(x) for x in self.samples)
        return "\n".join(lines) + "\n"


def _pure_probabilities(state: PureState) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def _basis_weights(state) -> tuple[int, np.ndarray]:
    if isinstance(state, PureState):
        return state.n_spins, _pure_probabilities(state)
    if isinstance(state, DensityState):
        return state.n_spins, np.real(np.diag(state.matrix))
    raise TypeError(f"expected PureState or DensityState, got {type(state)!r}")


def magnetization(state) -> float:
    """mu = <S_z>/N = Tr[rho S_z]/N."""
    n, weights = _basis_weights(state)
    return float(np.dot(sz_diagonal(n), weights)) / n


def fluctuation(state) -> float:
    """sigma = sqrt((<S_z^2> - <S_z>^2)/N^2), clamped at 0 for round-off."""
    n, weights = _basis_weights(state)
    sz = sz_diagonal(n)
    m1 = float(np.dot(sz, weights))
    m2 = float(np.dot(sz * sz, weights))
    return float(np.sqrt(max(m2 - m1 * m1, 0.0))) / n


def distribution(state) -> MagnetizationDistribution:
    """Exact probability of each S_z outcome in the given state."""
    n, weights = _basis_weights(state)
    sz = sz_diagonal(n)
    support = np.arange(-n, n + 1, 2, dtype=float)
    probs = np.zeros(support.shape)
    for i, m in enumerate(support):
        probs[i] = weights[sz == m].sum()
    probs = np.maximum(probs, 0.0)
    probs /= probs.sum()
    return MagnetizationDistribution(support, probs)


def sample_shots(dist: MagnetizationDistribution, nu: int, seed: int) -> ShotRecord:
    """Draw nu independent magnetization measurements, deterministically."""
    if nu < 1:
        raise ValueError(f"nu must be >= 1, got {nu}")
    rng = np.random.default_rng(seed)
    values = dist.support / dist.n_spins
    samples = rng.choice(values, size=nu, p=dist.probabilities)
    return ShotRecord(nu=nu, samples=samples, seed=seed)


def sample_stats(rec: ShotRecord) -> tuple[float, float]:
    """Sample mean and Bessel-corrected standard deviation of the shots."""
    if rec.nu < 2:
        raise ValueError("standard deviation undefined for fewer than 2 shots")
    mu_bar = float(np.mean(rec.samples))
    sigma_bar = float(np.std(rec.samples, ddof=1))
    return mu_bar, sigma_bar


def sample_variance(rec: ShotRecord) -> float:
    """Bessel-corrected sample variance (the square of sample_stats[1])."""
    if rec.nu < 2:
        raise ValueError("variance undefined for fewer than 2 shots")
    return float(np.var(rec.samples, ddof=1))


def stored_power(mu_final: float, n: int, b1_ghz: float,
                 tau_seconds: float) -> tuple[float, float]:
    """Stored energy (J) and charging power (W) of the battery.

    The empty battery holds E_0 = -(B(1)/2) N; after charging, the energy
    is E_tau = (1 - f) E_0 with f = (mu + 1)/2 the fraction of flipped
    spins. Returns (E_tau - E_0, (E_tau - E_0)/tau) with B(1) converted
    from GHz to joules via Planck's constant.
    """
    if not -1.0 <= mu_final <= 1.0:
        raise ValueError(f"magnetization {mu_final} outside [-1, 1]")
    if tau_seconds <= 0:
        raise ValueError(f"tau must be positive, got {tau_seconds}")
    b1_joule = b1_ghz * 1e9 * scipy.constants.h
    e_0 = -(b1_joule / 2.0) * n
    f = (mu_final + 1.0) / 2.0
    e_tau = (1.0 - f) * e_0
    energy = e_tau - e_0
    return energy, energy / tau_seconds
