"""Closed-form fluctuation models and the precision scaling fit.

A local (product-state) protocol has per-spin magnetization variance
sigma^2 = (1/N)[1 - (1-p)^2 cos^2(2 theta)], hence standard-quantum-limit
scaling sigma ~ 1/sqrt(N). A depolarized-GHZ cooperative state instead
gives sigma^2 = P/N + (1-P)[1 - (1-P) cos^2(2 Theta)], which reaches the
Heisenberg limit sigma ~ 1/N for Theta ~ 1/N and P ~ 1/N^2. Precision
curves 1/sigma^2 versus N are fitted to c * N^alpha.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InsufficientDataError

__all__ = [
    "LocalModelParams",
    "CooperativeModelParams",
    "ScalingFit",
    "local_model",
    "cooperative_model",
    "heisenberg_limit_check",
    "bhatia_davis_bound",
    "fit_scaling",
]


@dataclass(frozen=True)
class LocalModelParams:
    """Per-spin depolarization p, rotation theta, dephasing delta."""

    p: float
    theta: float
    delta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p = {self.p} outside [0, 1]")
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError(f"theta = {self.theta} outside [0, pi/2]")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta = {self.delta} outside [0, 1]")


@dataclass(frozen=True)
class CooperativeModelParams:
    """Global depolarization P and global rotation Theta."""

    P: float
    Theta: float

    def __post_init__(self):
        if not 0.0 <= self.P <= 1.0:
            raise ValueError(f"P = {self.P} outside [0, 1]")
        if not 0.0 <= self.Theta <= math.pi / 2:
            raise ValueError(f"Theta = {self.Theta} outside [0, pi/2]")


@dataclass(frozen=True)
class ScalingFit:
    """Power-law fit 1/sigma^2 = c * N^alpha with one-standard-error bars."""

    c: float
    alpha: float
    c_err: float
    alpha_err: float
    n_points: int
    method: str = "loglog_ols"

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError(f"prefactor c = {self.c} must be positive")
        if self.c_err < 0 or self.alpha_err < 0:
            raise ValueError("uncertainties must be non-negative")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def local_model(params: LocalModelParams, n: int) -> tuple[float, float]:
    """(mu, sigma^2) of N identical single-spin states.

    The dephasing delta moves only the transverse coherence and so affects
    neither output.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cos2t = math.cos(2.0 * params.theta)
    mu = (1.0 - params.p) * cos2t
    sigma_sq = (1.0 - (1.0 - params.p) ** 2 * cos2t * cos2t) / n
    return mu, sigma_sq


def cooperative_model(params: CooperativeModelParams, n: int) -> tuple[float, float]:
    """(mu, sigma^2) of a globally depolarized GHZ state."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    big_p, big_t = params.P, params.Theta
    cos2t = math.cos(2.0 * big_t)
    mu = (1.0 - big_p) * cos2t
    sigma_sq = big_p / n + (1.0 - big_p) * (1.0 - (1.0 - big_p) * cos2t * cos2t)
    return mu, sigma_sq


def local_state_matrix(params: LocalModelParams) -> np.ndarray:
    """Explicit 2x2 single-spin state of the local model.

    Basis order (|0>, |1>) with sigma^z|1> = +|1>. Used as the brute-force
    oracle against local_model.
    """
    p, theta, delta = params.p, params.theta, params.delta
    ket1 = np.array([[0.0, 0.0], [0.0, 1.0]])
    ket0 = np.array([[1.0, 0.0], [0.0, 0.0]])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    pure_part = (
        math.cos(theta) ** 2 * ket1
        + math.sin(theta) ** 2 * ket0
        + (1.0 - delta) * math.sin(theta) * math.cos(theta) * sx
    )
    return p * np.eye(2) / 2.0 + (1.0 - p) * pure_part


def ghz_state(theta: float, n: int) -> np.ndarray:
    """cos(Theta)|1...1> + sin(Theta)|0...0> as an amplitude vector."""
    amp = np.zeros(2**n, dtype=complex)
    amp[-1] = math.cos(theta)
    amp[0] = math.sin(theta)
    return amp


def depolarized_ghz_matrix(params: CooperativeModelParams, n: int) -> np.ndarray:
    """Explicit 2^N x 2^N state of the cooperative model (oracle use)."""
    amp = ghz_state(params.Theta, n)
    pure = np.outer(amp, amp.conj())
    return (1.0 - params.P) * pure + params.P * np.eye(2**n) / 2**n


def heisenberg_limit_check(a: float, b: float, n_max: int,
                           n_values=None) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate N * sigma_C(N) for Theta = a/N and P = b/N^2.

    Returns (N, N * sigma); a bounded product as N grows certifies
    Heisenberg-limit scaling. Boundedness is left to the caller's
    tolerance policy.
    """
    if a < 0 or b < 0:
        raise ValueError("scale parameters must be >= 0")
    if n_values is None:
        n_values = np.arange(2, n_max + 1)
    n_values = np.asarray(n_values, dtype=float)
    theta = a / n_values
    big_p = np.minimum(b / n_values**2, 1.0)
    cos2t = np.cos(2.0 * theta)
    sigma_sq = big_p / n_values + (1.0 - big_p) * (1.0 - (1.0 - big_p) * cos2t**2)
    return n_values, n_values * np.sqrt(np.maximum(sigma_sq, 0.0))


def bhatia_davis_bound(mu: float) -> float:
    """Variance bound (1 - mu)(1 + mu) for a mean-mu variable in [-1, 1]."""
    if not -1.0 <= mu <= 1.0:
        raise ValueError(f"magnetization {mu} outside [-1, 1]")
    return (1.0 - mu) * (1.0 + mu)


def fit_scaling(points, weights=None) -> ScalingFit:
    """Fit 1/sigma^2 = c * N^alpha by least squares in log-log space.

    points is a sequence of (N, sigma) pairs with sigma > 0 and distinct N.
    Optional weights apply per point in the linear regression.
    """
    points = list(points)
    if len(points) < 3:
        raise InsufficientDataError(f"need >= 3 points, got {len(points)}")
    n_vals = np.array([p[0] for p in points], dtype=float)
    sig = np.array([p[1] for p in points], dtype=float)
    if np.any(sig <= 0):
        raise ValueError("all sigma values must be positive")
    if len(np.unique(n_vals)) != len(n_vals):
        raise ValueError("N values must be distinct")

    x = np.log(n_vals)
    y = np.log(1.0 / sig**2)
    if weights is None:
        w = np.ones_like(x)
        method = "loglog_ols"
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != x.shape or np.any(w <= 0):
            raise ValueError("weights must be positive, one per point")
        method = "loglog_wls"

    w_sum = w.sum()
    x_bar = np.sum(w * x) / w_sum
    y_bar = np.sum(w * y) / w_sum
    s_xx = np.sum(w * (x - x_bar) ** 2)
    slope = np.sum(w * (x - x_bar) * (y - y_bar)) / s_xx
    intercept = y_bar - slope * x_bar

    resid = y - (intercept + slope * x)
    dof = len(x) - 2
    if dof > 0:
        s2 = np.sum(w * resid**2) / dof
        alpha_err = math.sqrt(s2 / s_xx)
        intercept_err = math.sqrt(s2 * (1.0 / w_sum + x_bar**2 / s_xx))
    else:
        alpha_err = 0.0
        intercept_err = 0.0

    c = math.exp(intercept)
    return ScalingFit(
        c=c,
        alpha=float(slope),
        c_err=c * intercept_err,
        alpha_err=float(alpha_err),
        n_points=len(x),
        method=method,
    )
