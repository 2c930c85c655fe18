"""Sparse operators on the 2^N spin space.

Basis convention: computational basis indexed by the binary integer of the
spin configuration, spin 0 at the least-significant bit. sigma^z has
eigenvalue -1 on |0> and +1 on |1>, so the all-|0> state is the ground
state of the internal Hamiltonian eta * S_z.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import CapacityError
from .lattice import SpinLattice
from .schedule import ProtocolSchedule, coefficients, crosstalk_bias

__all__ = [
    "SparseOperator",
    "N_CAP",
    "build_Sz",
    "build_Sx",
    "build_coupling",
    "build_H",
    "HamiltonianTerms",
    "hs_norm_closed_form",
    "hs_norm_numeric",
]

# full-space propagation is desk-scale up to 14 spins (dim 16384)
N_CAP = 14

# hs_norm_numeric is a validation tool, not for production sizes
_NUMERIC_NORM_DIM_CAP = 2**10


@dataclass(frozen=True)
class SparseOperator:
    """A Hermitian-flagged sparse operator on a 2^N space."""

    matrix: sp.csr_matrix
    hermitian: bool = True

    def __post_init__(self):
        dim = self.matrix.shape[0]
        if self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError("operator must be square")
        if dim & (dim - 1) != 0:
            raise ValueError(f"dimension {dim} is not a power of two")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_spins(self) -> int:
        return self.dim.bit_length() - 1


def _check_cap(n: int):
    if n < 1:
        raise CapacityError(f"need at least one spin, got {n}")
    if n > N_CAP:
        raise CapacityError(f"n = {n} exceeds the full-space cap {N_CAP}")


def sz_diagonal(n: int) -> np.ndarray:
    """Eigenvalues of S_z = sum_k sigma_k^z over the computational basis."""
    _check_cap(n)
    idx = np.arange(2**n, dtype=np.uint64)
    ups = np.bitwise_count(idx).astype(np.int64)
    return (2 * ups - n).astype(float)


def coupling_diagonal(lat: SpinLattice) -> np.ndarray:
    """Eigenvalues of sum_<j,k> sigma_j^z sigma_k^z over the basis."""
    _check_cap(lat.n_spins)
    idx = np.arange(2**lat.n_spins, dtype=np.uint64)
    total = np.zeros(idx.shape, dtype=float)
    for j, k in lat.edges:
        zj = 2.0 * ((idx >> np.uint64(j)) & np.uint64(1)).astype(float) - 1.0
        zk = 2.0 * ((idx >> np.uint64(k)) & np.uint64(1)).astype(float) - 1.0
        total += zj * zk
    return total


def all_pairs_coupling_diagonal(n: int) -> np.ndarray:
    """Coupling eigenvalues over all spin pairs: (S_z^2 - N) / 2."""
    sz = sz_diagonal(n)
    return (sz * sz - n) / 2.0


def build_Sz(n: int) -> SparseOperator:
    """Collective magnetization operator S_z (diagonal)."""
    return SparseOperator(sp.diags(sz_diagonal(n), format="csr"))


def build_Sx(n: int) -> SparseOperator:
    """Collective transverse operator S_x: unit hops between basis states
    at Hamming distance 1."""
    _check_cap(n)
    dim = 2**n
    rows = np.repeat(np.arange(dim), n)
    cols = (rows ^ (1 << np.tile(np.arange(n), dim))).astype(np.int64)
    data = np.ones(rows.shape, dtype=float)
    mat = sp.csr_matrix((data, (rows, cols)), shape=(dim, dim))
    return SparseOperator(mat)


def build_coupling(lat: SpinLattice) -> SparseOperator:
    """Ising coupling term sum_<j,k> sigma_j^z sigma_k^z (diagonal)."""
    return SparseOperator(sp.diags(coupling_diagonal(lat), format="csr"))


class HamiltonianTerms:
    """Precomputed operator terms for one (lattice, schedule) pair.

    The driving Hamiltonian is assembled per time step as a linear
    combination of a fixed S_x matrix and a diagonal part, which keeps the
    inner propagation loop free of repeated operator construction.
    """

    def __init__(self, lat: SpinLattice, sched: ProtocolSchedule,
                 crosstalk_all_pairs: bool = False):
        _check_cap(lat.n_spins)
        self.lattice = lat
        self.schedule = sched
        self.n = lat.n_spins
        self.dim = 2**self.n
        self.sx = build_Sx(self.n).matrix
        self.sz_diag = sz_diagonal(self.n)
        self.coupling_diag = coupling_diagonal(lat)
        if crosstalk_all_pairs:
            self.crosstalk_diag = all_pairs_coupling_diagonal(self.n)
        else:
            self.crosstalk_diag = self.coupling_diag

    def coeffs(self, t: float) -> tuple[float, float, float, float]:
        bx, bz, jc = coefficients(t, self.schedule)
        bias = crosstalk_bias(t, self.schedule)
        return bx, bz, jc, bias

    def diagonal(self, t: float) -> np.ndarray:
        bx, bz, jc, bias = self.coeffs(t)
        diag = bz * self.sz_diag
        if jc != 0.0:
            diag = diag + jc * self.coupling_diag
        if bias != 0.0:
            diag = diag + bias * self.crosstalk_diag
        return diag

    def apply(self, t: float, psi: np.ndarray) -> np.ndarray:
        """H(t) @ psi without forming H."""
        bx = self.coeffs(t)[0]
        out = self.diagonal(t) * psi
        if bx != 0.0:
            out = out + bx * (self.sx @ psi)
        return out

    def matrix(self, t: float) -> sp.csr_matrix:
        bx = self.coeffs(t)[0]
        return (bx * self.sx + sp.diags(self.diagonal(t))).tocsr()

    def dense(self, t: float) -> np.ndarray:
        return self.matrix(t).toarray()

    def one_norm_bound(self, t: float) -> float:
        """Cheap upper bound on ||H(t)||_1 for step-size control."""
        bx = self.coeffs(t)[0]
        return abs(bx) * self.n + float(np.max(np.abs(self.diagonal(t))))


def build_H(t: float, sched: ProtocolSchedule, lat: SpinLattice,
            crosstalk_all_pairs: bool = False) -> SparseOperator:
    """Driving Hamiltonian H(t) = Bx S_x + Bz S_z + (Jc + bias) * coupling."""
    terms = HamiltonianTerms(lat, sched, crosstalk_all_pairs=crosstalk_all_pairs)
    return SparseOperator(terms.matrix(t))


def hs_norm_closed_form(bx: float, bz: float, jc: float, n: int, n_c: int) -> float:
    """Closed-form 2^(-N/2)-normalized Hilbert-Schmidt norm of H.

    The full norm is sqrt(2^N [N (Bx^2 + Bz^2) + n_C Jc^2]); the 2^(N/2)
    factor is dropped so the value stays finite at device scale. The
    resource-equalization identity is invariant under this rescaling.
    """
    if n < 1:
        raise CapacityError(f"need at least one spin, got {n}")
    if n_c < 0:
        raise ValueError("edge count must be >= 0")
    return math.sqrt(n * (bx * bx + bz * bz) + n_c * jc * jc)


def hs_norm_numeric(op: SparseOperator) -> float:
    """sqrt(sum |entries|^2) = sqrt(Tr[H^dag H]); small dims only."""
    if op.dim > _NUMERIC_NORM_DIM_CAP:
        raise CapacityError(
            f"dim {op.dim} exceeds the numeric-norm validation cap "
            f"{_NUMERIC_NORM_DIM_CAP}"
        )
    data = op.matrix.tocsr().data
    return float(np.sqrt(np.sum(np.abs(data) ** 2)))
