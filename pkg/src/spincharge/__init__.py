"""Simulation and analysis toolkit for charging Ising spin-network batteries.

Core pieces: spin lattices and annealing schedules, sparse Hamiltonians on
the full 2^N space, exact unitary and Lindblad propagation, magnetization
observables with simulated shot statistics, closed-form fluctuation models,
and a sweep harness that fits precision scaling exponents.
"""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    ConfigError,
    EdgeListParseError,
    InsufficientDataError,
    IntegratorError,
    InterpolationError,
    LatticeError,
    ScheduleError,
    SpinChargeError,
)
from .lattice import SpinLattice, connectivity_ratio, from_edge_list, ring, serialize, torus
from .models import (
    CooperativeModelParams,
    LocalModelParams,
    ScalingFit,
    bhatia_davis_bound,
    cooperative_model,
    fit_scaling,
    heisenberg_limit_check,
    local_model,
)
from .observables import (
    MagnetizationDistribution,
    ShotRecord,
    distribution,
    fluctuation,
    magnetization,
    sample_shots,
    sample_stats,
    stored_power,
)
from .operators import (
    HamiltonianTerms,
    SparseOperator,
    build_H,
    build_Sx,
    build_Sz,
    build_coupling,
    hs_norm_closed_form,
    hs_norm_numeric,
)
from .propagate import (
    DensityState,
    PureState,
    evolve_lindblad,
    evolve_unitary,
    expm_apply,
    ground_state,
)
from .harness import (
    ExperimentConfig,
    RunResult,
    SweepOutcome,
    audit_equalization,
    calibrate_tau,
    emit_report,
    fit_from_results,
    results_from_csv,
    results_to_csv,
    run_single,
    run_sweep,
)
from .schedule import (
    EnergyTable,
    Equalization,
    ProtocolSchedule,
    coefficients,
    equalize_local,
    equalized_local_field,
    g_of_t,
    s_of_t,
    schedule_from_preset,
)
