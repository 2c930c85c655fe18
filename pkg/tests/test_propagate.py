import math

import numpy as np
import pytest
import scipy.integrate
import scipy.linalg

from spincharge import (
    CapacityError,
    DensityState,
    EnergyTable,
    IntegratorError,
    ProtocolSchedule,
    PureState,
    SpinLattice,
    evolve_lindblad,
    evolve_unitary,
    expm_apply,
    ground_state,
    magnetization,
    ring,
)
from spincharge.errors import ScheduleError
from spincharge.operators import HamiltonianTerms
from spincharge.propagate import LINDBLAD_N_CAP


def constant_field_schedule(tau, a0):
    """Schedule whose only coefficient is a constant Bx = -a0/2."""
    table = EnergyTable(s=(0.0, 1.0), A=(a0, a0), B=(0.0, 0.0))
    return ProtocolSchedule(
        tau=tau, h=0.0, J=0.0, mode="local", table=table, phase_factor=1.0
    )


def field_free_schedule(tau):
    """Schedule with H = 0 everywhere: A = 0, B = 0."""
    table = EnergyTable(s=(0.0, 1.0), A=(0.0, 0.0), B=(0.0, 0.0))
    return ProtocolSchedule(
        tau=tau, h=0.0, J=0.0, mode="local", table=table, phase_factor=1.0
    )


class TestStates:
    def test_ground_state(self):
        psi = ground_state(3)
        assert psi.n_spins == 3
        assert psi.amplitudes[0] == 1.0
        assert magnetization(psi) == -1.0

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            PureState(np.array([1.0, 1.0], dtype=complex))

    def test_rejects_bad_length(self):
        with pytest.raises(ValueError):
            PureState(np.array([1.0, 0.0, 0.0], dtype=complex))

    def test_density_from_pure(self):
        rho = ground_state(2).density()
        assert rho.n_spins == 2
        assert rho.matrix[0, 0] == 1.0

    def test_density_invariants(self):
        with pytest.raises(ValueError):
            DensityState(np.eye(4))  # trace 4
        with pytest.raises(ValueError):
            DensityState(np.array([[0.5, 0.5j], [0.5j, 0.5]]))  # not Hermitian
        bad = np.diag([1.5, -0.5]).astype(complex)
        with pytest.raises(ValueError):
            DensityState(bad)  # negative eigenvalue


class TestExpmApply:
    @pytest.mark.parametrize("seed", range(4))
    def test_matches_scipy_expm(self, seed):
        rng = np.random.default_rng(seed)
        dim = 8
        h = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        h = (h + h.conj().T) / 2
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        z = -0.3j
        expected = scipy.linalg.expm(z * h) @ psi
        got = expm_apply(lambda v: h @ v, psi, z, np.linalg.norm(h, 1))
        assert np.allclose(got, expected, atol=1e-12)

    def test_large_step_substeps(self):
        rng = np.random.default_rng(9)
        h = np.diag(rng.uniform(-50, 50, size=4)).astype(complex)
        psi = np.full(4, 0.5, dtype=complex)
        z = -1.0j
        expected = scipy.linalg.expm(z * h) @ psi
        got = expm_apply(lambda v: h @ v, psi, z, np.linalg.norm(h, 1))
        assert np.allclose(got, expected, atol=1e-10)

    def test_identity_at_zero(self):
        psi = np.array([1.0, 0.0], dtype=complex)
        got = expm_apply(lambda v: v, psi, 0.0, 1.0)
        assert np.array_equal(got, psi)


class TestUnitaryEvolution:
    def test_rabi_oracle(self):
        # constant Bx = -a0/2 on one spin: <sigma_z>(t) = -cos(a0 t)
        a0 = 1.3
        tau = 5.0
        sched = constant_field_schedule(tau, a0)
        lat = SpinLattice(1, ())
        traj = evolve_unitary(ground_state(1), sched, lat, dt=0.01,
                              store_every=100)
        for t, state in traj:
            assert magnetization(state) == pytest.approx(
                -math.cos(a0 * t), abs=1e-8
            )

    def test_field_free_is_identity(self):
        traj = evolve_unitary(ground_state(2), field_free_schedule(1.0),
                              ring(2), dt=0.01)
        assert np.allclose(traj[-1][1].amplitudes, ground_state(2).amplitudes)

    def test_matches_dense_ode_oracle(self):
        # high-accuracy adaptive integration of the same Schrodinger equation
        lat = ring(3)
        sched = ProtocolSchedule(tau=3.0, h=-0.5, J=-0.2, phase_factor=1.0)
        terms = HamiltonianTerms(lat, sched)

        def rhs(t, psi):
            return -1j * sched.phase_factor * (terms.matrix(t) @ psi)

        sol = scipy.integrate.solve_ivp(
            rhs, (0.0, sched.tau), ground_state(3).amplitudes,
            rtol=1e-11, atol=1e-13, method="DOP853",
        )
        traj = evolve_unitary(ground_state(3), sched, lat, dt=0.005)
        assert np.allclose(traj[-1][1].amplitudes, sol.y[:, -1], atol=5e-5)

    def test_norm_preserved(self):
        sched = ProtocolSchedule(tau=2.0, h=-0.5, J=-0.2, phase_factor=1.0)
        traj = evolve_unitary(ground_state(4), sched, ring(4), dt=0.01,
                              store_every=50)
        for _, state in traj:
            assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0, abs=1e-9)

    def test_dt_refinement_converges(self):
        sched = ProtocolSchedule(tau=3.0, h=-0.5, J=-0.2, phase_factor=1.0)
        lat = ring(2)
        ref = evolve_unitary(ground_state(2), sched, lat, dt=0.00125)[-1][1]
        errs = [
            np.max(np.abs(
                evolve_unitary(ground_state(2), sched, lat, dt=dt)[-1][1].amplitudes
                - ref.amplitudes
            ))
            for dt in (0.04, 0.02, 0.01, 0.005)
        ]
        assert all(a >= b for a, b in zip(errs, errs[1:]))
        assert errs[-1] < 1e-5

    def test_midpoint_beats_left_sampling(self):
        lat = ring(2)
        sched = ProtocolSchedule(tau=3.0, h=-0.5, J=-0.2, phase_factor=1.0)
        reference = evolve_unitary(ground_state(2), sched, lat, dt=0.0005)[-1][1]
        mid = evolve_unitary(ground_state(2), sched, lat, dt=0.05)[-1][1]
        left = evolve_unitary(ground_state(2), sched, lat, dt=0.05,
                              sampling="left")[-1][1]
        err_mid = np.max(np.abs(mid.amplitudes - reference.amplitudes))
        err_left = np.max(np.abs(left.amplitudes - reference.amplitudes))
        assert err_mid < err_left / 3

    def test_store_every(self):
        sched = ProtocolSchedule(tau=1.0, h=-0.5, J=-0.2, phase_factor=1.0)
        traj = evolve_unitary(ground_state(2), sched, ring(2), dt=0.01,
                              store_every=25)
        times = [t for t, _ in traj]
        assert times == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_endpoints_only_by_default(self):
        sched = ProtocolSchedule(tau=1.0, h=-0.5, J=-0.2, phase_factor=1.0)
        traj = evolve_unitary(ground_state(2), sched, ring(2), dt=0.01)
        assert [t for t, _ in traj] == [0.0, 1.0]

    def test_dt_must_divide_tau(self):
        sched = ProtocolSchedule(tau=1.0, h=-0.5, J=-0.2)
        with pytest.raises(ScheduleError):
            evolve_unitary(ground_state(2), sched, ring(2), dt=0.3)

    def test_capacity_cap(self):
        sched = ProtocolSchedule(tau=1.0, h=-0.5, J=-0.2)
        with pytest.raises(CapacityError):
            evolve_unitary(ground_state(15), sched, ring(15), dt=0.01)

    def test_bad_sampling_name(self):
        sched = ProtocolSchedule(tau=1.0, h=-0.5, J=-0.2)
        with pytest.raises(ValueError):
            evolve_unitary(ground_state(2), sched, ring(2), dt=0.01,
                           sampling="trapezoid")


class TestLindbladEvolution:
    def test_pure_decay_oracle(self):
        # H = 0 and sigma^x jumps: <sigma_z>(t) = -exp(-2 gamma t)
        gamma = 0.4
        tau = 3.0
        sched = field_free_schedule(tau)
        lat = SpinLattice(1, ())
        traj = evolve_lindblad(ground_state(1).density(), sched, lat,
                               gamma=gamma, dt=0.01, store_every=100)
        for t, rho in traj:
            assert magnetization(rho) == pytest.approx(
                -math.exp(-2.0 * gamma * t), abs=1e-8
            )

    def test_gamma_zero_matches_unitary(self):
        lat = ring(3)
        sched = ProtocolSchedule(tau=2.0, h=-0.5, J=-0.2, phase_factor=1.0)
        rho_final = evolve_lindblad(ground_state(3).density(), sched, lat,
                                    gamma=0.0, dt=0.005)[-1][1]
        psi_final = evolve_unitary(ground_state(3), sched, lat, dt=0.005)[-1][1]
        expected = np.outer(psi_final.amplitudes, psi_final.amplitudes.conj())
        assert np.max(np.abs(rho_final.matrix - expected)) < 1e-4

    def test_matches_dense_ode_oracle(self):
        # adaptive integration of the full master equation, N = 2
        lat = ring(2)
        sched = ProtocolSchedule(tau=2.0, h=-0.5, J=-0.2, phase_factor=1.0)
        terms = HamiltonianTerms(lat, sched)
        gamma = 0.05
        idx = np.arange(4)
        perms = [idx ^ 1, idx ^ 2]

        def rhs(t, flat):
            rho = flat.reshape(4, 4)
            h = terms.dense(t)
            out = -1j * sched.phase_factor * (h @ rho - rho @ h)
            out = out - gamma * len(perms) * rho
            for perm in perms:
                out = out + gamma * rho[np.ix_(perm, perm)]
            return out.ravel()

        rho0 = ground_state(2).density().matrix.astype(complex)
        sol = scipy.integrate.solve_ivp(
            rhs, (0.0, sched.tau), rho0.ravel(),
            rtol=1e-10, atol=1e-12, method="DOP853",
        )
        got = evolve_lindblad(ground_state(2).density(), sched, lat,
                              gamma=gamma, dt=0.0025)[-1][1]
        assert np.max(np.abs(got.matrix - sol.y[:, -1].reshape(4, 4))) < 2e-6

    def test_decoherence_reduces_charge(self):
        lat = ring(2)
        sched = ProtocolSchedule(tau=5.0, h=-0.5, J=-0.2, phase_factor=1.0)
        clean = evolve_lindblad(ground_state(2).density(), sched, lat,
                                gamma=0.0, dt=0.01)[-1][1]
        noisy = evolve_lindblad(ground_state(2).density(), sched, lat,
                                gamma=0.1, dt=0.01)[-1][1]
        assert abs(magnetization(noisy)) < abs(magnetization(clean)) + 0.5
        # heavy noise drives the state toward the maximally mixed plateau
        heavy = evolve_lindblad(ground_state(2).density(), sched, lat,
                                gamma=1.0, dt=0.005)[-1][1]
        assert magnetization(heavy) == pytest.approx(0.0, abs=0.05)

    def test_trace_and_positivity_held(self):
        lat = ring(2)
        sched = ProtocolSchedule(tau=2.0, h=-0.5, J=-0.2, phase_factor=1.0)
        traj = evolve_lindblad(ground_state(2).density(), sched, lat,
                               gamma=0.05, dt=0.01, store_every=50)
        for _, rho in traj:
            assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-9)
            assert np.linalg.eigvalsh(rho.matrix)[0] >= -1e-6

    def test_capacity_cap(self):
        n = LINDBLAD_N_CAP + 1
        sched = ProtocolSchedule(tau=1.0, h=-0.5, J=-0.2)
        with pytest.raises(CapacityError):
            evolve_lindblad(ground_state(n).density(), sched, ring(n),
                            gamma=0.0, dt=0.01)

    def test_rejects_negative_gamma(self):
        sched = ProtocolSchedule(tau=1.0, h=-0.5, J=-0.2)
        with pytest.raises(ValueError):
            evolve_lindblad(ground_state(2).density(), sched, ring(2),
                            gamma=-0.1, dt=0.01)
