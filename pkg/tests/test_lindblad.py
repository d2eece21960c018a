import math

import numpy as np
import pytest

from cpbox import (
    ClosedFormMode,
    DimensionMismatchError,
    FockTruncation,
    InitialState,
    IntegratorConfig,
    InvalidParameterError,
    PositivityError,
    ReducedParams,
    StepSizeUnderflowError,
    build_hamiltonian,
    choose_truncation,
    coherent_amplitudes,
    evolve,
    joint_state,
    liouvillian_apply,
    rabi_frequency,
)
from cpbox.density import DensityMatrix
from cpbox.metrics import partial_trace_qubit

G = 1.0 / (2.0 * math.sqrt(2.0))


def small_system(nbar=1.0, theta=0.0, beta=0.0, n_max=None, tail=1e-8):
    trunc = (
        FockTruncation(n_max, tail) if n_max else choose_truncation(math.sqrt(nbar), tail)
    )
    amps = coherent_amplitudes(math.sqrt(nbar), beta, trunc)
    return trunc, InitialState(theta, amps)


def random_hermitian_state(dim, rng):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


class TestBuildHamiltonian:
    def test_exactly_hermitian_and_block_structure(self):
        params = ReducedParams(g=G, delta=0.4, gamma=0.0)
        ham = build_hamiltonian(params, FockTruncation(3, 1e-6))
        h = ham.matrix
        np.testing.assert_array_equal(h, h.conj().T)
        # single-excitation pair {|0,e>, |1,g>} carries magnitude g
        assert h[3, 0] == pytest.approx(-1j * G)
        assert h[0, 3] == pytest.approx(1j * G)
        assert h[0, 0] == pytest.approx(0.4)
        assert h[1, 1] == pytest.approx(-0.4)
        # |n,e> couples only to |n+1,g>
        coupled = {(2 * (n + 1) + 1, 2 * n) for n in range(3)}
        coupled |= {(j, i) for i, j in coupled}
        for i in range(8):
            for j in range(8):
                if i != j and (i, j) not in coupled:
                    assert h[i, j] == 0.0

    def test_zero_coupling_is_diagonal(self):
        ham = build_hamiltonian(ReducedParams(g=0.0, delta=0.3, gamma=0.0), FockTruncation(4, 1e-6))
        off = ham.matrix - np.diag(np.diag(ham.matrix))
        assert np.max(np.abs(off)) == 0.0

    @pytest.mark.parametrize("ratio", [0.0, 1.0, 3.0])
    def test_block_eigenvalues_match_rabi_frequency(self, ratio):
        params = ReducedParams(g=G, delta=ratio * G, gamma=0.0)
        trunc = FockTruncation(32, 1e-6)
        ham = build_hamiltonian(params, trunc)
        for n in range(31):
            rows = [2 * n, 2 * (n + 1) + 1]
            ev = np.linalg.eigvalsh(ham.matrix[np.ix_(rows, rows)])
            mu = rabi_frequency(params, n)
            assert abs(ev[0] + mu) < 1e-12
            assert abs(ev[1] - mu) < 1e-12


class TestLiouvillian:
    def test_diagonal_state_is_stationary_without_coupling(self):
        params = ReducedParams(g=0.0, delta=0.3, gamma=0.2)
        ham = build_hamiltonian(params, FockTruncation(5, 1e-6))
        rho = np.diag(np.linspace(0.3, 0.0, 12))
        rho = (rho / np.trace(rho)).astype(complex)
        deriv = liouvillian_apply(ham, 0.2, rho)
        assert np.max(np.abs(deriv)) < 1e-16

    def test_elementwise_dephasing_law(self):
        # with g = 0 each element obeys a scalar ODE with rate
        # -gamma (n-m)^2 plus the diagonal-frame rotation
        rng = np.random.default_rng(7)
        gamma, delta = 0.13, 0.4
        params = ReducedParams(g=0.0, delta=delta, gamma=gamma)
        dim = 12
        ham = build_hamiltonian(params, FockTruncation(dim // 2 - 1, 1e-6))
        rho = random_hermitian_state(dim, rng)
        deriv = liouvillian_apply(ham, gamma, rho)
        hdiag = np.real(np.diag(ham.matrix))
        nvec = np.arange(dim) // 2
        expected = (
            -1j * (hdiag[:, None] - hdiag[None, :]) * rho
            - gamma * (nvec[:, None] - nvec[None, :]) ** 2 * rho
        )
        np.testing.assert_allclose(deriv, expected, atol=1e-15)

    def test_commutator_is_traceless(self):
        rng = np.random.default_rng(3)
        params = ReducedParams(g=G, delta=0.5, gamma=0.0)
        ham = build_hamiltonian(params, FockTruncation(5, 1e-6))
        rho = random_hermitian_state(12, rng)
        assert abs(np.trace(liouvillian_apply(ham, 0.0, rho))) < 1e-14

    def test_preserves_hermiticity(self):
        rng = np.random.default_rng(11)
        params = ReducedParams(g=G, delta=0.5, gamma=0.08)
        ham = build_hamiltonian(params, FockTruncation(5, 1e-6))
        rho = random_hermitian_state(12, rng)
        deriv = liouvillian_apply(ham, 0.08, rho)
        assert np.max(np.abs(deriv - deriv.conj().T)) < 1e-14

    def test_dimension_mismatch(self):
        params = ReducedParams(g=G, delta=0.0, gamma=0.0)
        ham = build_hamiltonian(params, FockTruncation(5, 1e-6))
        with pytest.raises(DimensionMismatchError):
            liouvillian_apply(ham, 0.0, np.eye(4, dtype=complex))


class TestEvolve:
    def test_zero_time_returns_initial_state(self):
        trunc, init = small_system()
        params = ReducedParams(g=G, delta=0.2, gamma=0.05)
        ham = build_hamiltonian(params, trunc)
        rho0 = init.joint_density()
        out = evolve(ham, 0.05, rho0, 0.0, sample_times=[0.0])
        np.testing.assert_array_equal(out[0].data, rho0.data)

    def test_dephasing_factor_frozen_value(self):
        # exact scalar law: at (n-m) = 2, gamma = 0.1, t = 1 the coherence
        # shrinks by exp(-0.4) = 0.67032...
        trunc, init = small_system(nbar=1.0)
        params = ReducedParams(g=0.0, delta=0.0, gamma=0.1)
        ham = build_hamiltonian(params, trunc)
        rho0 = init.joint_density()
        out = evolve(ham, 0.1, rho0, 1.0, sample_times=[1.0])[0]
        f0 = partial_trace_qubit(rho0)
        f1 = partial_trace_qubit(out)
        ratio = (f1[0, 2] / f0[0, 2]).real
        assert ratio == pytest.approx(0.67032, abs=1e-5)
        assert ratio == pytest.approx(math.exp(-0.4), rel=1e-8)

    def test_matches_corrected_closed_form_jc_limit(self):
        trunc, init = small_system(nbar=2.0, tail=1e-10)
        params = ReducedParams(g=G, delta=0.0, gamma=0.0)
        ham = build_hamiltonian(params, trunc)
        times = np.linspace(0.0, 25.0, 40)
        states = evolve(ham, 0.0, init.joint_density(), 25.0, sample_times=times)
        worst = max(
            float(np.max(np.abs(joint_state(params, init, float(t)).data - s.data)))
            for t, s in zip(times, states)
        )
        assert worst < 1e-6

    def test_mixed_and_detuned_matches_closed_form(self):
        trunc, init = small_system(nbar=1.5, theta=0.8, beta=0.6, tail=1e-10)
        params = ReducedParams(g=G, delta=0.7, gamma=0.0)
        ham = build_hamiltonian(params, trunc)
        times = np.linspace(0.0, 12.0, 25)
        states = evolve(ham, 0.0, init.joint_density(), 12.0, sample_times=times)
        worst = max(
            float(np.max(np.abs(joint_state(params, init, float(t)).data - s.data)))
            for t, s in zip(times, states)
        )
        assert worst < 1e-6

    def test_conservation_with_damping(self):
        trunc, init = small_system(nbar=2.0, tail=1e-10)
        params = ReducedParams(g=G, delta=0.3, gamma=0.1)
        ham = build_hamiltonian(params, trunc)
        times = np.linspace(0.0, 10.0, 21)
        states = evolve(ham, 0.1, init.joint_density(), 10.0, sample_times=times)
        for s in states:
            assert abs(s.trace() - 1.0) < 1e-8
            assert s.hermiticity_defect() < 1e-10
            assert s.min_eigenvalue() > -1e-8

    def test_photon_populations_frozen_under_pure_dephasing(self):
        trunc, init = small_system(nbar=2.0, tail=1e-10)
        params = ReducedParams(g=0.0, delta=0.0, gamma=0.15)
        ham = build_hamiltonian(params, trunc)
        rho0 = init.joint_density()
        diag0 = np.real(np.diag(partial_trace_qubit(rho0)))
        states = evolve(ham, 0.15, rho0, 6.0, sample_times=[2.0, 6.0])
        for s in states:
            diag = np.real(np.diag(partial_trace_qubit(s)))
            np.testing.assert_allclose(diag, diag0, atol=1e-10)

    def test_excitation_number_conserved_at_gamma_zero(self):
        trunc, init = small_system(nbar=2.0, theta=0.4, tail=1e-10)
        params = ReducedParams(g=G, delta=0.5, gamma=0.0)
        ham = build_hamiltonian(params, trunc)
        dim = 2 * (trunc.n_max + 1)
        excitation = np.diag(
            np.arange(dim) // 2 + (np.arange(dim) % 2 == 0)
        ).astype(complex)
        times = np.linspace(0.0, 25.0, 26)
        states = evolve(ham, 0.0, init.joint_density(), 25.0, sample_times=times)
        values = [float(np.real(np.trace(s.data @ excitation))) for s in states]
        assert max(values) - min(values) < 1e-8

    def test_rk4_convergence_order(self):
        trunc, init = small_system(nbar=1.0, theta=0.3, n_max=6, tail=0.5)
        params = ReducedParams(g=0.35, delta=0.4, gamma=0.05)
        ham = build_hamiltonian(params, trunc)
        rho0 = init.joint_density()
        ref = evolve(
            ham, 0.05, rho0, 2.0,
            IntegratorConfig(dt_or_tol=1e-12, atol=1e-14), sample_times=[2.0],
        )[0]
        errs = []
        for dt in (0.1, 0.05):
            got = evolve(
                ham, 0.05, rho0, 2.0,
                IntegratorConfig(method="rk4", dt_or_tol=dt),
                sample_times=[2.0], check_positivity=False,
            )[0]
            errs.append(float(np.max(np.abs(got.data - ref.data))))
        ratio = errs[0] / errs[1]
        assert 8.0 <= ratio <= 32.0

    def test_rk4_conserves_trace_even_at_coarse_step(self):
        trunc, init = small_system(nbar=1.0, n_max=6, tail=0.5)
        params = ReducedParams(g=0.35, delta=0.0, gamma=0.05)
        ham = build_hamiltonian(params, trunc)
        out = evolve(
            ham, 0.05, init.joint_density(), 3.0,
            IntegratorConfig(method="rk4", dt_or_tol=0.2),
            sample_times=[3.0], check_positivity=False,
        )[0]
        assert abs(out.trace() - 1.0) < 1e-12

    def test_renormalization_interval(self):
        trunc, init = small_system(nbar=1.0, n_max=6, tail=0.5)
        params = ReducedParams(g=0.35, delta=0.0, gamma=0.05)
        ham = build_hamiltonian(params, trunc)
        out = evolve(
            ham, 0.05, init.joint_density(), 3.0,
            IntegratorConfig(method="rk4", dt_or_tol=0.1, renorm_interval=5),
            sample_times=[3.0], check_positivity=False,
        )[0]
        assert abs(out.trace() - 1.0) < 1e-13

    def test_step_size_underflow(self):
        trunc, init = small_system(nbar=1.0, n_max=6, tail=0.5)
        params = ReducedParams(g=0.35, delta=0.4, gamma=0.05)
        ham = build_hamiltonian(params, trunc)
        with pytest.raises(StepSizeUnderflowError):
            evolve(
                ham, 0.05, init.joint_density(), 1.0,
                IntegratorConfig(dt_or_tol=1e-30, atol=1e-30), sample_times=[1.0],
            )

    def test_positivity_violation_reported_as_truncation_advice(self):
        # a grossly coarse fixed step drives the state unphysical
        trunc, init = small_system(nbar=1.0, n_max=6, tail=0.5)
        params = ReducedParams(g=0.9, delta=0.0, gamma=0.4)
        ham = build_hamiltonian(params, trunc)
        with pytest.raises(PositivityError, match="n_max"):
            evolve(
                ham, 0.4, init.joint_density(), 40.0,
                IntegratorConfig(method="rk4", dt_or_tol=1.6),
                sample_times=[40.0],
            )

    def test_sample_time_validation(self):
        trunc, init = small_system()
        params = ReducedParams(g=G, delta=0.0, gamma=0.0)
        ham = build_hamiltonian(params, trunc)
        rho0 = init.joint_density()
        with pytest.raises(InvalidParameterError):
            evolve(ham, 0.0, rho0, 1.0, sample_times=[0.6, 0.4])
        with pytest.raises(InvalidParameterError):
            evolve(ham, 0.0, rho0, 1.0, sample_times=[0.5, 2.0])

    def test_dimension_mismatch(self):
        trunc, init = small_system()
        params = ReducedParams(g=G, delta=0.0, gamma=0.0)
        ham = build_hamiltonian(params, trunc)
        with pytest.raises(DimensionMismatchError):
            evolve(ham, 0.0, DensityMatrix(np.eye(4) / 4.0), 1.0, sample_times=[1.0])
