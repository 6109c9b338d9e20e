import numpy as np
import pytest

from phononbus.hilbert import (
    CompositeSpace,
    basis_ket,
    destroy,
    dm,
    embed,
    identity,
    kron,
    lowering,
    number_op,
    projector,
)
from phononbus.lindblad import (
    CascadeCoupling,
    Dissipator,
    IntegratorConfig,
    TimeDependentHamiltonian,
    _compiled_rhs,
    evolve,
    rhs,
)

RNG = np.random.default_rng(99)


def random_density_matrix(dim, rng=RNG):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def static_h(mat):
    return TimeDependentHamiltonian(static_part=np.asarray(mat, dtype=complex))


class TestRhs:
    def test_zero_generator(self):
        rho = random_density_matrix(3)
        out = rhs(static_h(np.zeros((3, 3))), [], rho, 0.0)
        assert np.allclose(out, 0.0)

    def test_amplitude_damping_rate(self):
        # excited qubit with decay gamma: d<n>/dt = -gamma
        gamma = 0.37
        rho = projector(2, 1)
        out = rhs(static_h(np.zeros((2, 2))), [Dissipator(lowering(), gamma)], rho, 0.0)
        assert abs(np.trace(out @ number_op(2)).real + gamma) < 1e-12

    def test_pure_dephasing_offdiagonal_rate(self):
        # hand expansion for c = n (projector): d rho01/dt = -(gamma/2) rho01
        gamma = 0.8
        plus = (basis_ket(2, 0) + basis_ket(2, 1)) / np.sqrt(2)
        rho = dm(plus)
        n = number_op(2)
        out = rhs(static_h(np.zeros((2, 2))), [Dissipator(n, gamma)], rho, 0.0)
        assert abs(out[0, 1] - (-(gamma / 2) * rho[0, 1])) < 1e-12
        assert abs(out[0, 0]) < 1e-12 and abs(out[1, 1]) < 1e-12

    def test_trace_free_and_hermiticity_preserving(self):
        rng = np.random.default_rng(5)
        h0 = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h0 = h0 + h0.conj().T
        hx = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        hx = hx + hx.conj().T
        H = TimeDependentHamiltonian(h0, [(lambda t: np.sin(t), hx)])
        c = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        ds = [Dissipator(c, 0.3), Dissipator(c @ c, lambda t: 0.1 + 0.05 * t)]
        for t in (0.0, 0.7, 2.1):
            rho = random_density_matrix(4, rng)
            out = rhs(H, ds, rho, t)
            assert abs(np.trace(out)) < 1e-12
            assert np.max(np.abs(out - out.conj().T)) < 1e-12

    def test_cascade_term_trace_free(self):
        space = CompositeSpace([2, 3])
        src = embed(lowering(), space, 0)
        snk = embed(destroy(3), space, 1)
        cc = CascadeCoupling(src, snk, lambda t: 1.0 + t, lambda t: 2.0, phase=np.pi)
        H = static_h(np.zeros((6, 6)))
        for t in (0.0, 0.4):
            rho = random_density_matrix(6)
            out = rhs(H, [], rho, t, cascade=cc)
            assert abs(np.trace(out)) < 1e-12
            assert np.max(np.abs(out - out.conj().T)) < 1e-12

    def test_dim_mismatch_raises(self):
        with pytest.raises(ValueError):
            rhs(static_h(np.zeros((2, 2))), [], random_density_matrix(3), 0.0)

    def test_compiled_path_matches_direct(self):
        # the vectorized fast path must agree with the readable generator
        rng = np.random.default_rng(11)
        h0 = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h0 = h0 + h0.conj().T
        hx = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        hx = hx + hx.conj().T
        H = TimeDependentHamiltonian(h0, [(lambda t: np.cos(3 * t), hx)])
        c1 = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        c2 = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        ds = [Dissipator(c1, 0.4), Dissipator(c2, lambda t: 0.2 + 0.1 * np.sin(t))]
        cc = CascadeCoupling(c1, c2, lambda t: 0.5, lambda t: 1.0, phase=0.7)
        f = _compiled_rhs(H, ds, cc)
        for t in (0.0, 0.9, 1.7):
            rho = random_density_matrix(4, rng)
            direct = rhs(H, ds, rho, t, cascade=cc)
            fast = f(t, rho.reshape(-1)).reshape(4, 4)
            assert np.allclose(direct, fast, atol=1e-12)


class TestEvolve:
    def test_jaynes_cummings_half_pi_swap(self):
        # resonant JC with constant g for time (pi/2)/g swaps the excitation
        g = 2.0 * np.pi
        space = CompositeSpace([2, 3])
        sm = embed(lowering(), space, 0)
        b = embed(destroy(3), space, 1)
        H = static_h(g * (sm @ b.conj().T + sm.conj().T @ b))
        rho0 = kron(projector(2, 1), projector(3, 0))
        n_ph = embed(number_op(3), space, 1)
        traj = evolve(H, [], rho0, (0.0, (np.pi / 2) / g), observables={"n_ph": n_ph})
        assert traj.observables["n_ph"][-1] >= 0.999

    def test_free_decay_matches_exponential(self):
        gamma = 2.0
        rho0 = projector(2, 1)
        traj = evolve(
            static_h(np.zeros((2, 2))),
            [Dissipator(lowering(), gamma)],
            rho0,
            (0.0, 1.5),
            observables={"n": number_op(2)},
        )
        expected = np.exp(-gamma * traj.times)
        assert np.max(np.abs(traj.observables["n"] - expected)) < 1e-6

    def test_trace_hermiticity_positivity_invariants(self):
        g = 5.0
        space = CompositeSpace([2, 3])
        sm = embed(lowering(), space, 0)
        b = embed(destroy(3), space, 1)
        H = TimeDependentHamiltonian(
            np.zeros((6, 6), dtype=complex),
            [(lambda t: g / np.cosh(2 * (t - 1.0)), sm @ b.conj().T + sm.conj().T @ b)],
        )
        ds = [Dissipator(sm, 0.1), Dissipator(b, 0.02)]
        rho0 = kron(projector(2, 1), projector(3, 0))
        traj = evolve(H, ds, rho0, (0.0, 3.0))
        assert traj.diagnostics["trace_error"] <= 1e-6
        assert traj.diagnostics["hermiticity_defect"] <= 1e-7
        assert traj.diagnostics["min_eigenvalue"] >= -1e-6

    def test_unitary_limit_purity_conserved(self):
        g = 3.0
        space = CompositeSpace([2, 3])
        sm = embed(lowering(), space, 0)
        b = embed(destroy(3), space, 1)
        H = static_h(g * (sm @ b.conj().T + sm.conj().T @ b))
        rho0 = kron(dm((basis_ket(2, 0) + basis_ket(2, 1)) / np.sqrt(2)), projector(3, 0))
        traj = evolve(H, [], rho0, (0.0, 2.0))
        purity = np.trace(traj.final_state @ traj.final_state).real
        assert abs(purity - 1.0) < 1e-7

    def test_rk4_and_rk45_agree(self):
        gamma = 0.5
        rho0 = projector(2, 1)
        H = static_h(np.zeros((2, 2)))
        ds = [Dissipator(lowering(), gamma)]
        fine = evolve(H, ds, rho0, (0.0, 1.0),
                      config=IntegratorConfig(method="rk4", dt=1e-3))
        adaptive = evolve(H, ds, rho0, (0.0, 1.0))
        assert np.max(np.abs(fine.final_state - adaptive.final_state)) < 1e-8

    def test_invalid_rho0_rejected(self):
        with pytest.raises(ValueError):
            evolve(static_h(np.zeros((2, 2))), [], identity(2), (0.0, 1.0))

    def test_save_stride_and_states(self):
        rho0 = projector(2, 1)
        traj = evolve(
            static_h(np.zeros((2, 2))),
            [Dissipator(lowering(), 1.0)],
            rho0,
            (0.0, 1.0),
            config=IntegratorConfig(save_stride=5),
            save_states=True,
        )
        assert len(traj.states) == len(traj.times)
        assert np.all(np.diff(traj.times) > 0)

    def test_negative_rate_rejected(self):
        with pytest.raises(ValueError):
            Dissipator(lowering(), -0.1)
