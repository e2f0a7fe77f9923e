import numpy as np
import pytest

import oracle
from spinor_herald.dynamics import RampSpec, evolve_constant, evolve_ramp, propagate, ramp_scan
from spinor_herald.errors import ConfigError, ConvergenceError
from spinor_herald.metrology import embed
from spinor_herald.model import ModelParams, build_hamiltonian
from spinor_herald.spectra import energy_gap, ground_state, lowest_eigenpairs


def test_spec_validation():
    with pytest.raises(ConfigError):
        RampSpec(1, 0.1)
    with pytest.raises(ConfigError):
        RampSpec(10, 0.0)
    with pytest.raises(ConfigError):
        RampSpec(10, 0.1, q_start_ratio=0.0)
    with pytest.raises(ConfigError):
        RampSpec(10, 0.1, steps=0)
    assert RampSpec(10, 0.25).duration == pytest.approx(0.5)


def test_zero_duration_is_identity():
    psi = ground_state(ModelParams(10, 2.0)).amplitudes
    H0 = build_hamiltonian(ModelParams(10, 0.0))
    np.testing.assert_array_equal(propagate(psi, H0, lambda t: 0.0, 0.3, 0.3, 10), psi)


def test_constant_evolution_of_eigenstate_is_a_phase():
    p = ModelParams(30, 0.4)
    res = lowest_eigenpairs(build_hamiltonian(p), 2)
    s = res.states[1]
    out = evolve_constant(s, p, 3.7, steps=5)
    np.testing.assert_allclose(np.abs(out.amplitudes), np.abs(s.amplitudes), atol=1e-10)
    assert out.overlap(s) == pytest.approx(np.exp(1j * 3.7 * res.energies[1]), abs=1e-10)


def test_constant_q_propagate_matches_exact():
    p = ModelParams(12, -0.3)
    psi = ground_state(ModelParams(12, 1.0)).amplitudes.astype(complex)
    H0 = build_hamiltonian(ModelParams(12, 0.0))
    a = propagate(psi, H0, lambda t: p.q, 0.0, 0.8, 3)
    b = evolve_constant(ground_state(ModelParams(12, 1.0)), p, 0.8).amplitudes
    np.testing.assert_allclose(a, b, atol=1e-12)


@pytest.mark.parametrize("N", [2, 5, 8])
def test_ramp_matches_oracle(N):
    spec = RampSpec(N, 0.06, tol=1e-9)
    psi0 = oracle.to_oracle(embed(ground_state(ModelParams(N, 2.0))))
    ref = oracle.brute_force_propagator(N, spec, psi0)
    out = oracle.to_oracle(embed(evolve_ramp(spec).state))
    np.testing.assert_allclose(out, ref, atol=1e-8)


def test_oracle_zero_duration():
    spec = RampSpec(4, 0.5, q_start_ratio=1.0, q_end_ratio=0.0)
    zero = type("Z", (), {"tau": 0.5, "q_start_ratio": 1.0, "q_end_ratio": 1.0})()
    v = np.arange(9.0) / np.linalg.norm(np.arange(9.0))
    np.testing.assert_array_equal(oracle.brute_force_propagator(4, zero, v), v)
    assert spec.duration == 0.5


def test_fourth_order_convergence():
    spec = RampSpec(40, 0.05)
    ref = evolve_ramp(RampSpec(40, 0.05, steps=4096)).state.amplitudes
    errs = [np.linalg.norm(evolve_ramp(RampSpec(40, 0.05, steps=n)).state.amplitudes - ref) for n in (64, 128, 256)]
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders > 3.6), orders
    assert spec.tol == 1e-6


def test_norm_preserved():
    r = evolve_ramp(RampSpec(200, 0.03, steps=500))
    assert r.norm_drift < 1e-10


def test_step_doubling_reports_steps():
    r = evolve_ramp(RampSpec(60, 0.06))
    assert r.converged_change < 1e-6
    assert r.steps >= 2 * max(16, int(np.ceil(2 * 60 * 0.12)))


def test_convergence_failure_is_explicit():
    with pytest.raises(ConvergenceError):
        evolve_ramp(RampSpec(60, 0.5, initial_steps=2, max_steps=4, tol=1e-14))


def test_snapshots():
    r = evolve_ramp(RampSpec(30, 0.1, steps=200), snapshot_ratios=[1.0, 0.5, 5.0])
    assert sorted(r.snapshots) == [0.5, 1.0]
    assert r.snapshots[1.0].norm() == pytest.approx(1.0, abs=1e-12)


def test_fidelity_monotone_and_adiabatic_limit():
    N = 100
    taus = [0.02, 0.05, 0.1, 0.3, 1.0, 5.0]
    scan = ramp_scan(N, taus)
    assert np.all(np.diff(scan.fidelity) > 0)
    assert abs(scan.qfi_ratio[-1] - 1) < 1e-3
    assert scan.inverse_critical_gap == pytest.approx(1 / energy_gap(ModelParams(N, 1.0)))


def test_qfi_ratio_beats_fidelity_for_fast_ramp():
    r = evolve_ramp(RampSpec(150, 0.06))
    assert r.qfi_ratio > r.fidelity
    assert r.herald_distribution().probs.sum() == pytest.approx(1.0, abs=1e-10)
