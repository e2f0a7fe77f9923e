"""Self-checks of the brute-force reference, plus the phase-noise invariance."""
import numpy as np
import pytest

import oracle
from conftest import random_vector
from spinor_herald.metrology import embed
from spinor_herald.model import KBasisState
from spinor_herald.transform import pair_expansion


def test_guard():
    with pytest.raises(ValueError):
        oracle.full_fock_hamiltonian(11, 0.0)
    with pytest.raises(ValueError):
        oracle.brute_force_mode_change(12, "J_x", 0.1)
    with pytest.raises(ValueError):
        oracle.brute_force_propagator(11, None, None)


def test_two_particle_block():
    H = oracle.full_fock_hamiltonian(2, 0.0)
    idx = [oracle.basis(2).index(o) for o in [(0, 2, 0), (1, 0, 1)]]
    np.testing.assert_allclose(H[np.ix_(idx, idx)], [[0, -np.sqrt(2)], [-np.sqrt(2), 1]], atol=1e-15)


@pytest.mark.parametrize("N", range(1, 11))
def test_hermitian_and_conserves_D(N):
    H = oracle.full_fock_hamiltonian(N, 1.3)
    D = oracle.dense_D(N)
    assert np.abs(H - H.conj().T).max() < 1e-12
    assert np.abs(H @ D - D @ H).max() < 1e-12


@pytest.mark.parametrize("N", [3, 8])
def test_mode_change_unitary(N):
    for g in ("J_x", "S_y", "A_y"):
        U = oracle.brute_force_mode_change(N, g, 0.9)
        assert np.abs(U @ U.conj().T - np.eye(U.shape[0])).max() < 1e-12
    np.testing.assert_allclose(oracle.brute_force_mode_change(N, "S_x", 0.0), np.eye(U.shape[0]))


def test_beam_splitter_on_single_pair():
    # the beam splitter sends |1,0,1> onto the two doubly occupied states with
    # the pair-expansion weights, read here in +-1 occupations
    U = oracle.brute_force_mode_change(2, "J_y", np.pi / 2)
    b = oracle.basis(2)
    out = U[:, b.index((1, 0, 1))]
    c = pair_expansion(1).coeffs  # (n_g=0,n_h=2): -1/sqrt2, (n_g=2,n_h=0): +1/sqrt2
    assert out[b.index((0, 0, 2))] == pytest.approx(-c[1], abs=1e-12)
    assert out[b.index((2, 0, 0))] == pytest.approx(-c[0], abs=1e-12)
    # the x rotation gives the same magnitudes with a common phase
    Ux = oracle.brute_force_mode_change(2, "J_x", np.pi / 2)[:, b.index((1, 0, 1))]
    np.testing.assert_allclose(np.abs(Ux), np.abs(out), atol=1e-12)


def test_frame_matrix_orthogonal():
    W = oracle.gh_frame_matrix(6)
    np.testing.assert_allclose(W.T @ W, np.eye(W.shape[0]), atol=1e-12)


def test_constant_ramp_keeps_eigenstate():
    N = 6
    spec = type("S", (), {"tau": 1e9, "q_start_ratio": 0.5 + 1e-9, "q_end_ratio": 0.5})()
    H = oracle.ramp_hamiltonian(N, 0.5)
    w, V = np.linalg.eigh(H)
    out = oracle.brute_force_propagator(N, spec, V[:, 0])
    np.testing.assert_allclose(np.abs(out), np.abs(V[:, 0]), atol=1e-10)


@pytest.mark.parametrize("N", [4, 7, 8])
def test_phase_noise_invariance(N, rng):
    D = oracle.dense_D(N)
    s = oracle.to_oracle(embed(KBasisState(N, random_vector(rng, N // 2 + 1))))
    for phi in rng.uniform(-np.pi, np.pi, 10):
        U = oracle.expm(-1j * phi * D)
        np.testing.assert_allclose(U @ s, s, atol=1e-12)
