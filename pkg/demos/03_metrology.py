"""
Quantum Fisher information
==========================

Metrological usefulness of ground states and heralded states for a few
collective rotations.
"""
import numpy as np

from spinor_herald.herald import heralded_state
from spinor_herald.metrology import embed, qfi_optimal, qfi_pure, qfi_scan
from spinor_herald.model import KBasisState, ModelParams
from spinor_herald.spectra import ground_state
from spinor_herald.transform import k_to_gh

N = 100

# %% QFI of the ground state along q/q_c for the default generator set
table = qfi_scan(N, [-2.0, -1.0, 0.0, 1.0, 2.0])
for q, g, v in table.rows():
    print(f"q/q_c={q:+.1f} {g}: F_Q/N = {v / N:8.3f}")

# %% at q = 0 every unit combination of S_x and A_y is equally good
s = embed(ground_state(ModelParams(N, 0.0)))
opt = qfi_optimal(s, ["S_x", "A_y"])
print("covariance matrix:\n", np.round(opt.covariance, 6))
print("best value", opt.value, "vs N(N+1)/2 =", N * (N + 1) / 2)

# %% twin-Fock state and J_x
print("twin-Fock:", qfi_pure(embed(KBasisState.twin_fock(N)), "J_x"), "vs", N * (N + 2) / 2)

# %% heralded states: close to the Heisenberg limit (N - N_h)^2 for small N_h
N = 500
gh = k_to_gh(ground_state(ModelParams(N, 0.0)))
for n_h in (0, 50, 100, 150, 200, 250):
    h = heralded_state(gh, n_h)
    print(f"N_h={n_h:3d}  F_Q/(N-N_h)^2 = {qfi_pure(embed(h), 'S_x') / (N - n_h) ** 2:.3f}")
