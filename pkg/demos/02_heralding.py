"""
Heralding on the antisymmetric mode
===================================

Rewrite the q = 0 ground state in the (g, 0, h) modes, count atoms in h and
look at what is left behind in the g-0 pair.
"""
import numpy as np

from spinor_herald.herald import (
    herald_distribution,
    heralded_state,
    mss_report,
    noon_fidelity,
    rotated_number_distribution,
    sample_heralds,
)
from spinor_herald.model import ModelParams
from spinor_herald.spectra import ground_state
from spinor_herald.transform import k_to_gh

N = 500
gh = k_to_gh(ground_state(ModelParams(N, 0.0)))
dist = herald_distribution(gh)

# only even counts ever show up
print("P(N_h) for N_h = 0..10:", np.round(dist.probs[:11], 4))
print("most likely count:", int(np.argmax(dist.probs)))

# %% the N_h = 0 outcome is, after a pi/2 rotation, almost a NOON state
h0 = heralded_state(gh, 0)
nf = noon_fidelity(h0)
print(f"NOON fidelity at N_h=0: {nf.fidelity:.4f} (relative phase {nf.chi:.3f})")

# %% rotated number distributions: two branches that drift together as N_h grows
for n_h in (0, 100, 200, 250):
    p = rotated_number_distribution(heralded_state(gh, n_h))
    M = N - n_h
    deciles = np.add.reduceat(p, np.linspace(0, M + 1, 11).astype(int)[:-1])
    print(f"N_h={n_h:3d}  ", " ".join(f"{x:.2f}" for x in deciles))

# %% how often does the protocol land in the superposition regime?
rep = mss_report(gh)
print(f"P(N_h <= N/2) = {rep.cumulative:.4f}")

# %% a simulated run of the experiment
print("ten shots:", sample_heralds(dist, seed=1, count=10))
