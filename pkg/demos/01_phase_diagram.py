"""
Ground states across the phase diagram
======================================

Build the zero-magnetization Hamiltonian, look at the gap between the two
lowest levels as q/q_c is swept, and check how the gap at the critical point
closes with particle number.
"""
import numpy as np

from spinor_herald.model import ModelParams, build_hamiltonian
from spinor_herald.spectra import gap_scan, gap_scaling_fit, ground_state, lowest_eigenpairs, mean_n0

# %% The two-particle problem is small enough to do by hand:
# H = [[0, -sqrt2], [-sqrt2, 1]] at q = 0, eigenvalues -1 and 2.
H = build_hamiltonian(ModelParams(2, 0.0))
print(H.to_dense())
print(lowest_eigenpairs(H, 2).energies)

# %% Gap in units of N|lambda| along q/q_c.  The dips sit at the two
# transition points q = +-q_c.
qs = np.linspace(-2, 2, 41)
for N in (100, 1000):
    g = gap_scan(N, qs)
    lo = qs[qs < 0][np.argmin(g[qs < 0])]
    hi = qs[qs > 0][np.argmin(g[qs > 0])]
    print(f"N={N:5d}  gap minima at q/q_c = {lo:+.2f}, {hi:+.2f}; gap(0)/N = {g[20]:.4f}")

# %% Finite-size closing at q = q_c
fit = gap_scaling_fit([64, 128, 256, 512, 1024])
print(f"gap/(N|lambda|) ~ N^-{fit.exponent:.3f} +- {fit.stderr:.3f}")

# %% In the broken-axisymmetry phase all three modes are populated
for q in (-0.5, 0.0, 0.5):
    s = ground_state(ModelParams(1000, q))
    print(f"q/q_c={q:+.1f}  <N0>/N = {mean_n0(s) / 1000:.4f}   (1+q/q_c)/2 = {(1 + q) / 2:.2f}")
