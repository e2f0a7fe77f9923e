"""
Husimi distributions on the Bloch sphere
========================================

Tabulate Q(theta, phi) for rotated heralded states.  After the pi/2 rotation
a NOON-like state has one lobe at each pole (all atoms in g or all in the 0
mode); as N_h grows the lobes slide towards the equator and merge.
"""
import numpy as np

from spinor_herald.herald import heralded_state
from spinor_herald.model import ModelParams
from spinor_herald.quasiprob import SphereGrid, husimi, integrate
from spinor_herald.spectra import ground_state
from spinor_herald.transform import k_to_gh, rotate_two_mode

N = 300
gh = k_to_gh(ground_state(ModelParams(N, 0.0)))
grid = SphereGrid.uniform(12, 4)  # theta midpoints, phi = 0, pi/2, pi, 3pi/2

print("theta/pi:", np.round(grid.theta / np.pi, 3))
for n_h in (0, 120, 150, 180):
    h = heralded_state(gh, n_h)
    rotated = rotate_two_mode(h.spin_amplitudes)
    Q = husimi(rotated, grid)
    exact = SphereGrid.for_spin(h.M)
    norm = integrate(husimi(rotated, exact), exact)
    # meridian through phi = 0, summed over phi to ignore the fringe pattern
    profile = Q.sum(axis=1) / Q.sum()
    print(f"N_h={n_h:3d}  norm={norm:.6f}  profile:", " ".join(f"{x:.2f}" for x in profile))
