"""Heralded macroscopic superposition states in spin-1 Bose-Einstein condensates.

Exact numerics in the zero-magnetization sector: ground states and gaps,
the +-1 -> g/h mode change, heralding on the h count, quantum Fisher
information, quasi-adiabatic ramps and Husimi distributions.
"""
__version__ = "0.1.0"

from .errors import ConfigError, ConvergenceError, NumericalError, SpinorHeraldError, ZeroProbabilityError
from .model import KBasisState, ModelParams, TriHamiltonian, build_hamiltonian
from .spectra import energy_gap, gap_scaling_fit, ground_state, lowest_eigenpairs
from .transform import GHBasisState, gh_to_k, k_to_gh, rotate_two_mode, wigner_d_halfpi
from .herald import herald_distribution, heralded_state, noon_fidelity, rotated_number_distribution
from .metrology import GeneratorSpec, embed, qfi_optimal, qfi_pure
from .dynamics import RampSpec, evolve_ramp
from .quasiprob import SphereGrid, husimi

__all__ = [
    "__version__",
    "SpinorHeraldError", "ConfigError", "NumericalError", "ConvergenceError", "ZeroProbabilityError",
    "ModelParams", "KBasisState", "TriHamiltonian", "build_hamiltonian",
    "lowest_eigenpairs", "ground_state", "energy_gap", "gap_scaling_fit",
    "GHBasisState", "k_to_gh", "gh_to_k", "wigner_d_halfpi", "rotate_two_mode",
    "herald_distribution", "heralded_state", "rotated_number_distribution", "noon_fidelity",
    "GeneratorSpec", "embed", "qfi_pure", "qfi_optimal",
    "RampSpec", "evolve_ramp",
    "SphereGrid", "husimi",
]
