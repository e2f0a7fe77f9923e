"""Low-lying spectrum of the zero-magnetization Hamiltonian."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import ConvergenceError
from .model import KBasisState, ModelParams, TriHamiltonian, build_hamiltonian

__all__ = [
    "SpectralResult",
    "GapScaling",
    "lowest_eigenpairs",
    "ground_state",
    "energy_gap",
    "gap_scan",
    "gap_scaling_fit",
    "mean_n0",
]

RESIDUAL_TOL = 1e-9
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class SpectralResult:
    """Lowest ``m`` eigenpairs, energies ascending.

    ``vectors[:, i]`` is the i-th eigenvector, fixed so that its largest
    magnitude amplitude is real and positive (first such index on ties).
    ``near_degenerate[i]`` flags that levels i and i+1 are closer than
    ``1e-10 * ||H||``.
    """

    N: int
    energies: np.ndarray
    vectors: np.ndarray
    near_degenerate: np.ndarray

    @property
    def m(self) -> int:
        return self.energies.size

    @property
    def states(self) -> list[KBasisState]:
        return [KBasisState(self.N, self.vectors[:, i]) for i in range(self.m)]

    @property
    def ground(self) -> KBasisState:
        return KBasisState(self.N, self.vectors[:, 0])

    @property
    def gap(self) -> float:
        if self.m < 2:
            raise ValueError("gap needs at least two eigenpairs")
        return float(self.energies[1] - self.energies[0])


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def lowest_eigenpairs(H: TriHamiltonian, m: int = 2) -> SpectralResult:
    """Compute the ``m`` lowest eigenpairs of a tridiagonal Hamiltonian.

    Uses LAPACK's tridiagonal solver (MRRR) through SciPy; every returned
    pair is checked against the residual bound ``||Hv - Ev|| <= 1e-9 ||H||``
    and orthonormality to 1e-10, otherwise :class:`ConvergenceError` is raised.
    """
    if not 1 <= m <= H.dim:
        raise ValueError(f"m must be in [1, {H.dim}], got {m}")
    try:
        if H.dim == 1:
            w, v = np.array([H.diag[0]]), np.ones((1, 1))
        else:
            w, v = eigh_tridiagonal(H.diag, H.offdiag, select="i", select_range=(0, m - 1))
    except LinAlgError as exc:
        raise ConvergenceError(f"tridiagonal eigensolver failed: {exc}") from exc

    v = _fix_signs(v)
    scale = max(H.norm_inf(), 1.0)
    resid = np.linalg.norm(np.column_stack([H.matvec(v[:, i]) for i in range(m)]) - v * w, axis=0)
    if np.any(resid > RESIDUAL_TOL * scale):
        raise ConvergenceError(f"eigenpair residual {resid.max():.3e} exceeds {RESIDUAL_TOL} * ||H||")
    if np.abs(v.T @ v - np.eye(m)).max() > 1e-10:
        raise ConvergenceError("eigenvectors lost orthonormality")

    near = np.zeros(m, dtype=bool)
    near[:-1] = np.diff(w) < DEGENERACY_TOL * scale
    return SpectralResult(H.N, w, v, near)


def ground_state(params: ModelParams) -> KBasisState:
    return lowest_eigenpairs(build_hamiltonian(params), 1).ground


def energy_gap(params: ModelParams) -> float:
    """E_1 - E_0 in units of |lambda|."""
    return lowest_eigenpairs(build_hamiltonian(params), 2).gap


def gap_scan(N: int, q_ratios: Sequence[float]) -> np.ndarray:
    """Gap in units of N|lambda| along a q/q_c grid."""
    return np.array([energy_gap(ModelParams(N, q)) / N for q in q_ratios])


@dataclass(frozen=True)
class GapScaling:
    """Least-squares fit of log(gap / N|lambda|) against log N.

    ``exponent`` is the closing exponent alpha in gap/(N|lambda|) ~ N^-alpha.
    """

    N: np.ndarray
    gaps: np.ndarray
    slope: float
    stderr: float
    intercept: float

    @property
    def exponent(self) -> float:
        return -self.slope


def gap_scaling_fit(N_values: Sequence[int], q_ratio: float = 1.0) -> GapScaling:
    Ns = np.asarray(N_values, dtype=int)
    if Ns.size < 3:
        raise ValueError("need at least three particle numbers for a fit with an error estimate")
    gaps = np.array([energy_gap(ModelParams(int(n), q_ratio)) / n for n in Ns])
    fit = stats.linregress(np.log(Ns), np.log(gaps))
    return GapScaling(Ns, gaps, float(fit.slope), float(fit.stderr), float(fit.intercept))


def mean_n0(s: KBasisState) -> float:
    """<N_0> = sum_k |c_k|^2 (N - 2k) for a normalized state."""
    p = np.abs(s.amplitudes) ** 2
    return float(p @ s.n0)
