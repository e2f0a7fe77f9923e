"""Spin-1 condensate in the single-mode approximation, zero-magnetization sector.

The three Zeeman modes are m_F = -1, 0, +1.  Spin-changing collisions conserve
the magnetization D = N_{+1} - N_{-1}; the D = 0 sector at fixed N is spanned by

    |k> = |k>_{-1} |N - 2k>_0 |k>_{+1},    k = 0 ... floor(N/2).

Energies are in units of |lambda| (ferromagnetic, lambda < 0) and the critical
quadratic Zeeman shift is q_c = 2 N |lambda|.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "ModelParams",
    "KBasisState",
    "TriHamiltonian",
    "build_hamiltonian",
    "apply_hamiltonian",
    "sector_dim",
]


def sector_dim(N: int) -> int:
    return N // 2 + 1


@dataclass(frozen=True)
class ModelParams:
    """Particle number and quadratic Zeeman shift.

    Parameters
    ----------
    N : int
        Total number of atoms, at least 2.
    q_ratio : float
        Quadratic Zeeman shift in units of the critical value, q / q_c.
    """

    N: int
    q_ratio: float = 0.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ConfigError(f"N must be an integer >= 2, got {self.N!r}")
        if not np.isfinite(self.q_ratio):
            raise ConfigError(f"q_ratio must be finite, got {self.q_ratio!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "q_ratio", float(self.q_ratio))

    @property
    def q_c(self) -> float:
        """Critical point in units of |lambda|."""
        return 2.0 * self.N

    @property
    def q(self) -> float:
        """q / |lambda|."""
        return self.q_c * self.q_ratio

    @classmethod
    def from_q(cls, N: int, q: float) -> "ModelParams":
        """Build from q / |lambda| instead of q / q_c."""
        return cls(N, q / (2.0 * N))


@dataclass(frozen=True)
class KBasisState:
    """Amplitudes over the zero-magnetization Fock basis |k>.

    Construction does not renormalize: images of operators are also
    represented with this type.  Use :meth:`normalized` when needed.
    """

    N: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size != sector_dim(self.N):
            raise ValueError(
                f"expected {sector_dim(self.N)} amplitudes for N={self.N}, got shape {amps.shape}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def n0(self) -> np.ndarray:
        """Occupation of m_F = 0 for each basis vector."""
        return self.N - 2 * np.arange(self.dim)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "KBasisState":
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return KBasisState(self.N, self.amplitudes / nrm)

    def overlap(self, other: "KBasisState") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    @classmethod
    def basis(cls, N: int, k: int) -> "KBasisState":
        amps = np.zeros(sector_dim(N), dtype=complex)
        amps[k] = 1.0
        return cls(N, amps)

    @classmethod
    def polar(cls, N: int) -> "KBasisState":
        """All atoms in m_F = 0."""
        return cls.basis(N, 0)

    @classmethod
    def twin_fock(cls, N: int) -> "KBasisState":
        """|N/2>_{-1} |0>_0 |N/2>_{+1}; requires even N."""
        if N % 2:
            raise ValueError("twin-Fock state needs even N")
        return cls.basis(N, N // 2)


@dataclass(frozen=True)
class TriHamiltonian:
    """Real symmetric tridiagonal Hamiltonian on the D = 0 sector (units |lambda|)."""

    params: ModelParams
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        for name in ("diag", "offdiag"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.offdiag.size != self.diag.size - 1:
            raise ValueError("offdiag must be one shorter than diag")

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def dim(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out

    def norm_inf(self) -> float:
        """Maximum absolute row sum (bounds the spectral norm)."""
        rows = np.abs(self.diag).copy()
        rows[:-1] += np.abs(self.offdiag)
        rows[1:] += np.abs(self.offdiag)
        return float(rows.max())

    def expectation(self, s: KBasisState) -> float:
        return float(np.vdot(s.amplitudes, self.matvec(s.amplitudes)).real)


def _diagonal(N: int, q: float) -> np.ndarray:
    k = np.arange(sector_dim(N), dtype=float)
    return (q + 0.5 - (N - 2.0 * k)) * 2.0 * k


def _offdiagonal(N: int) -> np.ndarray:
    # <k+1| a_{+1}^dag a_{-1}^dag a_0^2 |k> = (k+1) sqrt((N-2k)(N-2k-1))
    k = np.arange(sector_dim(N) - 1, dtype=float)
    n0 = N - 2.0 * k
    return -(k + 1.0) * np.sqrt(n0 * (n0 - 1.0))


def build_hamiltonian(params: ModelParams) -> TriHamiltonian:
    """Tridiagonal matrix of

        H = (q/|lambda| + 1/2 - N_0)(N_{+1} + N_{-1}) - (a_{+1}^dag a_{-1}^dag a_0^2 + h.c.)

    restricted to the D = 0 sector.
    """
    if not isinstance(params, ModelParams):
        raise TypeError("params must be a ModelParams")
    return TriHamiltonian(params, _diagonal(params.N, params.q), _offdiagonal(params.N))


def apply_hamiltonian(H: TriHamiltonian, s: KBasisState) -> KBasisState:
    """Unnormalized image H|s>."""
    if s.N != H.N or s.dim != H.dim:
        raise ValueError(f"dimension mismatch: H has N={H.N}, state has N={s.N}")
    return KBasisState(s.N, H.matvec(s.amplitudes))
