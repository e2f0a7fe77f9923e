"""Collective operators on the full fixed-N three-mode space and quantum Fisher information.

States live in one of two mode frames:

* ``"pm"``: modes (m_F = -1, 0, +1)
* ``"gh"``: modes (g, 0, h)

A :class:`FullBasisState` stores one amplitude per occupation triple
``(n_first, n_0, n_third)`` with ``n_0 = N - n_first - n_third``, flattened in
lexicographic order of ``(n_first, n_third)``.

Every generator is a one-body operator ``G = sum_ij M_ij b_i^dag b_j`` and is
carried as its 3x3 coefficient matrix ``M``; changing frame conjugates ``M``
by the g/h mode transformation, so any generator acts on either frame.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .herald import HeraldedState
from .model import KBasisState, ModelParams, sector_dim
from .spectra import ground_state
from .transform import GHBasisState, wigner_d_halfpi

__all__ = [
    "FRAMES",
    "FockSpace",
    "FullBasisState",
    "GeneratorSpec",
    "QFIOptimum",
    "QFITable",
    "embed",
    "project_k",
    "change_frame",
    "apply_generator",
    "expectation",
    "covariance_matrix",
    "qfi_pure",
    "qfi_optimal",
    "qfi_scan",
    "apply_pseudospin_hamiltonian",
]

FRAMES = ("pm", "gh")

_S = 1.0 / np.sqrt(2.0)
# a = U b with a = (a_{-1}, a_0, a_{+1}) and b = (g, 0, h)
_U = np.array([[_S, 0.0, -_S], [0.0, 1.0, 0.0], [_S, 0.0, _S]])


def _unit(i, j, c=1.0):
    M = np.zeros((3, 3), dtype=complex)
    M[i, j] = c
    return M


# index 0 = g or m_F=-1, 1 = m_F=0, 2 = h or m_F=+1
_NAMED = {
    "S_x": ("gh", 0.5 * (_unit(1, 0) + _unit(0, 1))),
    "S_y": ("gh", (_unit(1, 0) - _unit(0, 1)) / 2j),
    "S_z": ("gh", 0.5 * (_unit(1, 1) - _unit(0, 0))),
    "A_x": ("gh", 0.5 * (_unit(1, 2) + _unit(2, 1))),
    "A_y": ("gh", (_unit(1, 2) - _unit(2, 1)) / 2j),
    "A_z": ("gh", 0.5 * (_unit(1, 1) - _unit(2, 2))),
    "J_x": ("pm", 0.5 * (_unit(2, 0) + _unit(0, 2))),
    "J_y": ("pm", (_unit(2, 0) - _unit(0, 2)) / 2j),
    "J_z": ("pm", 0.5 * (_unit(2, 2) - _unit(0, 0))),
    "N_0": ("pm", _unit(1, 1)),
    "N_g": ("gh", _unit(0, 0)),
    "N_h": ("gh", _unit(2, 2)),
    "D": ("pm", _unit(2, 2) - _unit(0, 0)),
}


def _convert(M: np.ndarray, src: str, dst: str) -> np.ndarray:
    if src == dst:
        return M
    if src == "gh":
        return _U @ M @ _U.T
    return _U.T @ M @ _U


@dataclass(frozen=True)
class GeneratorSpec:
    """A real linear combination of named collective operators.

    >>> GeneratorSpec.named("S_x")
    GeneratorSpec(terms=(('S_x', 1.0),))
    >>> g = GeneratorSpec.combination({"S_x": 0.6, "A_y": 0.8})
    """

    terms: tuple

    def __post_init__(self):
        terms = tuple((str(n), float(c)) for n, c in self.terms)
        if not terms:
            raise ValueError("empty generator")
        for name, c in terms:
            if name not in _NAMED:
                raise ValueError(f"unknown generator {name!r}; choose from {sorted(_NAMED)}")
            if not np.isfinite(c):
                raise ValueError("generator coefficients must be finite")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def named(cls, name: str) -> "GeneratorSpec":
        return cls(((name, 1.0),))

    @classmethod
    def combination(cls, coeffs: dict) -> "GeneratorSpec":
        return cls(tuple(coeffs.items()))

    @property
    def label(self) -> str:
        if len(self.terms) == 1 and self.terms[0][1] == 1.0:
            return self.terms[0][0]
        return "+".join(f"{c:g}*{n}" for n, c in self.terms)

    def matrix(self, frame: str) -> np.ndarray:
        """One-body coefficient matrix in the given frame."""
        if frame not in FRAMES:
            raise ValueError(f"incompatible mode frame {frame!r}")
        M = np.zeros((3, 3), dtype=complex)
        for name, c in self.terms:
            native, Mn = _NAMED[name]
            M += c * _convert(Mn, native, frame)
        return M


def _as_generator(g) -> GeneratorSpec:
    return g if isinstance(g, GeneratorSpec) else GeneratorSpec.named(g)


class FockSpace:
    """Occupation bookkeeping for N bosons in three modes."""

    def __init__(self, N: int):
        self.N = int(N)
        first = np.repeat(np.arange(N + 1), np.arange(N + 1, 0, -1))
        third = np.concatenate([np.arange(N + 1 - a) for a in range(N + 1)])
        self.occ = np.stack([first, N - first - third, third])
        self.dim = first.size
        self._hops = {}

    def index(self, first, third):
        first = np.asarray(first)
        return first * (self.N + 1) - first * (first - 1) // 2 + np.asarray(third)

    def hop(self, i: int, j: int):
        """Source indices, target indices and matrix elements of b_i^dag b_j (i != j)."""
        key = (i, j)
        if key not in self._hops:
            n = self.occ
            src = np.nonzero(n[j] > 0)[0]
            tgt_occ = n[:, src].copy()
            coef = np.sqrt(tgt_occ[j] * (tgt_occ[i] + 1.0))
            tgt_occ[j] -= 1
            tgt_occ[i] += 1
            self._hops[key] = (src, self.index(tgt_occ[0], tgt_occ[2]), coef)
        return self._hops[key]


@lru_cache(maxsize=4)
def _space(N: int) -> FockSpace:
    return FockSpace(N)


@dataclass(frozen=True)
class FullBasisState:
    """Amplitudes over every three-mode occupation at fixed N."""

    N: int
    frame: str
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.frame not in FRAMES:
            raise ValueError(f"frame must be one of {FRAMES}")
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != ((self.N + 1) * (self.N + 2) // 2,):
            raise ValueError("wrong number of amplitudes for N")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def space(self) -> FockSpace:
        return _space(self.N)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, n_first: int, n_third: int) -> complex:
        return complex(self.amplitudes[self.space.index(n_first, n_third)])

    def as_dict(self, tol: float = 0.0) -> dict:
        """``{(n_first, n_0, n_third): amplitude}`` for entries above ``tol``."""
        occ = self.space.occ
        keep = np.nonzero(np.abs(self.amplitudes) > tol)[0]
        return {tuple(int(x) for x in occ[:, i]): complex(self.amplitudes[i]) for i in keep}

    @classmethod
    def from_dict(cls, N: int, frame: str, amps: dict) -> "FullBasisState":
        sp = _space(N)
        out = np.zeros(sp.dim, dtype=complex)
        for (a, b, c), v in amps.items():
            if a + b + c != N:
                raise ValueError(f"occupation {(a, b, c)} does not sum to N={N}")
            out[sp.index(a, c)] = v
        return cls(N, frame, out)


def embed(s) -> FullBasisState:
    """Copy a sector, g/h or heralded state into the full three-mode space."""
    if isinstance(s, KBasisState):
        sp = _space(s.N)
        k = np.arange(sector_dim(s.N))
        out = np.zeros(sp.dim, dtype=complex)
        out[sp.index(k, k)] = s.amplitudes
        return FullBasisState(s.N, "pm", out)
    if isinstance(s, GHBasisState):
        sp = _space(s.N)
        K = s.N // 2
        i, j = np.indices((K + 1, K + 1))
        mask = i + j <= K
        out = np.zeros(sp.dim, dtype=complex)
        out[sp.index(2 * i[mask], 2 * j[mask])] = s.amplitudes[mask]
        return FullBasisState(s.N, "gh", out)
    if isinstance(s, HeraldedState):
        sp = _space(s.N)
        out = np.zeros(sp.dim, dtype=complex)
        out[sp.index(np.arange(s.M + 1), s.N_h)] = s.amplitudes
        return FullBasisState(s.N, "gh", out)
    raise TypeError(f"cannot embed {type(s).__name__}")


def project_k(s: FullBasisState) -> KBasisState:
    """Restrict a "pm"-frame state to its amplitudes on the |k> basis."""
    if s.frame != "pm":
        raise ValueError("project_k needs a state in the 'pm' frame")
    k = np.arange(sector_dim(s.N))
    return KBasisState(s.N, s.amplitudes[s.space.index(k, k)])


def change_frame(s: FullBasisState) -> FullBasisState:
    """Re-express a state in the other mode frame ("pm" <-> "gh").

    Within each block of fixed n_0 the +1/-1 pair carries spin j = (N - n_0)/2
    and g^dag = R a_{+1}^dag R^dag, -h^dag = R a_{-1}^dag R^dag with
    R = exp(-i pi/2 J_y).  Hence psi_gh(n_g, n_h) = (-1)^{n_h} (d^T psi_pm)(n_{+1} = n_g).
    """
    sp = s.space
    out = np.zeros(sp.dim, dtype=complex)
    for M in range(s.N + 1):
        p = np.arange(M + 1)  # n_third for pm (=n_{+1}) or n_g for gh
        d = wigner_d_halfpi(M)
        sign = (-1.0) ** (M - p)
        if s.frame == "pm":
            v = s.amplitudes[sp.index(M - p, p)]  # indexed by n_{+1}
            w = sign * (d.T @ v)  # indexed by n_g, n_h = M - n_g
            out[sp.index(p, M - p)] = w
        else:
            w = s.amplitudes[sp.index(p, M - p)]
            v = d @ (sign * w)
            out[sp.index(M - p, p)] = v
    return FullBasisState(s.N, "gh" if s.frame == "pm" else "pm", out)


def _apply_matrix(M: np.ndarray, s: FullBasisState) -> np.ndarray:
    sp = s.space
    psi = s.amplitudes
    out = np.zeros_like(psi)
    for i in range(3):
        if M[i, i] != 0:
            out += M[i, i] * sp.occ[i] * psi
        for j in range(3):
            if i != j and M[i, j] != 0:
                src, tgt, coef = sp.hop(i, j)
                out[tgt] += M[i, j] * coef * psi[src]
    return out


def apply_generator(g, s: FullBasisState) -> FullBasisState:
    """Unnormalized image G|s> by exact ladder-operator action."""
    g = _as_generator(g)
    return FullBasisState(s.N, s.frame, _apply_matrix(g.matrix(s.frame), s))


def expectation(s: FullBasisState, g) -> float:
    g = _as_generator(g)
    return float(np.vdot(s.amplitudes, _apply_matrix(g.matrix(s.frame), s)).real)


def qfi_pure(s: FullBasisState, g) -> float:
    """F_Q = 4 (<G^2> - <G>^2) for a normalized pure state."""
    g = _as_generator(g)
    Gpsi = _apply_matrix(g.matrix(s.frame), s)
    mean = np.vdot(s.amplitudes, Gpsi).real
    second = np.vdot(Gpsi, Gpsi).real
    return max(0.0, 4.0 * (second - mean**2))


def covariance_matrix(s: FullBasisState, gens: Sequence) -> np.ndarray:
    """Gamma_ab = Re<G_a G_b> - <G_a><G_b>."""
    images = [_apply_matrix(_as_generator(g).matrix(s.frame), s) for g in gens]
    means = np.array([np.vdot(s.amplitudes, v).real for v in images])
    n = len(images)
    gram = np.empty((n, n))
    for a in range(n):
        for b in range(a, n):
            gram[a, b] = gram[b, a] = np.vdot(images[a], images[b]).real
    return gram - np.outer(means, means)


@dataclass(frozen=True)
class QFIOptimum:
    value: float
    coefficients: np.ndarray
    covariance: np.ndarray
    generators: tuple

    @property
    def generator(self) -> GeneratorSpec:
        return GeneratorSpec(
            tuple((g.label if isinstance(g, GeneratorSpec) else g, c) for g, c in zip(self.generators, self.coefficients))
        )


def qfi_optimal(s: FullBasisState, gens: Sequence, tol: float = 1e-10) -> QFIOptimum:
    """Largest QFI over unit combinations of the given generators.

    The value is 4 lambda_max(Gamma).  When the top eigenvalue is degenerate
    the returned direction is the normalized projection of the first
    generator (then the second, ...) onto the top eigenspace.
    """
    gens = tuple(gens)
    if not gens:
        raise ValueError("need at least one generator")
    cov = covariance_matrix(s, gens)
    w, V = np.linalg.eigh(cov)
    top = w[-1]
    space = V[:, w >= top - tol * max(1.0, abs(top))]
    coeffs = space[:, -1]
    for a in range(len(gens)):
        proj = space @ space[a]
        if np.linalg.norm(proj) > 1e-8:
            coeffs = proj / np.linalg.norm(proj)
            break
    return QFIOptimum(4.0 * float(top), coeffs, cov, gens)


@dataclass(frozen=True)
class QFITable:
    N: int
    q_ratios: np.ndarray
    generators: tuple
    values: np.ndarray  # shape (len(q_ratios), len(generators))

    def rows(self) -> Iterable[tuple]:
        for a, q in enumerate(self.q_ratios):
            for b, g in enumerate(self.generators):
                yield float(q), g, float(self.values[a, b])


DEFAULT_SCAN_GENERATORS = ("S_x", "A_y", "J_x", "J_y")


def qfi_scan(N: int, q_ratios: Sequence[float], generators: Sequence[str] = DEFAULT_SCAN_GENERATORS) -> QFITable:
    """Ground-state QFI for each (q/q_c, generator) pair."""
    qs = np.asarray(q_ratios, dtype=float)
    gens = tuple(generators)
    vals = np.empty((qs.size, len(gens)))
    for a, q in enumerate(qs):
        full = embed(ground_state(ModelParams(N, q)))
        for b, g in enumerate(gens):
            vals[a, b] = qfi_pure(full, g)
    return QFITable(N, qs, gens, vals)


def apply_pseudospin_hamiltonian(params: ModelParams, s: FullBasisState) -> FullBasisState:
    """-2(S_x^2 + q S_z / 3|lambda|) - 2(A_y^2 + q A_z / 3|lambda|) applied by operator composition."""
    c = params.q / 3.0
    out = np.zeros_like(s.amplitudes)
    for quad, lin in (("S_x", "S_z"), ("A_y", "A_z")):
        once = apply_generator(quad, s)
        out += -2.0 * apply_generator(quad, once).amplitudes
        out += -2.0 * c * apply_generator(lin, s).amplitudes
    return FullBasisState(s.N, s.frame, out)
