"""Heralding by counting atoms in the antisymmetric mode h.

A count N_h leaves the g and 0 modes in a pure state with M = N - N_h atoms.
Heralded amplitudes are indexed by n_g = 0 ... M (n_0 = M - n_g).  For the
two-mode rotations the g-0 pair uses mode 0 as reference mode, so that
S_z = (n_0 - n_g)/2 and S_+ = a_0^dag g.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ZeroProbabilityError
from .transform import GHBasisState, rotate_two_mode

__all__ = [
    "HeraldDistribution",
    "HeraldedState",
    "NoonFidelity",
    "MSSReport",
    "herald_distribution",
    "heralded_state",
    "heralded_states",
    "rotated_number_distribution",
    "noon_fidelity",
    "bimodality",
    "mss_report",
    "sample_heralds",
    "coarsen_distribution",
    "noisy_heralded_mixture",
]

PROBABILITY_THRESHOLD = 1e-12


@dataclass(frozen=True)
class HeraldDistribution:
    """Probability of each count N_h = 0 ... N; ``probs[N_h]``."""

    N: int
    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.shape != (self.N + 1,):
            raise ValueError("probs must have length N + 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __getitem__(self, N_h: int) -> float:
        return float(self.probs[N_h])

    def cumulative(self, upto: int) -> float:
        """P(N_h <= upto)."""
        return float(self.probs[: upto + 1].sum())

    @property
    def support(self) -> np.ndarray:
        return np.nonzero(self.probs > 0)[0]


@dataclass(frozen=True)
class HeraldedState:
    """Normalized g-0 state left by the outcome ``N_h``; amplitudes indexed by n_g."""

    N: int
    N_h: int
    amplitudes: np.ndarray
    probability: float

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.shape != (self.N - self.N_h + 1,):
            raise ValueError("amplitudes must cover n_g = 0 ... N - N_h")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def M(self) -> int:
        return self.N - self.N_h

    @property
    def spin_amplitudes(self) -> np.ndarray:
        """Amplitudes indexed by the reference-mode count n_0 (= m + M/2)."""
        return self.amplitudes[::-1]


def herald_distribution(s: GHBasisState) -> HeraldDistribution:
    """P(N_h) = sum over n_g of |amplitude(n_g, N_h)|^2."""
    probs = np.zeros(s.N + 1)
    probs[0::2][: s.amplitudes.shape[1]] = np.sum(np.abs(s.amplitudes) ** 2, axis=0)
    return HeraldDistribution(s.N, probs)


def heralded_state(s: GHBasisState, N_h: int, threshold: float = PROBABILITY_THRESHOLD) -> HeraldedState:
    """Conditional g-0 state after counting ``N_h`` atoms in mode h.

    Raises
    ------
    ZeroProbabilityError
        If the outcome has probability at or below ``threshold``.
    """
    if not 0 <= N_h <= s.N:
        raise ValueError(f"N_h must be in [0, {s.N}]")
    if N_h % 2:
        raise ZeroProbabilityError(f"odd outcome N_h={N_h} has zero probability")
    column = s.amplitudes[:, N_h // 2]
    prob = float(np.sum(np.abs(column) ** 2))
    if prob <= threshold:
        raise ZeroProbabilityError(f"outcome N_h={N_h} has probability {prob:.3e} <= {threshold:g}")
    M = s.N - N_h
    amps = np.zeros(M + 1, dtype=complex)
    amps[0::2] = column[: M // 2 + 1] / np.sqrt(prob)
    return HeraldedState(s.N, N_h, amps, prob)


def heralded_states(s: GHBasisState, threshold: float = PROBABILITY_THRESHOLD) -> list[HeraldedState]:
    """Heralded states for every outcome above ``threshold``, ordered by N_h."""
    dist = herald_distribution(s)
    return [heralded_state(s, int(n), threshold) for n in np.nonzero(dist.probs > threshold)[0]]


def rotated_number_distribution(h: HeraldedState) -> np.ndarray:
    """P(N_g) = |<N_g, M - N_g| exp(-i pi/2 S_y) |phi>|^2 for N_g = 0 ... M."""
    rotated = rotate_two_mode(h.spin_amplitudes, "y", np.pi / 2)
    return (np.abs(rotated) ** 2)[::-1]


@dataclass(frozen=True)
class NoonFidelity:
    fidelity: float
    chi: float


def noon_fidelity(h: HeraldedState) -> NoonFidelity:
    """Overlap of exp(-i pi/2 S_y)|phi> with (|M,0> + e^{i chi}|0,M>)/sqrt(2), maximized over chi.

    Kets are written |n_g, n_0>.  The maximum is (|a| + |b|)^2 / 2 where a and
    b are the rotated amplitudes on |M,0> and |0,M>.
    """
    rotated = rotate_two_mode(h.spin_amplitudes, "y", np.pi / 2)
    if h.M == 0:
        return NoonFidelity(float(abs(rotated[0]) ** 2), 0.0)
    a = rotated[0]  # n_0 = 0, n_g = M
    b = rotated[-1]  # n_0 = M, n_g = 0
    chi = float(np.angle(b) - np.angle(a)) if abs(a) and abs(b) else 0.0
    chi = float(np.mod(chi, 2 * np.pi))
    return NoonFidelity(float((abs(a) + abs(b)) ** 2 / 2.0), chi)


def _coarse(p: np.ndarray, width: int) -> np.ndarray:
    kernel = np.ones(width) / width
    return np.convolve(p, kernel, mode="same")


def bimodality(p: np.ndarray, rel_height: float = 0.05) -> float:
    """Separation of two branches of a number distribution.

    The distribution is smoothed over a window of about sqrt(M)/2 (removing
    parity fringes), its peaks above ``rel_height`` of the maximum are found,
    and the distribution is split at the lowest point between the two largest
    peaks.  The score is the distance between the branch means divided by the
    sum of branch standard deviations.  A single peak scores 0.
    """
    p = np.asarray(p, dtype=float)
    M = p.size - 1
    if M < 2 or p.sum() <= 0:
        return 0.0
    width = max(2, int(round(np.sqrt(M) / 2)))
    s = _coarse(p, width)
    interior = (s[1:-1] > s[:-2]) & (s[1:-1] >= s[2:])
    peaks = list(np.nonzero(interior)[0] + 1)
    if s[0] > s[1]:
        peaks.insert(0, 0)
    if s[-1] > s[-2]:
        peaks.append(M)
    peaks = [q for q in peaks if s[q] >= rel_height * s.max()]
    if len(peaks) < 2:
        return 0.0
    top2 = sorted(sorted(peaks, key=lambda q: s[q])[-2:])
    lo, hi = top2
    split = lo + int(np.argmin(s[lo : hi + 1]))
    # a valley no deeper than the smaller peak means one branch
    if s[split] >= min(s[lo], s[hi]) * (1 - 1e-9):
        return 0.0
    n = np.arange(M + 1)
    stats = []
    for sl in (slice(0, split + 1), slice(split + 1, M + 1)):
        w = p[sl]
        tot = w.sum()
        if tot <= 0:
            return 0.0
        mu = (w @ n[sl]) / tot
        stats.append((mu, np.sqrt(max((w @ (n[sl] - mu) ** 2) / tot, 0.0))))
    (m1, s1), (m2, s2) = stats
    return float((m2 - m1) / max(s1 + s2, 1e-300))


@dataclass(frozen=True)
class MSSReport:
    """Cumulative MSS probability and per-outcome diagnostics.

    ``cumulative`` is P(N_h <= cutoff) with the default cutoff floor(N/2).
    Per-outcome arrays cover every outcome with non-negligible probability.
    """

    N: int
    cutoff: int
    cumulative: float
    N_h: np.ndarray = field(repr=False)
    probabilities: np.ndarray = field(repr=False)
    bimodality: np.ndarray = field(repr=False)


def mss_report(s: GHBasisState, cutoff: int | None = None, threshold: float = PROBABILITY_THRESHOLD) -> MSSReport:
    cutoff = s.N // 2 if cutoff is None else int(cutoff)
    dist = herald_distribution(s)
    states = heralded_states(s, threshold)
    return MSSReport(
        N=s.N,
        cutoff=cutoff,
        cumulative=dist.cumulative(cutoff),
        N_h=np.array([h.N_h for h in states]),
        probabilities=np.array([h.probability for h in states]),
        bimodality=np.array([bimodality(rotated_number_distribution(h)) for h in states]),
    )


def sample_heralds(d: HeraldDistribution, seed: int, count: int) -> np.ndarray:
    """Independent draws of N_h.

    Uses ``numpy.random.default_rng(seed)`` (PCG64) and inverse-CDF lookup of
    one uniform variate per draw, so a fixed seed reproduces the sequence.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(d.probs)
    cdf /= cdf[-1]
    u = rng.random(count)
    return np.minimum(np.searchsorted(cdf, u, side="right"), d.N).astype(int)


def _noise_kernel(N: int, sigma: float) -> np.ndarray:
    """K[n_obs, N_h]: probability to read n_obs given N_h, truncated to [0, N]."""
    n = np.arange(N + 1)
    if sigma == 0:
        return np.eye(N + 1)
    K = np.exp(-0.5 * ((n[:, None] - n[None, :]) / sigma) ** 2)
    return K / K.sum(axis=0, keepdims=True)


def coarsen_distribution(d: HeraldDistribution, sigma: float) -> HeraldDistribution:
    """Counting statistics seen through Gaussian detection noise of width ``sigma`` atoms."""
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    return HeraldDistribution(d.N, _noise_kernel(d.N, sigma) @ d.probs)


def noisy_heralded_mixture(
    s: GHBasisState, observed: int, sigma: float, threshold: float = PROBABILITY_THRESHOLD
) -> list[tuple[float, HeraldedState]]:
    """Mixture of heralded states compatible with a noisy reading ``observed``.

    Returns ``(weight, state)`` pairs with weights P(N_h | observed).
    """
    dist = herald_distribution(s)
    post = _noise_kernel(s.N, sigma)[observed] * dist.probs
    total = post.sum()
    if total <= threshold:
        raise ZeroProbabilityError(f"reading {observed} has negligible probability")
    post /= total
    keep = [int(n) for n in np.nonzero(post > threshold)[0] if dist.probs[n] > threshold]
    weights = post[keep] / post[keep].sum()
    return [(float(w), heralded_state(s, n, threshold)) for w, n in zip(weights, keep)]
