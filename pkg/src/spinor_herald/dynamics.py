"""Quasi-adiabatic ramp of the quadratic Zeeman shift, q(t)/q_c = q_start - t/tau.

Time is measured in units of hbar/|lambda|.  Along the ramp the Hamiltonian is
affine in q, H(t) = H_0 + q(t) (N_{+1} + N_{-1}) with the second term diagonal, and
is integrated with the fourth-order commutator-free Magnus scheme

    U(t + dt, t) = exp(-i dt (a1 H(t1) + a2 H(t2))) exp(-i dt (a2 H(t1) + a1 H(t2))),
    a1,2 = 1/4 -+ sqrt(3)/6,  t1,2 = t + (1/2 -+ sqrt(3)/6) dt.

Each factor is an exact exponential of a real symmetric tridiagonal matrix,
so every step is unitary up to rounding.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import ConfigError, ConvergenceError
from .herald import HeraldDistribution, herald_distribution
from .metrology import embed, qfi_pure
from .model import KBasisState, ModelParams, TriHamiltonian, build_hamiltonian, sector_dim
from .spectra import energy_gap, ground_state
from .transform import k_to_gh

__all__ = [
    "RampSpec",
    "RampResult",
    "RampScan",
    "propagate",
    "evolve_constant",
    "evolve_ramp",
    "ramp_scan",
]

_SQ3 = np.sqrt(3.0)
_A1, _A2 = 0.25 - _SQ3 / 6.0, 0.25 + _SQ3 / 6.0
_C1, _C2 = 0.5 - _SQ3 / 6.0, 0.5 + _SQ3 / 6.0


@dataclass(frozen=True)
class RampSpec:
    """Linear ramp from ``q_start_ratio`` to ``q_end_ratio`` (both q/q_c).

    Either ``steps`` fixes the number of Magnus steps, or the step count is
    doubled from ``initial_steps`` until fidelity and QFI ratio change by less
    than ``tol`` (at most ``max_steps``).
    """

    N: int
    tau: float
    q_start_ratio: float = 2.0
    q_end_ratio: float = 0.0
    steps: int | None = None
    tol: float = 1e-6
    initial_steps: int | None = None
    max_steps: int = 2**17

    def __post_init__(self):
        if self.N < 2:
            raise ConfigError("N must be >= 2")
        if not self.tau > 0:
            raise ConfigError("tau must be positive")
        if not self.q_start_ratio > self.q_end_ratio:
            raise ConfigError("q_start_ratio must exceed q_end_ratio")
        if self.steps is not None and self.steps < 1:
            raise ConfigError("steps must be >= 1")

    @property
    def duration(self) -> float:
        return (self.q_start_ratio - self.q_end_ratio) * self.tau

    def q_ratio(self, t):
        return self.q_start_ratio - np.asarray(t) / self.tau


@dataclass(frozen=True)
class RampResult:
    spec: RampSpec
    state: KBasisState
    fidelity: float
    qfi: float
    qfi_ratio: float
    norm_drift: float
    steps: int
    converged_change: float = float("nan")
    snapshots: dict = field(default_factory=dict, repr=False)

    def herald_distribution(self) -> HeraldDistribution:
        return herald_distribution(k_to_gh(self.state))


def _step_exp(diag: np.ndarray, off: np.ndarray, dt: float, psi: np.ndarray) -> np.ndarray:
    try:
        w, v = eigh_tridiagonal(diag, off)
    except LinAlgError as exc:
        raise ConvergenceError(f"eigendecomposition failed inside a time step: {exc}") from exc
    return v @ (np.exp(-1j * dt * w) * (v.T @ psi))


def propagate(
    psi: np.ndarray,
    H0: TriHamiltonian,
    q_of_t,
    t0: float,
    t1: float,
    steps: int,
) -> np.ndarray:
    """Integrate i d|psi>/dt = (H0 + q(t) K2) |psi> from ``t0`` to ``t1``.

    ``H0`` must be built at q = 0; ``q_of_t`` returns q/|lambda|.  ``K2`` is the
    diagonal 2k.
    """
    psi = np.asarray(psi, dtype=complex)
    if steps < 1 or t1 == t0:
        return psi.copy()
    if H0.dim == 1:
        return psi.copy()
    k2 = 2.0 * np.arange(H0.dim)
    d0, off = H0.diag, H0.offdiag
    dt = (t1 - t0) / steps
    for n in range(steps):
        t = t0 + n * dt
        q1, q2 = q_of_t(t + _C1 * dt), q_of_t(t + _C2 * dt)
        # rightmost factor acts first
        psi = _step_exp(0.5 * d0 + (_A2 * q1 + _A1 * q2) * k2, 0.5 * off, dt, psi)
        psi = _step_exp(0.5 * d0 + (_A1 * q1 + _A2 * q2) * k2, 0.5 * off, dt, psi)
    return psi


def evolve_constant(s: KBasisState, params: ModelParams, duration: float, steps: int = 1) -> KBasisState:
    """Evolve under the time-independent Hamiltonian at ``params`` (exact for any step count)."""
    H = build_hamiltonian(params)
    if H.dim == 1:
        return KBasisState(s.N, np.exp(-1j * duration * H.diag[0]) * s.amplitudes)
    w, v = eigh_tridiagonal(H.diag, H.offdiag)
    psi = s.amplitudes
    dt = duration / steps
    phase = np.exp(-1j * dt * w)
    for _ in range(steps):
        psi = v @ (phase * (v.T @ psi))
    return KBasisState(s.N, psi)


def _run(spec: RampSpec, psi0: np.ndarray, steps: int, snapshot_ratios: Sequence[float] = ()):
    N = spec.N
    H0 = build_hamiltonian(ModelParams(N, 0.0))
    qc = 2.0 * N

    def q_of_t(t):
        return qc * (spec.q_start_ratio - t / spec.tau)

    marks = sorted({float(r) for r in snapshot_ratios if spec.q_end_ratio < r < spec.q_start_ratio}, reverse=True)
    times = [(spec.q_start_ratio - r) * spec.tau for r in marks] + [spec.duration]
    snaps = {}
    psi, t_prev, used = psi0, 0.0, 0
    for r, t in zip(marks + [spec.q_end_ratio], times):
        # keep a uniform nominal step across segments
        seg_steps = max(1, int(round(steps * (t - t_prev) / spec.duration)))
        psi = propagate(psi, H0, q_of_t, t_prev, t, seg_steps)
        used += seg_steps
        t_prev = t
        if r != spec.q_end_ratio:
            snaps[r] = KBasisState(N, psi)
    return psi, used, snaps


def _observables(N: int, psi: np.ndarray, gs: KBasisState):
    fid = float(abs(np.vdot(gs.amplitudes, psi)) ** 2)
    state = KBasisState(N, psi)
    qfi = qfi_pure(embed(state), "S_x")
    return fid, qfi


def evolve_ramp(spec: RampSpec, snapshot_ratios: Sequence[float] = ()) -> RampResult:
    """Ramp the ground state at ``q_start_ratio`` down to ``q_end_ratio``.

    Returns the final state with its fidelity to the ground state at
    ``q_end_ratio``, its S_x QFI and the ratio to N(N+1)/2.  Without a fixed
    ``steps`` the step count doubles until fidelity and QFI ratio both change
    by less than ``spec.tol``; otherwise :class:`ConvergenceError` is raised
    once ``max_steps`` is exceeded.
    """
    N = spec.N
    psi0 = ground_state(ModelParams(N, spec.q_start_ratio)).amplitudes.astype(complex)
    gs_end = ground_state(ModelParams(N, spec.q_end_ratio))
    f_ref = N * (N + 1) / 2.0

    if spec.steps is not None:
        psi, used, snaps = _run(spec, psi0, spec.steps, snapshot_ratios)
        fid, qfi = _observables(N, psi, gs_end)
        change = float("nan")
    else:
        steps = spec.initial_steps or max(16, int(np.ceil(2.0 * N * spec.duration)))
        psi, used, snaps = _run(spec, psi0, steps, snapshot_ratios)
        fid, qfi = _observables(N, psi, gs_end)
        change = float("inf")
        while change >= spec.tol:
            if 2 * steps > spec.max_steps:
                raise ConvergenceError(
                    f"ramp not converged within {spec.max_steps} steps "
                    f"(last change {change:.2e}, tolerance {spec.tol:g})"
                )
            steps *= 2
            psi2, used, snaps = _run(spec, psi0, steps, snapshot_ratios)
            fid2, qfi2 = _observables(N, psi2, gs_end)
            change = max(abs(fid2 - fid), abs(qfi2 - qfi) / f_ref)
            psi, fid, qfi = psi2, fid2, qfi2

    return RampResult(
        spec=spec,
        state=KBasisState(N, psi),
        fidelity=fid,
        qfi=qfi,
        qfi_ratio=qfi / f_ref,
        norm_drift=float(abs(np.linalg.norm(psi) - 1.0)),
        steps=used,
        converged_change=change,
        snapshots=snaps,
    )


@dataclass(frozen=True)
class RampScan:
    N: int
    taus: np.ndarray
    fidelity: np.ndarray
    qfi_ratio: np.ndarray
    steps: np.ndarray
    norm_drift: np.ndarray
    inverse_critical_gap: float


def ramp_scan(N: int, taus: Sequence[float], **spec_kwargs) -> RampScan:
    """Fidelity and QFI ratio for each ramp time, plus 1/gap at q = q_c for reference."""
    results = [evolve_ramp(RampSpec(N, float(t), **spec_kwargs)) for t in taus]
    return RampScan(
        N=N,
        taus=np.asarray(taus, dtype=float),
        fidelity=np.array([r.fidelity for r in results]),
        qfi_ratio=np.array([r.qfi_ratio for r in results]),
        steps=np.array([r.steps for r in results]),
        norm_drift=np.array([r.norm_drift for r in results]),
        inverse_critical_gap=1.0 / energy_gap(ModelParams(N, 1.0)),
    )
