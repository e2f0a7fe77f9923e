"""Husimi Q distributions of two-mode states on the Bloch sphere.

Spin-coherent states follow the rotation convention of :mod:`transform`,

    |theta, phi> = exp(-i phi J_z) exp(-i theta J_y) |j, j>   (up to a phase)
                 ~ sum_m sqrt(C(2j, j+m)) cos(theta/2)^(j+m) sin(theta/2)^(j-m) e^{-i m phi} |j, m>,

so the north pole (theta = 0) has every atom in the reference mode and the
point (pi/2, 0) is the +x direction.  Q(theta, phi) = (2j+1)/(4 pi) |<theta, phi|psi>|^2.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lgamma
from typing import Iterable

import numpy as np

__all__ = ["SphereGrid", "coherent_state", "husimi", "husimi_mixture", "integrate"]


@dataclass(frozen=True)
class SphereGrid:
    """Product grid in (theta, phi) with quadrature weights.

    ``theta_weights`` integrate functions of theta against sin(theta) dtheta;
    ``phi_weights`` integrate over dphi.
    """

    theta: np.ndarray
    phi: np.ndarray
    theta_weights: np.ndarray
    phi_weights: np.ndarray

    def __post_init__(self):
        for name in ("theta", "phi"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 1 or arr.size == 0 or np.any(np.diff(arr) <= 0):
                raise ValueError(f"{name} samples must be strictly increasing")
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "theta_weights", np.asarray(self.theta_weights, dtype=float))
        object.__setattr__(self, "phi_weights", np.asarray(self.phi_weights, dtype=float))
        if self.theta_weights.shape != self.theta.shape or self.phi_weights.shape != self.phi.shape:
            raise ValueError("weights must match the sample arrays")
        if self.theta[0] < 0 or self.theta[-1] > np.pi or self.phi[0] < 0 or self.phi[-1] > 2 * np.pi:
            raise ValueError("samples must lie in theta in [0, pi], phi in [0, 2 pi]")

    @property
    def shape(self) -> tuple:
        return self.theta.size, self.phi.size

    @classmethod
    def gauss(cls, n_theta: int, n_phi: int) -> "SphereGrid":
        """Gauss-Legendre in cos(theta) and uniform in phi.

        Exact for Q functions of spin j when n_theta >= j + 1 and n_phi >= 2j + 1.
        """
        x, w = np.polynomial.legendre.leggauss(n_theta)
        order = np.argsort(-x)  # ascending theta
        phi = 2 * np.pi * np.arange(n_phi) / n_phi
        return cls(np.arccos(x[order]), phi, w[order], np.full(n_phi, 2 * np.pi / n_phi))

    @classmethod
    def for_spin(cls, two_j: int) -> "SphereGrid":
        """Smallest Gauss grid that integrates spin-j Q functions exactly."""
        return cls.gauss(two_j // 2 + 2, two_j + 2)

    @classmethod
    def uniform(cls, n_theta: int, n_phi: int) -> "SphereGrid":
        """Midpoint grid, convenient for plotting (quadrature only approximate)."""
        dth = np.pi / n_theta
        theta = (np.arange(n_theta) + 0.5) * dth
        phi = 2 * np.pi * np.arange(n_phi) / n_phi
        return cls(theta, phi, np.sin(theta) * dth, np.full(n_phi, 2 * np.pi / n_phi))


def _log_binom_sqrt(two_j: int) -> np.ndarray:
    n = two_j
    return np.array([0.5 * (lgamma(n + 1) - lgamma(p + 1) - lgamma(n - p + 1)) for p in range(n + 1)])


def _coherent_radial(two_j: int, theta: np.ndarray) -> np.ndarray:
    """R[t, p] = sqrt(C(2j, p)) cos(theta_t/2)^p sin(theta_t/2)^(2j-p), p = j + m."""
    p = np.arange(two_j + 1)
    c = np.cos(theta / 2)[:, None]
    s = np.sin(theta / 2)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        logc, logs = np.log(c), np.log(s)
        # 0 * log(0) must contribute 0 (0^0 = 1)
        term_c = np.where(p == 0, 0.0, p * logc)
        term_s = np.where(p == two_j, 0.0, (two_j - p) * logs)
    return np.exp(_log_binom_sqrt(two_j)[None, :] + term_c + term_s)


def coherent_state(two_j: int, theta: float, phi: float) -> np.ndarray:
    """Amplitudes of |theta, phi> indexed by n_a = j + m."""
    radial = _coherent_radial(two_j, np.array([theta]))[0]
    m = np.arange(two_j + 1) - two_j / 2.0
    return radial * np.exp(-1j * m * phi)


def husimi(amplitudes, grid: SphereGrid) -> np.ndarray:
    """Q(theta, phi) on ``grid`` for a two-mode state indexed by the reference-mode count.

    Returns an array of shape ``grid.shape``.
    """
    psi = np.asarray(amplitudes, dtype=complex)
    two_j = psi.size - 1
    m = np.arange(two_j + 1) - two_j / 2.0
    radial = _coherent_radial(two_j, grid.theta)  # (n_theta, 2j+1)
    phases = np.exp(-1j * np.outer(m, grid.phi))  # <theta,phi| contributes e^{+i m phi}
    overlap = (radial * psi[None, :]) @ phases.conj()
    return (two_j + 1) / (4 * np.pi) * np.abs(overlap) ** 2


def husimi_mixture(components: Iterable[tuple[float, np.ndarray]], grid: SphereGrid) -> np.ndarray:
    """Probability-weighted sum of per-sector Husimi functions (each with its own j)."""
    total = np.zeros(grid.shape)
    for weight, amps in components:
        total += weight * husimi(amps, grid)
    return total


def integrate(values: np.ndarray, grid: SphereGrid) -> float:
    """Quadrature of a function sampled on ``grid`` over the sphere."""
    return float(grid.theta_weights @ np.asarray(values) @ grid.phi_weights)
