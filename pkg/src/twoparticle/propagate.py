"""Exact free-particle propagation of 1-D wavefunctions on uniform grids.

Units: hbar = 1. Propagation time enters only through ``delta = 2 t / m``,
so the free evolution operator in wavenumber space is exp(-i k^2 delta / 4).

Two discretisations of the same propagator are provided:

* ``transfer_propagate`` multiplies the FFT of the input by the phase above
  and transforms back on the same grid. Exact as long as the evolved packet
  stays inside the (periodic) grid.
* ``fresnel_propagate`` factorises the position-space kernel
  (i pi delta)^{-1/2} exp(i (x - x')^2 / delta) into two chirps around one
  FFT. The output grid has spacing pi delta / (N dx) and follows the packet
  as it spreads, so a fixed number of points covers long flight times.
"""

from __future__ import annotations

import cmath
import math

import numpy as np


class GridError(ValueError):
    """Raised when a grid cannot represent the propagated wavefunction."""


def centered_grid(n: int, dx: float) -> np.ndarray:
    """Grid (j - n/2) * dx, j = 0..n-1; contains x = 0 and is symmetric for j >= 1."""
    if n < 2 or n % 2:
        raise GridError(f"grid size must be even and >= 2, got {n}")
    return (np.arange(n) - n // 2) * dx


def transfer_propagate(psi0: np.ndarray, dx: float, delta: float) -> np.ndarray:
    n = psi0.size
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=dx)
    return np.fft.ifft(np.fft.fft(psi0) * np.exp(-1j * k**2 * delta / 4.0))


def fresnel_output_spacing(n: int, dx: float, delta: float) -> float:
    return math.pi * delta / (n * dx)


def fresnel_propagate(psi0: np.ndarray, dx: float, delta: float) -> tuple[np.ndarray, np.ndarray]:
    """Propagate ``psi0`` sampled on ``centered_grid(n, dx)``.

    Returns ``(y, psi)`` where ``y = centered_grid(n, pi delta / (n dx))``.
    """
    if delta <= 0:
        raise GridError("fresnel propagation needs delta > 0")
    n = psi0.size
    x = centered_grid(n, dx)
    y = centered_grid(n, fresnel_output_spacing(n, dx, delta))
    f = psi0 * np.exp(1j * x**2 / delta)
    # centred DFT: sum_j f_j exp(-2 pi i (m - n/2)(j - n/2) / n)
    s = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(f)))
    pref = dx / cmath.sqrt(1j * math.pi * delta)
    return y, pref * np.exp(1j * y**2 / delta) * s


def gaussian_packet(x, center: float, epsilon: float) -> np.ndarray:
    """Unit-norm packet (2 / (pi eps^2))^{1/4} exp(-(x - center)^2 / eps^2)."""
    x = np.asarray(x, dtype=float)
    return (2.0 / (math.pi * epsilon**2)) ** 0.25 * np.exp(-((x - center) ** 2) / epsilon**2)


def evolved_gaussian(x, center: float, epsilon: float, delta: float) -> np.ndarray:
    """Closed-form evolution of ``gaussian_packet``; used only to check the
    numerical propagators."""
    z = epsilon**2 + 1j * delta
    x = np.asarray(x, dtype=float)
    pref = (2.0 / (math.pi * epsilon**2)) ** 0.25 * np.sqrt(epsilon**2 / z)
    return pref * np.exp(-((x - center) ** 2) / z)
