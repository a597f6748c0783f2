"""Fourier-multiplier realization of the fractional operators on periodic
grids.

A `GridFunction` holds N equispaced samples of a period-`a` function.  The
discrete transform is an in-repo iterative radix-2 decimation-in-time FFT
(power-of-two lengths), so the module has no dependency beyond numpy array
arithmetic.  Frequencies are ordinary (cycles per unit length): the k-th
mode is e^{2 pi i k x / a}, i.e. xi_k = k / a, and the fractional Laplacian
acts by the symbol (2 pi |xi_k|)^{2s}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .quadrature import Field


def _check_pow2(n: int):
    if n < 8 or (n & (n - 1)) != 0:
        raise DomainError("grid length must be a power of two, at least 8")


def fft(a: np.ndarray) -> np.ndarray:
    """Iterative radix-2 decimation-in-time transform,
    F_k = sum_j a_j e^{-2 pi i j k / N}."""
    a = np.asarray(a)
    n = a.shape[0]
    _check_pow2(n)
    bits = n.bit_length() - 1
    rev = np.zeros(n, dtype=np.int64)
    for i in range(1, n):
        rev[i] = (rev[i >> 1] >> 1) | ((i & 1) << (bits - 1))
    out = a.astype(np.complex128)[rev]
    m = 2
    while m <= n:
        half = m // 2
        w = np.exp(-2j * math.pi * np.arange(half) / m)
        view = out.reshape(n // m, m)
        even = view[:, :half].copy()
        odd = view[:, half:] * w
        view[:, :half] = even + odd
        view[:, half:] = even - odd
        m *= 2
    return out


def ifft(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    return np.conj(fft(np.conj(a))) / a.shape[0]


@dataclass(frozen=True)
class GridFunction:
    """Samples of a periodic function at x_j = offset + period * j / N."""

    samples: np.ndarray
    period: float
    offset: float = 0.0

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.complex128)
        _check_pow2(arr.shape[0])
        if arr.ndim != 1:
            raise DomainError("GridFunction samples must be one-dimensional")
        if not (self.period > 0.0 and math.isfinite(self.period)):
            raise DomainError("GridFunction period must be positive and finite")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def size(self) -> int:
        return self.samples.shape[0]

    def grid_points(self) -> np.ndarray:
        n = self.size
        return self.offset + self.period * np.arange(n) / n


def wavenumbers(n: int) -> np.ndarray:
    """Integer mode numbers in transform order: 0, 1, ..., N/2-1, -N/2, ..., -1."""
    k = np.arange(n)
    k[k >= n // 2] -= n
    return k


def from_field(
    u: Field, n: int, period: float, offset: Optional[float] = None, images: int = 1
) -> GridFunction:
    """Sample the periodization  sum_m u(x + m * period)  on an N-point grid."""
    if u.dim != 1:
        raise DomainError("from_field requires a one-dimensional field")
    if images < 0:
        raise DomainError("images must be nonnegative")
    x0 = -period / 2.0 if offset is None else float(offset)
    pts = x0 + period * np.arange(n) / n
    acc = np.zeros(n, dtype=float)
    for mm in range(-images, images + 1):
        acc = acc + np.asarray(u.eval(pts + mm * period), dtype=float)
    return GridFunction(acc, period, x0)


def coefficients(g: GridFunction) -> np.ndarray:
    """Fourier coefficients c_k (transform order), u(x_j) = sum c_k e^{2 pi i k j/N}."""
    return fft(g.samples) / g.size


def _apply_multiplier(g: GridFunction, mult: Callable[[np.ndarray], np.ndarray]) -> GridFunction:
    c = fft(g.samples)
    k = wavenumbers(g.size)
    c = c * mult(k / g.period)
    out = ifft(c)
    return GridFunction(out, g.period, g.offset)


def flap_spectral(g: GridFunction, s: float) -> GridFunction:
    """Fractional Laplacian by the symbol (2 pi |xi|)^{2s}; any order s > 0."""
    if not (s > 0.0 and math.isfinite(s)):
        raise DomainError("flap_spectral: order s must be positive and finite")

    def mult(xi):
        out = (2.0 * math.pi * np.abs(xi)) ** (2.0 * s)
        return out

    return _apply_multiplier(g, mult)


def bessel_potential_spectral(g: GridFunction, s: float) -> GridFunction:
    """Bessel potential of order s: symbol (1 + 4 pi^2 |xi|^2)^{-s}."""
    if not (s > 0.0 and math.isfinite(s)):
        raise DomainError("bessel_potential_spectral: order s must be positive")
    return _apply_multiplier(
        g, lambda xi: (1.0 + 4.0 * math.pi**2 * xi * xi) ** (-s)
    )


def bessel_inverse_spectral(g: GridFunction, s: float) -> GridFunction:
    """Inverse of the Bessel potential: symbol (1 + 4 pi^2 |xi|^2)^{+s}."""
    if not (s > 0.0 and math.isfinite(s)):
        raise DomainError("bessel_inverse_spectral: order s must be positive")
    return _apply_multiplier(
        g, lambda xi: (1.0 + 4.0 * math.pi**2 * xi * xi) ** s
    )


def nonlocal_gradient_spectral(g: GridFunction, s: float) -> GridFunction:
    """Fractional gradient by the odd symbol i sign(xi) (2 pi |xi|)^s; the
    mean mode and the unpaired Nyquist mode are annihilated."""
    if not (0.0 < s < 1.0):
        raise DomainError("nonlocal_gradient_spectral: order s must lie in (0, 1)")
    n = g.size

    def mult(xi):
        out = 1j * np.sign(xi) * (2.0 * math.pi * np.abs(xi)) ** s
        out = np.asarray(out, dtype=np.complex128)
        out[0] = 0.0
        out[n // 2] = 0.0
        return out

    return _apply_multiplier(g, mult)


def real_samples(g: GridFunction, tol: float = 1e-12) -> np.ndarray:
    """Real part of the samples, verifying the imaginary residue is at the
    round-off level relative to the overall scale."""
    scale = float(np.max(np.abs(g.samples))) or 1.0
    resid = float(np.max(np.abs(g.samples.imag)))
    if resid > tol * scale:
        raise DomainError(
            "grid function is not real: imaginary residue %.3e exceeds "
            "%.1e of scale" % (resid, tol)
        )
    return g.samples.real.copy()


def value_at(g: GridFunction, x: float) -> float:
    """Trigonometric interpolation of a real grid function at x (the Nyquist
    mode is folded into a cosine so on-grid points reproduce the samples)."""
    n = g.size
    c = coefficients(g)
    k = wavenumbers(n)
    ph = 2.0 * math.pi * (x - g.offset) / g.period
    phases = np.exp(1j * k * ph)
    phases[n // 2] = math.cos(abs(k[n // 2]) * ph)
    return float(np.dot(c, phases).real)
