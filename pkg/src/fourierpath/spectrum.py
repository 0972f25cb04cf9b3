"""Spectra of planar paths: forward/inverse transform, windowing, tail energy.

Conventions (they differ from most FFT libraries, so read this once):

* The 1/N factor sits on the *forward* transform:
  ``a_k = (1/N) * sum_n c[n] exp(-2j*pi*k*n/N)`` with ``c[n] = x[n] + 1j*y[n]``.
* Coefficients are stored on the signed index set: ``{-(N-1)/2 .. (N-1)/2}``
  for odd N and ``{-N/2+1 .. N/2}`` for even N.  An N-point transform has a
  single bin at the half-sample rate, so for even N it is stored once, at
  ``+N/2``; ``-N/2`` is the same bin.  Re-indexing moves unsigned bin N-k to
  signed index -k without any arithmetic.
* A "window of width m" keeps the signed indices with ``2*|k| <= m``: for
  even m that is ``-m/2 .. m/2`` (m+1 coefficients, e.g. m=100 keeps
  -50..50), for odd m it is ``-(m-1)/2 .. (m-1)/2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fft import fft
from .pathdata import PathSamples

__all__ = [
    "Spectrum",
    "WindowedSpectrum",
    "dft",
    "idft",
    "apply_window",
    "tail_energy",
    "window_bounds",
    "write_spectrum_csv",
]


def window_bounds(width: int) -> tuple[int, int]:
    """Inclusive (lo, hi) signed-index bounds of the symmetric window."""
    if not isinstance(width, (int, np.integer)) or width < 1:
        raise ValueError(f"window width must be an integer >= 1, got {width!r}")
    hi = int(width) // 2
    return -hi, hi


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Complex coefficients over signed indices; indices not stored are zero.

    ``k`` is strictly increasing, ``a`` holds the matching coefficients and
    ``n_samples`` is the length N of the originating dataset.
    """

    k: np.ndarray
    a: np.ndarray
    n_samples: int

    def __post_init__(self):
        k = np.asarray(self.k, dtype=np.int64)
        a = np.asarray(self.a, dtype=np.complex128)
        if k.ndim != 1 or a.shape != k.shape:
            raise ValueError("k and a must be 1-D arrays of equal length")
        if k.size and np.any(np.diff(k) <= 0):
            raise ValueError("indices must be strictly increasing")
        n = int(self.n_samples)
        if n < 2:
            raise ValueError("n_samples must be >= 2")
        lo = -(n // 2) + 1 if n % 2 == 0 else -((n - 1) // 2)
        hi = n // 2
        if k.size and (k[0] < lo or k[-1] > hi):
            raise ValueError(f"indices must lie in [{lo}, {hi}] for n_samples={n}")
        if not np.all(np.isfinite(a)):
            raise ValueError("coefficients must be finite")
        for arr in (k, a):
            arr.setflags(write=False)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "n_samples", n)

    def coefficient(self, k: int) -> complex:
        """Coefficient at signed index k (zero when not stored)."""
        pos = int(np.searchsorted(self.k, k))
        if pos < self.k.size and self.k[pos] == k:
            return complex(self.a[pos])
        return 0j

    def energy(self) -> float:
        """Total spectral energy, sum of |a_k|^2."""
        return float(np.sum(np.abs(self.a) ** 2))


@dataclass(frozen=True, eq=False)
class WindowedSpectrum(Spectrum):
    """A spectrum restricted to the symmetric window of width ``m``."""

    m: int

    def __post_init__(self):
        super().__post_init__()
        if not isinstance(self.m, (int, np.integer)) or self.m < 1:
            raise ValueError(f"window width must be an integer >= 1, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))


def dft(samples: PathSamples) -> Spectrum:
    """Forward transform of a path, coefficients on the signed index set."""
    n = samples.n_samples
    c = samples.x + 1j * samples.y
    coeffs = fft(c) / n
    unsigned = np.arange(n)
    signed = np.where(unsigned <= n // 2, unsigned, unsigned - n)
    order = np.argsort(signed)
    return Spectrum(k=signed[order], a=coeffs[order], n_samples=n)


def idft(spec: Spectrum) -> PathSamples:
    """Synthesize the N samples ``c[n] = sum_k a_k exp(2j*pi*k*n/N)``.

    Missing indices count as zero, so a windowed spectrum yields its
    truncated reconstruction sampled at the original N parameters.
    """
    n = spec.n_samples
    bins = np.zeros(n, dtype=np.complex128)
    bins[np.mod(spec.k, n)] = spec.a
    c = np.conj(fft(np.conj(bins)))
    return PathSamples(np.column_stack((c.real, c.imag)))


def apply_window(spec: Spectrum, m: int) -> WindowedSpectrum:
    """Keep exactly the coefficients inside the width-m window, drop the rest.

    The kept coefficients are passed through unchanged, so re-applying the
    same window is the identity.
    """
    lo, hi = _validated_bounds(spec, m)
    mask = (spec.k >= lo) & (spec.k <= hi)
    return WindowedSpectrum(
        k=spec.k[mask], a=spec.a[mask], n_samples=spec.n_samples, m=int(m)
    )


def tail_energy(spec: Spectrum, m: int) -> float:
    """Spectral energy outside the width-m window: sum of |a_k|^2 there."""
    lo, hi = _validated_bounds(spec, m)
    outside = (spec.k < lo) | (spec.k > hi)
    return float(np.sum(np.abs(spec.a[outside]) ** 2))


def write_spectrum_csv(spec: Spectrum, fh) -> None:
    """Write ``k,re,im,magnitude`` lines sorted by k ascending."""
    fh.write("k,re,im,magnitude\n")
    for k, a in zip(spec.k, spec.a):
        fh.write(f"{int(k)},{a.real:.17g},{a.imag:.17g},{abs(a):.17g}\n")


def _validated_bounds(spec: Spectrum, m: int) -> tuple[int, int]:
    lo, hi = window_bounds(m)
    if m > spec.n_samples:
        raise ValueError(
            f"window width {m} exceeds the index range of an "
            f"{spec.n_samples}-sample spectrum"
        )
    return lo, hi
