"""Truncated trigonometric curves with exact parameter derivatives.

A curve is a finite sum of rotating terms:
``x(th) = sum amp*cos(k*th + phase)``, ``y(th) = sum amp*sin(k*th + phase)``.
Evaluation wraps th mod 2*pi, so the curve is 2*pi-periodic and stays
accurate for large unwrapped parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectrum import Spectrum, WindowedSpectrum

__all__ = ["TrigPath", "make_trig_path", "write_reconstruction_csv"]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class TrigPath:
    """Immutable term list (k, amplitude, phase) plus provenance counts.

    ``source_n`` is the sample count of the originating dataset and
    ``source_m`` the window width, or None for the full spectrum.
    Amplitudes are >= 0 and phases lie in (-pi, pi].
    """

    k: np.ndarray
    amp: np.ndarray
    phase: np.ndarray
    source_n: int
    source_m: int | None = None

    def __post_init__(self):
        k = np.asarray(self.k, dtype=np.int64)
        amp = np.asarray(self.amp, dtype=np.float64)
        phase = np.asarray(self.phase, dtype=np.float64)
        if not (k.shape == amp.shape == phase.shape) or k.ndim != 1:
            raise ValueError("k, amp and phase must be 1-D arrays of equal length")
        if not np.all(np.isfinite(amp)) or not np.all(np.isfinite(phase)):
            raise ValueError("amplitudes and phases must be finite")
        if np.any(amp < 0):
            raise ValueError("amplitudes must be >= 0")
        if np.any(phase <= -np.pi) or np.any(phase > np.pi):
            raise ValueError("phases must lie in (-pi, pi]")
        for arr in (k, amp, phase):
            arr.setflags(write=False)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "amp", amp)
        object.__setattr__(self, "phase", phase)
        kamp = (k * amp).astype(np.float64)
        kamp.setflags(write=False)
        object.__setattr__(self, "_kamp", kamp)

    @property
    def n_terms(self) -> int:
        return self.k.size

    def eval(self, theta):
        """Curve point(s) at theta; scalars in, floats out, arrays in, arrays out."""
        th, w = self._rotations(theta)
        x = w.real @ self.amp
        y = w.imag @ self.amp
        if th.ndim == 0:
            return float(x), float(y)
        return x, y

    def eval_deriv(self, theta):
        """d/dtheta of the curve at theta."""
        th, w = self._rotations(theta)
        dx = -(w.imag @ self._kamp)
        dy = w.real @ self._kamp
        if th.ndim == 0:
            return float(dx), float(dy)
        return dx, dy

    def eval_with_deriv(self, theta):
        """(x, y, dx/dtheta, dy/dtheta) sharing one trig evaluation."""
        th, w = self._rotations(theta)
        c, s = w.real, w.imag
        x = c @ self.amp
        y = s @ self.amp
        dx = -(s @ self._kamp)
        dy = c @ self._kamp
        if th.ndim == 0:
            return float(x), float(y), float(dx), float(dy)
        return x, y, dx, dy

    def _rotations(self, theta):
        th = np.mod(np.asarray(theta, dtype=np.float64), TWO_PI)
        ang = np.multiply.outer(th, self.k) + self.phase
        return th, np.exp(1j * ang)


def make_trig_path(spec: Spectrum) -> TrigPath:
    """Build the evaluable curve from a (possibly windowed) spectrum.

    Terms with exactly zero amplitude are dropped; zero coefficients get
    phase 0 by convention, so dropping them changes nothing.
    """
    amp = np.abs(spec.a)
    phase = np.angle(spec.a)
    # angle() returns -pi for a negative real part with a -0.0 imaginary
    # part; fold that onto +pi to keep phases in (-pi, pi].
    phase = np.where(phase <= -np.pi, phase + TWO_PI, phase)
    keep = amp > 0.0
    m = spec.m if isinstance(spec, WindowedSpectrum) else None
    return TrigPath(
        k=spec.k[keep],
        amp=amp[keep],
        phase=phase[keep],
        source_n=spec.n_samples,
        source_m=m,
    )


def write_reconstruction_csv(path: TrigPath, fh, samples: int = 1024) -> None:
    """Write ``theta,x,y`` rows at `samples` uniform parameters in [0, 2*pi)."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    th = TWO_PI * np.arange(samples) / samples
    x, y = path.eval(th)
    fh.write("theta,x,y\n")
    for ti, xi, yi in zip(th, x, y):
        fh.write(f"{ti:.17g},{xi:.17g},{yi:.17g}\n")
