"""Fixed-step integration of the closed loop state' = chi(state).

The classic fourth-order Runge-Kutta scheme is the default; forward Euler
is kept as a cross-check.  Every step is logged together with the curve
offsets, the quadratic energy V1 and the squared distance to a reference
curve, so trajectories can be audited after the fact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gvf import FieldState, GvfParams, _field_terms
from .trigpath import TrigPath

__all__ = ["IntegrationError", "SimConfig", "Trajectory", "integrate", "convergence_time"]

_METHODS = ("rk4", "euler")
_DIVERGENCE_LIMIT = 1e12


class IntegrationError(RuntimeError):
    """Raised when the integrated state stops being finite (dt too large)."""

    def __init__(self, step: int, message: str):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class SimConfig:
    """Initial state, horizon, step size and scheme for one run."""

    eta0: FieldState
    duration: float
    dt: float
    method: str = "rk4"

    def __post_init__(self):
        if not (math.isfinite(self.duration) and self.duration > 0):
            raise ValueError("duration must be finite and > 0")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError("dt must be finite and > 0")
        if self.dt > self.duration:
            raise ValueError("dt must not exceed duration")
        if self.duration / self.dt > 1e8:
            raise ValueError("duration/dt exceeds the 1e8 step guard rail")
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}, got {self.method!r}")


@dataclass(eq=False)
class Trajectory:
    """Uniform-grid time series of the integrated state and its diagnostics."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    theta: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    v1: np.ndarray
    e_inst: np.ndarray

    def __post_init__(self):
        for arr in (self.t, self.x, self.y, self.theta,
                    self.phi1, self.phi2, self.v1, self.e_inst):
            arr.setflags(write=False)

    @property
    def n_rows(self) -> int:
        return self.t.size

    @property
    def final_state(self) -> FieldState:
        return FieldState(float(self.x[-1]), float(self.y[-1]), float(self.theta[-1]))

    def write_csv(self, fh, stride: int = 1) -> None:
        """Write ``t,x,y,theta,phi1,phi2,V1,e_inst`` rows, optionally decimated."""
        if stride < 1:
            raise ValueError("stride must be >= 1")
        fh.write("t,x,y,theta,phi1,phi2,V1,e_inst\n")
        for i in range(0, self.n_rows, stride):
            fh.write(
                f"{self.t[i]:.17g},{self.x[i]:.17g},{self.y[i]:.17g},"
                f"{self.theta[i]:.17g},{self.phi1[i]:.17g},{self.phi2[i]:.17g},"
                f"{self.v1[i]:.17g},{self.e_inst[i]:.17g}\n"
            )


def integrate(
    path: TrigPath,
    params: GvfParams,
    cfg: SimConfig,
    truth: TrigPath | None = None,
) -> Trajectory:
    """Integrate the guiding field from cfg.eta0 over cfg.duration.

    ``truth`` is the reference curve for the logged squared error
    e_inst = (x - x_ref(theta))^2 + (y - y_ref(theta))^2, evaluated at the
    trajectory's own parameter.  When omitted, the followed path itself is
    the reference, in which case e_inst = phi1^2 + phi2^2.

    Raises :class:`IntegrationError` with the offending step index when the
    state leaves the finite range, which almost always means dt is too
    large for the gains at hand.
    """
    n_steps = max(1, int(round(cfg.duration / cfg.dt)))
    dt = cfg.dt
    own_reference = truth is None or truth is path

    t = dt * np.arange(n_steps + 1)
    out = {name: np.empty(n_steps + 1) for name in
           ("x", "y", "theta", "phi1", "phi2", "v1", "e_inst")}

    s = np.array([cfg.eta0.x, cfg.eta0.y, cfg.eta0.theta], dtype=np.float64)
    k1, k2 = params.k1, params.k2

    def rhs(state):
        _, _, _, _, cx, cy, ct = _field_terms(path, state[0], state[1], state[2], params)
        return np.array((cx, cy, ct))

    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n_steps + 1):
            phi1, phi2, _, _, cx, cy, ct = _field_terms(path, s[0], s[1], s[2], params)
            out["x"][i] = s[0]
            out["y"][i] = s[1]
            out["theta"][i] = s[2]
            out["phi1"][i] = phi1
            out["phi2"][i] = phi2
            out["v1"][i] = k1 * phi1 * phi1 + k2 * phi2 * phi2
            if own_reference:
                out["e_inst"][i] = phi1 * phi1 + phi2 * phi2
            else:
                tx, ty = truth.eval(s[2])
                out["e_inst"][i] = (s[0] - tx) ** 2 + (s[1] - ty) ** 2
            if i == n_steps:
                break

            f1 = np.array((cx, cy, ct))
            if cfg.method == "rk4":
                f2 = rhs(s + 0.5 * dt * f1)
                f3 = rhs(s + 0.5 * dt * f2)
                f4 = rhs(s + dt * f3)
                s = s + (dt / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4)
            else:
                s = s + dt * f1
            if not np.all(np.isfinite(s)) or np.max(np.abs(s)) > _DIVERGENCE_LIMIT:
                raise IntegrationError(
                    i + 1,
                    f"state diverged at step {i + 1} (t = {t[min(i + 1, n_steps)]:g}); "
                    "dt is too large for these gains",
                )

    return Trajectory(t=t, **out)


def convergence_time(traj: Trajectory, tol: float) -> float | None:
    """First time from which phi1^2 + phi2^2 stays <= tol to the end.

    Returns None when the condition never holds through the final sample
    (with tol = 0 that is the typical outcome: the offsets do not hit
    floating-point zero unless the start was exactly on the path).
    """
    if not (math.isfinite(tol) and tol >= 0):
        raise ValueError("tol must be finite and >= 0")
    v = traj.phi1**2 + traj.phi2**2
    above = np.nonzero(v > tol)[0]
    if above.size == 0:
        return float(traj.t[0])
    last = int(above[-1])
    if last == v.size - 1:
        return None
    return float(traj.t[last + 1])
