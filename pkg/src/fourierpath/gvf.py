"""Guiding vector field on the (x, y, theta) state space.

The curve offsets are phi1 = x - x_curve(theta), phi2 = y - y_curve(theta);
their joint zero set is the lifted desired path.  The field is

    chi = [-d(phi1)/dth, -d(phi2)/dth, 1]
          - k1*phi1*[1, 0, d(phi1)/dth]
          - k2*phi2*[0, 1, d(phi2)/dth]

which points along the curve tangent on the path and contracts toward it
elsewhere.  Whenever the first two components vanish, the third equals
1 + d(phi1)/dth^2 + d(phi2)/dth^2 >= 1, so the field has no zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .trigpath import TrigPath

__all__ = [
    "FieldState",
    "GvfParams",
    "FieldSample",
    "NonSingularityReport",
    "phi",
    "chi",
    "lyapunov_rate",
    "verify_nonsingular",
    "write_field_grid_csv",
]


@dataclass(frozen=True)
class FieldState:
    """Augmented state: planar position plus unwrapped path parameter."""

    x: float
    y: float
    theta: float

    def __post_init__(self):
        for name in ("x", "y", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class GvfParams:
    """Positive contraction gains (units 1/m^2)."""

    k1: float
    k2: float

    def __post_init__(self):
        for name in ("k1", "k2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")


@dataclass(frozen=True, eq=False)
class FieldSample:
    """Field vector plus the offsets and quadratic energy at one state.

    ``chi`` is never the zero vector: its planar rows only vanish where the
    third component is >= 1.
    """

    chi: np.ndarray
    phi1: float
    phi2: float
    lyapunov_v1: float


@dataclass(eq=False)
class NonSingularityReport:
    """Outcome of randomized zero-vector sweep plus the vanishing-row check."""

    samples: int
    min_field_norm: float
    zero_field_states: list = field(default_factory=list)
    certificate_states: int = 0
    certificate_failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.zero_field_states and not self.certificate_failures


def _field_terms(path: TrigPath, x, y, theta, params: GvfParams):
    """Offsets, their theta-derivatives and the field components.

    Broadcasts over array inputs; returns plain floats for scalar inputs.
    """
    px, py, dxdt, dydt = path.eval_with_deriv(theta)
    phi1 = x - px
    phi2 = y - py
    dphi1 = -dxdt
    dphi2 = -dydt
    cx = -dphi1 - params.k1 * phi1
    cy = -dphi2 - params.k2 * phi2
    ct = 1.0 - params.k1 * phi1 * dphi1 - params.k2 * phi2 * dphi2
    return phi1, phi2, dphi1, dphi2, cx, cy, ct


def phi(path: TrigPath, state: FieldState) -> tuple[float, float]:
    """Planar offsets from the curve point at the state's parameter."""
    px, py = path.eval(state.theta)
    return state.x - px, state.y - py


def chi(path: TrigPath, state: FieldState, params: GvfParams) -> FieldSample:
    """Evaluate the guiding field at one state."""
    phi1, phi2, _, _, cx, cy, ct = _field_terms(
        path, state.x, state.y, state.theta, params
    )
    v1 = params.k1 * phi1 * phi1 + params.k2 * phi2 * phi2
    return FieldSample(
        chi=np.array((cx, cy, ct)), phi1=phi1, phi2=phi2, lyapunov_v1=v1
    )


def lyapunov_rate(path: TrigPath, state: FieldState, params: GvfParams) -> float:
    """Time derivative of V1 = k1*phi1^2 + k2*phi2^2 along the field.

    Computed as grad(V1) . chi; it is <= 0 up to rounding at every state.
    """
    phi1, phi2, dphi1, dphi2, cx, cy, ct = _field_terms(
        path, state.x, state.y, state.theta, params
    )
    gx = 2.0 * params.k1 * phi1
    gy = 2.0 * params.k2 * phi2
    gth = 2.0 * (params.k1 * phi1 * dphi1 + params.k2 * phi2 * dphi2)
    return float(gx * cx + gy * cy + gth * ct)


def verify_nonsingular(
    path: TrigPath,
    params: GvfParams,
    box,
    samples: int,
    rng_seed: int,
    vanish_tol: float = 1e-9,
    third_component_floor: float = 1.0 - 1e-6,
) -> NonSingularityReport:
    """Randomized sweep for zero field vectors inside a state-space box.

    ``box`` is ((x_lo, x_hi), (y_lo, y_hi), (theta_lo, theta_hi)).  Besides
    the uniform samples, for every sampled theta the planar point where the
    first two field components vanish exactly is also checked, so the
    vanishing-row condition (third component >= 1) is genuinely exercised
    rather than only at states random sampling never hits.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    (xlo, xhi), (ylo, yhi), (tlo, thi) = box
    for lo, hi in ((xlo, xhi), (ylo, yhi), (tlo, thi)):
        if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
            raise ValueError("box bounds must be finite with lo <= hi")
    rng = np.random.default_rng(rng_seed)
    xs = rng.uniform(xlo, xhi, samples)
    ys = rng.uniform(ylo, yhi, samples)
    ths = rng.uniform(tlo, thi, samples)

    report = NonSingularityReport(samples=samples, min_field_norm=math.inf)
    chunk = 20_000
    for start in range(0, samples, chunk):
        sl = slice(start, min(start + chunk, samples))
        _scan_states(path, params, xs[sl], ys[sl], ths[sl], report,
                     vanish_tol, third_component_floor)
        # companion states with exactly vanishing planar rows
        px, py, dxdt, dydt = path.eval_with_deriv(ths[sl])
        _scan_states(
            path,
            params,
            px + dxdt / params.k1,
            py + dydt / params.k2,
            ths[sl],
            report,
            vanish_tol,
            third_component_floor,
        )
    return report


def _scan_states(path, params, xs, ys, ths, report, vanish_tol, floor):
    _, _, _, _, cx, cy, ct = _field_terms(path, xs, ys, ths, params)
    norm = np.sqrt(cx * cx + cy * cy + ct * ct)
    report.min_field_norm = min(report.min_field_norm, float(norm.min()))
    for i in np.nonzero(norm == 0.0)[0]:
        report.zero_field_states.append(FieldState(xs[i], ys[i], ths[i]))
    near = (np.abs(cx) < vanish_tol) & (np.abs(cy) < vanish_tol)
    report.certificate_states += int(np.count_nonzero(near))
    for i in np.nonzero(near & (ct < floor))[0]:
        report.certificate_failures.append(FieldState(xs[i], ys[i], ths[i]))


def write_field_grid_csv(
    path: TrigPath,
    params: GvfParams,
    fh,
    x_range,
    y_range,
    theta_range,
    nx: int,
    ny: int,
    ntheta: int,
) -> None:
    """Write ``x,y,theta,chix,chiy,chitheta,phi1,phi2`` over a lattice.

    Rows iterate theta-major, then x, then y, each axis on an inclusive
    linspace grid.
    """
    if min(nx, ny, ntheta) < 1:
        raise ValueError("grid sizes must be >= 1")
    xs = np.linspace(*x_range, nx)
    ys = np.linspace(*y_range, ny)
    ths = np.linspace(*theta_range, ntheta)
    fh.write("x,y,theta,chix,chiy,chitheta,phi1,phi2\n")
    for th in ths:
        px, py, dxdt, dydt = path.eval_with_deriv(float(th))
        for gx in xs:
            p1 = gx - px
            cx = dxdt - params.k1 * p1
            for gy in ys:
                p2 = gy - py
                cy = dydt - params.k2 * p2
                ct = 1.0 + params.k1 * p1 * dxdt + params.k2 * p2 * dydt
                fh.write(
                    f"{gx:.17g},{gy:.17g},{th:.17g},{cx:.17g},{cy:.17g},"
                    f"{ct:.17g},{p1:.17g},{p2:.17g}\n"
                )
