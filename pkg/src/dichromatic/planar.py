"""Separable two-dimensional interference: reduced action, contours, trajectory.

psi(x, y) = [A exp(i kx x) + B exp(-i kx x - i beta)] exp(i ky y).  The
x factor is the one-dimensional dichromatic wave with k = kx, so its
unwrapped phase is borrowed from :mod:`dichromatic.qshje`; y is cyclic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .dynamics import reversal_factor
from .errors import DegenerateAmplitudes, InvalidRange, InvalidSpec, ZeroGradient
from .qshje import ActionValue, reduced_action
from .wave_core import DichromaticSpec, born_density, eval_superposition, require_running


@dataclass(frozen=True)
class PlanarSpec:
    amplitude_a: float = 1.0
    amplitude_b: float = 0.5
    phase_shift: float = 0.0
    kx: float = math.pi / 2
    ky: float = math.pi / 2
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if self.ky <= 0 or not math.isfinite(self.ky):
            raise InvalidSpec(f"ky must be > 0, got {self.ky}")
        # remaining checks are shared with the 1D spec
        self.x_spec

    @property
    def x_spec(self) -> DichromaticSpec:
        """The x factor as a 1D dichromatic problem with k = kx."""
        return DichromaticSpec(self.amplitude_a, self.amplitude_b, self.kx,
                               self.phase_shift, self.hbar, self.mass, 0.0)

    @property
    def energy(self) -> float:
        return self.hbar ** 2 * (self.kx ** 2 + self.ky ** 2) / (2 * self.mass)

    def with_(self, **changes) -> "PlanarSpec":
        return replace(self, **changes)


def eval_psi_planar(spec: PlanarSpec, x, y):
    y = np.asarray(y, dtype=float)
    return eval_superposition(spec.x_spec, x) * np.exp(1j * spec.ky * y)


def reduced_action_2d(spec: PlanarSpec, x, y) -> ActionValue:
    """W_i = hbar [unwrapped arctan phase in x + ky y]."""
    xs = reduced_action(spec.x_spec, x)
    y = np.asarray(y, dtype=float)
    return ActionValue(xs.value + spec.hbar * spec.ky * y, xs.branch_count)


def _slope_factor(spec: PlanarSpec, x):
    # (A^2 - B^2)/rho(x), with rho the x-factor interference density
    return spec.x_spec.running_weight / born_density(spec.x_spec, x)


def trajectory_y(spec: PlanarSpec, y0, x):
    """y(x) = y0 + (A^2 - B^2)(ky x / kx) / (A^2 + B^2 + 2AB cos(2kx x + beta))."""
    require_running(spec.x_spec, allow_reversed=True)
    x = np.asarray(x, dtype=float)
    return y0 + _slope_factor(spec, x) * (spec.ky / spec.kx) * x


def trajectory_slope(spec: PlanarSpec, x):
    """dy/dx along the trajectory; zero at the y-direction turning points."""
    require_running(spec.x_spec, allow_reversed=True)
    return (spec.ky / spec.kx) * _slope_factor(spec, x) * reversal_factor(spec.x_spec, x)


def turning_loci_2d(spec: PlanarSpec) -> tuple[float, float]:
    """Slopes of the y_u and y_l lines, independent of beta."""
    require_running(spec.x_spec)
    a, b = spec.amplitude_a, spec.amplitude_b
    ratio = spec.ky / spec.kx
    return (a + b) / (a - b) * ratio, (a - b) / (a + b) * ratio


def tangency_angle(spec: PlanarSpec, y0, x):
    """Angle in [0, pi/2] between the trajectory and the local contour of W.

    pi/2 means the trajectory crosses the contour at right angles (the
    classical situation), 0 means it runs along the contour.  The trajectory
    does not depend on y0 for its direction, only its position.
    """
    require_running(spec.x_spec)
    x = np.asarray(x, dtype=float)
    s = trajectory_slope(spec, x)
    px = spec.hbar * spec.kx * _slope_factor(spec, x)
    py = spec.hbar * spec.ky
    if np.any((px == 0) & (py == 0)):
        raise ZeroGradient("grad W vanishes")
    # trajectory (1, s); contour tangent perpendicular to (px, py): (py, -px)
    dot = py - s * px
    cross = -px - s * py
    return np.arctan2(np.abs(cross), np.abs(dot))


@dataclass
class ContourPolyline:
    action_value: float
    x: np.ndarray
    y: np.ndarray
    b: float | None = field(default=None)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.y.tolist()))


def contour_of_action(spec: PlanarSpec, w_target: float, x_min: float, x_max: float,
                      n: int) -> ContourPolyline:
    """Solve W_i(x, y) = w_target for y at n uniform x values."""
    if spec.amplitude_a == spec.amplitude_b:
        raise DegenerateAmplitudes("A = B: use contour_family for the square-step limit")
    if not x_min < x_max or n < 2:
        raise InvalidRange(f"need x_min < x_max and n >= 2, got [{x_min}, {x_max}], n={n}")
    x = np.linspace(x_min, x_max, n)
    phase = reduced_action(spec.x_spec, x).value / spec.hbar
    y = (w_target / spec.hbar - phase) / spec.ky
    return ContourPolyline(w_target, x, y, spec.amplitude_b)


def standing_phase(spec: PlanarSpec, x):
    """Limit of the unwrapped x phase as B -> A: a staircase of pi steps.

    Constant -beta/2 (mod pi) between the nulls of cos(kx x + beta/2) and
    stepping up by pi at each null, anchored so that x = 0 sits on the
    principal branch.
    """
    x = np.asarray(x, dtype=float)
    half = spec.kx * x + 0.5 * spec.phase_shift
    return -0.5 * spec.phase_shift + math.pi * np.floor(half / math.pi + 0.5)


def square_step_contour(spec: PlanarSpec, w_target: float, x_min: float,
                        x_max: float) -> ContourPolyline:
    """Explicit staircase polyline for the |B| = A contour limit.

    Horizontal runs between the nulls of cos(kx x + beta/2), joined by
    vertical drops of pi/ky at each null.
    """
    beta = spec.phase_shift
    j_lo = math.ceil((spec.kx * x_min + 0.5 * beta) / math.pi - 0.5)
    j_hi = math.floor((spec.kx * x_max + 0.5 * beta) / math.pi - 0.5)

    def level(j):
        return (w_target / spec.hbar + 0.5 * beta - math.pi * j) / spec.ky

    xs, ys = [x_min], [level(j_lo)]
    for j in range(j_lo, j_hi + 1):
        xn = ((j + 0.5) * math.pi - 0.5 * beta) / spec.kx
        if xn != x_min:
            xs.append(xn)
            ys.append(level(j))
        xs.append(xn)
        ys.append(level(j + 1))
    if xs[-1] != x_max:
        xs.append(x_max)
        ys.append(level(j_hi + 1))
    return ContourPolyline(w_target, np.array(xs), np.array(ys), None)


def contour_family(template: PlanarSpec, b_values: Sequence[float], w_target: float,
                   window: tuple[float, float], n: int = 401) -> list[ContourPolyline]:
    """One contour per B value; negative B is |B| with beta shifted by pi.

    At |B| = A the explicit square-step polyline is returned.
    """
    x_min, x_max = window
    a = template.amplitude_a
    out = []
    for b in b_values:
        if abs(b) > a:
            raise InvalidRange(f"|B| = {abs(b)} exceeds A = {a}")
        beta = template.phase_shift + (math.pi if b < 0 else 0.0)
        spec = template.with_(amplitude_b=abs(float(b)), phase_shift=beta)
        if abs(b) == a:
            poly = square_step_contour(spec, w_target, x_min, x_max)
        else:
            poly = contour_of_action(spec, w_target, x_min, x_max, n)
        poly.b = float(b)
        out.append(poly)
    return out
