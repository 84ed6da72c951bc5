"""Jacobi-theorem trajectories of the dichromatic wave and their diagnostics.

The equation of motion is closed-form in x,

    t(x) = tau + m x (A^2 - B^2) / (hbar k rho(x)),

so trajectories are sampled in x rather than integrated in t.  Everything
else (dwell density, velocity, effective mass) follows from the bracket

    G(x) = rho(x) + 4ABkx sin(2kx + beta),

whose zeros are the time reversals.  Internally the normalized forms
r = (A^2 - B^2)/rho and g = G/rho are used so that B = 0 reproduces the
free-particle values exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Literal, NamedTuple, Sequence

import numpy as np

from .errors import (
    DegenerateAmplitudes,
    EmptyFamily,
    InvalidProbe,
    InvalidRange,
)
from .qshje import conjugate_momentum
from .wave_core import DichromaticSpec, born_density, interference_angle, require_running

# Root-scan grid step in units of 1/k.
SCAN_STEP = 0.05
BISECT_TOL = 1e-13

Kind = Literal["upper", "lower"]


def _running_ratio(spec: DichromaticSpec, x):
    return spec.running_weight / born_density(spec, x)


def reversal_factor(spec: DichromaticSpec, x):
    """G/rho = 1 + 4ABkx sin(2kx + beta) / rho; zero at every time reversal."""
    a, b, k = spec.amplitude_a, spec.amplitude_b, spec.wavenumber
    x = np.asarray(x, dtype=float)
    return 1.0 + 4.0 * a * b * k * x * np.sin(interference_angle(spec, x)) / born_density(spec, x)


def jacobi_time(spec: DichromaticSpec, x, allow_reversed: bool = False):
    """t_d(x) = tau + dW_d/dE."""
    require_running(spec, allow_reversed)
    x = np.asarray(x, dtype=float)
    return spec.tau + spec.mass * x * _running_ratio(spec, x) / (spec.hbar * spec.wavenumber)


def dwell_density(spec: DichromaticSpec, x, allow_reversed: bool = False):
    """dt_d/dx = m (A^2 - B^2) G / (hbar k rho^2)."""
    require_running(spec, allow_reversed)
    scale = spec.mass / (spec.hbar * spec.wavenumber)
    return scale * _running_ratio(spec, x) * reversal_factor(spec, x)


def dwell_time(spec: DichromaticSpec, x1, x2, allow_reversed: bool = False):
    """Time spent between x1 and x2; negative for net retrograde motion."""
    return jacobi_time(spec, x2, allow_reversed) - jacobi_time(spec, x1, allow_reversed)


def _left_sign(spec: DichromaticSpec, x):
    # sign of dt/dx just left of a zero of G, from dG/dx = 8ABk^2 x cos(theta)
    slope = np.sign(x * np.cos(interference_angle(spec, x)))
    return -slope * math.copysign(1.0, spec.running_weight)


def velocity(spec: DichromaticSpec, x, allow_reversed: bool = False):
    """x_dot = 1 / (dt/dx).

    At an exact zero of the dwell density the result is a signed infinity
    carrying the sign of the velocity immediately to the left.
    """
    require_running(spec, allow_reversed)
    x = np.asarray(x, dtype=float)
    g = reversal_factor(spec, x)
    r = _running_ratio(spec, x)
    with np.errstate(divide="ignore"):
        v = spec.hbar * spec.wavenumber / (spec.mass * r * g)
    if np.any(g == 0):
        v = np.where(g == 0, _left_sign(spec, x) * np.inf, v)
    return v[()] if isinstance(v, np.ndarray) else v


def effective_mass(spec: DichromaticSpec, x):
    """m_Q = m (A^2 - B^2)^2 G / rho^3, so that m_Q * x_dot = p_d."""
    r = _running_ratio(spec, x)
    return spec.mass * r * r * reversal_factor(spec, x)


def _squash(v):
    v = np.asarray(v, dtype=float)
    sq = np.abs(v)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        small = sq * sq / (1.0 + sq * sq)
        large = 1.0 / (1.0 + 1.0 / (sq * sq))
    return np.sign(v) * np.where(sq < 1.0, small, large)


def transformed_mass_velocity(spec: DichromaticSpec, x, allow_reversed: bool = False):
    """Bounded transforms (M_Q, X_dot) of effective mass and velocity.

    M_Q = 0.8 sgn(m_Q) m_Q^2/(1 + m_Q^2) lies in [-0.8, 0.8] and
    X_dot = sgn(x_dot) x_dot^2/(1 + x_dot^2) in [-1, 1]; infinite velocity
    maps to +-1.
    """
    v = velocity(spec, x, allow_reversed)
    return 0.8 * _squash(effective_mass(spec, x))[()], _squash(v)[()]


TRAJECTORY_COLUMNS = ("x", "t", "p", "xdot", "m_q", "dwell_density")


@dataclass
class TrajectorySample:
    spec: DichromaticSpec
    x: np.ndarray
    t: np.ndarray
    p: np.ndarray
    xdot: np.ndarray
    m_q: np.ndarray
    dwell_density: np.ndarray

    @property
    def x_range(self) -> tuple[float, float]:
        return float(self.x[0]), float(self.x[-1])

    @property
    def n_points(self) -> int:
        return len(self.x)

    def columns(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in TRAJECTORY_COLUMNS}

    def rows(self) -> Iterator[tuple[float, ...]]:
        cols = [getattr(self, name) for name in TRAJECTORY_COLUMNS]
        for i in range(self.n_points):
            yield tuple(float(c[i]) for c in cols)


def _check_range(x_min: float, x_max: float) -> None:
    if not (math.isfinite(x_min) and math.isfinite(x_max)) or not x_min < x_max:
        raise InvalidRange(f"need finite x_min < x_max, got [{x_min}, {x_max}]")


def sample_trajectory(spec: DichromaticSpec, x_min: float, x_max: float, n: int,
                      allow_reversed: bool = False) -> TrajectorySample:
    """Tabulate one trajectory on n uniformly spaced x values."""
    require_running(spec, allow_reversed)
    _check_range(x_min, x_max)
    if n < 2:
        raise InvalidRange(f"need at least 2 points, got {n}")
    x = np.linspace(x_min, x_max, n)
    return TrajectorySample(
        spec=spec,
        x=x,
        t=jacobi_time(spec, x, allow_reversed),
        p=conjugate_momentum(spec, x),
        xdot=velocity(spec, x, allow_reversed),
        m_q=effective_mass(spec, x),
        dwell_density=dwell_density(spec, x, allow_reversed),
    )


@dataclass(frozen=True)
class TurningPoint:
    """A time reversal: a simple zero of the dwell density.

    ``locus_residual`` is t minus the nearer turning-locus line at the same
    x (the destructive line where cos(2kx + beta) < 0, the constructive one
    otherwise).
    """

    x: float
    t: float
    kind: Kind
    locus_residual: float


def locus_time(spec: DichromaticSpec, x, destructive):
    """Time on the destructive (rho minimal) or constructive turning line."""
    a, b = spec.amplitude_a, spec.amplitude_b
    rho_ext = np.where(destructive, (a - b) ** 2, (a + b) ** 2)
    with np.errstate(divide="ignore"):
        slope = spec.mass * spec.running_weight / (spec.hbar * spec.wavenumber * rho_ext)
    return spec.tau + slope * np.asarray(x, dtype=float)


def bisect_roots(f, lo, hi, tol: float = BISECT_TOL, max_iter: int = 200):
    """Refine every bracket [lo_i, hi_i] of f at once by bisection.

    Each bracket must have f(lo) and f(hi) of opposite sign.  Stops when all
    widths are below ``tol`` or have shrunk to adjacent floats.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo = np.sign(f(lo))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        done = (hi - lo <= tol) | (mid == lo) | (mid == hi)
        if np.all(done):
            break
        fmid = np.sign(f(mid))
        exact = fmid == 0
        left = (fmid == flo) & ~done & ~exact
        right = (fmid != flo) & ~done & ~exact
        lo = np.where(left, mid, lo)
        hi = np.where(right, mid, hi)
        lo = np.where(exact, mid, lo)
        hi = np.where(exact, mid, hi)
    return 0.5 * (lo + hi)


def find_turning_points(spec: DichromaticSpec, x_min: float, x_max: float,
                        allow_reversed: bool = False) -> list[TurningPoint]:
    """Locate all time reversals in [x_min, x_max].

    Sign changes of the dwell density are bracketed on a grid of step
    0.05/k and refined by bisection.  A +/- transition is a local maximum
    of t ("upper"), -/+ a local minimum ("lower").
    """
    require_running(spec, allow_reversed)
    _check_range(x_min, x_max)
    n = int(math.ceil((x_max - x_min) * spec.wavenumber / SCAN_STEP)) + 1
    grid = np.linspace(x_min, x_max, max(n, 2))
    sgn = np.sign(dwell_density(spec, grid, allow_reversed))

    # exact zeros on the grid: keep interior ones where the sign flips across
    zero_idx = [i for i in np.flatnonzero(sgn == 0)
                if 0 < i < len(grid) - 1 and sgn[i - 1] * sgn[i + 1] < 0]
    brackets = np.flatnonzero(sgn[:-1] * sgn[1:] < 0)

    weight_sign = math.copysign(1.0, spec.running_weight)

    def f(x):
        return weight_sign * reversal_factor(spec, x)

    roots = bisect_roots(f, grid[brackets], grid[brackets + 1]) if len(brackets) else np.empty(0)
    before = sgn[brackets]
    if zero_idx:
        roots = np.concatenate((roots, grid[zero_idx]))
        before = np.concatenate((before, sgn[np.array(zero_idx) - 1]))
    order = np.argsort(roots)
    roots, before = roots[order], before[order]

    t = jacobi_time(spec, roots, allow_reversed)
    destructive = np.cos(interference_angle(spec, roots)) < 0
    residual = t - locus_time(spec, roots, destructive)
    return [
        TurningPoint(float(xr), float(tr), "upper" if s > 0 else "lower", float(res))
        for xr, tr, s, res in zip(roots, t, before, residual)
    ]


def turning_loci(spec: DichromaticSpec) -> tuple[float, float]:
    """Slopes of the upper and lower time-reversal lines (independent of beta)."""
    require_running(spec)
    a, b = spec.amplitude_a, spec.amplitude_b
    base = spec.mass / (spec.hbar * spec.wavenumber)
    return (a + b) / (a - b) * base, (a - b) / (a + b) * base


def time_beta_derivative(spec: DichromaticSpec, x):
    """dt/dbeta at fixed x; zero exactly where 2kx + beta = n pi."""
    a, b = spec.amplitude_a, spec.amplitude_b
    x = np.asarray(x, dtype=float)
    rho = born_density(spec, x)
    num = 2.0 * a * b * spec.mass * x * spec.running_weight * np.sin(interference_angle(spec, x))
    return num / (spec.hbar * spec.wavenumber * rho * rho)


@dataclass(frozen=True)
class CausticPoint:
    """A member of a beta family at a turning point or at a line contact.

    ``dt_dbeta`` is the envelope condition evaluated at the point; it
    vanishes where the family is tangent to a turning-locus line.
    """

    x: float
    t: float
    beta: float
    side: Kind
    dt_dbeta: float


def _family_specs(spec_base: DichromaticSpec, betas: Sequence[float]) -> list[DichromaticSpec]:
    betas = list(betas)
    if not betas:
        raise EmptyFamily("beta family is empty")
    require_running(spec_base)
    return [spec_base.with_(phase_shift=float(beta)) for beta in betas]


def caustic_scan(spec_base: DichromaticSpec, betas: Sequence[float],
                 x_min: float, x_max: float) -> list[CausticPoint]:
    """Turning-point locus of the beta family: the numerical caustic estimate."""
    out = []
    for spec in _family_specs(spec_base, betas):
        tps = find_turning_points(spec, x_min, x_max)
        if not tps:
            continue
        dtb = time_beta_derivative(spec, np.array([tp.x for tp in tps]))
        out.extend(CausticPoint(tp.x, tp.t, spec.phase_shift, tp.kind, float(d))
                   for tp, d in zip(tps, dtb))
    return out


def envelope_points(spec_base: DichromaticSpec, betas: Sequence[float],
                    x_min: float, x_max: float) -> list[CausticPoint]:
    """Points where each family member touches a turning-locus line.

    These are the x with 2kx + beta = n pi, where dt/dbeta = 0 and the
    trajectory lies on the upper line (n odd) or lower line (n even).
    """
    _check_range(x_min, x_max)
    out = []
    for spec in _family_specs(spec_base, betas):
        two_k = 2.0 * spec.wavenumber
        beta = spec.phase_shift
        n_lo = math.ceil((two_k * x_min + beta) / math.pi)
        n_hi = math.floor((two_k * x_max + beta) / math.pi)
        ns = np.arange(n_lo, n_hi + 1)
        xs = (ns * math.pi - beta) / two_k
        keep = (xs >= x_min) & (xs <= x_max)
        ns, xs = ns[keep], xs[keep]
        ts = jacobi_time(spec, xs)
        dtb = time_beta_derivative(spec, xs)
        out.extend(CausticPoint(float(x), float(t), beta, "upper" if n % 2 else "lower", float(d))
                   for n, x, t, d in zip(ns, xs, ts, dtb))
    return out


class LimitRow(NamedTuple):
    epsilon: float
    b: float
    t_probe: float
    x_peak: float
    t_peak: float


NULL_TOL = 1e-9


def standing_wave_limit_diagnostic(a: float, epsilons: Sequence[float], k: float,
                                   x_probe: float, x_null: float, beta: float = 0.0,
                                   hbar: float = 1.0, mass: float = 1.0) -> list[LimitRow]:
    """Approach the standing wave |B| -> A and watch t concentrate at the nulls.

    For x_null > 0 the amplitudes are B = A - eps; for x_null < 0 the
    reversed branch B = A + eps is used.  Each row gives t at the probe
    point (which goes to zero linearly in eps) and the extremal t next to
    the null (which grows like 1/eps).
    """
    if math.isclose(abs(math.cos(k * x_probe + 0.5 * beta)), 0.0, abs_tol=NULL_TOL):
        raise InvalidProbe(f"x_probe = {x_probe} sits on a null of the standing wave")
    if abs(math.cos(k * x_null + 0.5 * beta)) > NULL_TOL:
        raise InvalidProbe(f"x_null = {x_null} is not a null of the standing wave")
    if x_null == 0 or x_probe * x_null < 0:
        raise InvalidProbe("x_probe and x_null must lie on the same side of the origin")
    reversed_branch = x_null < 0
    half = math.pi / (4.0 * k)
    rows = []
    for eps in epsilons:
        if eps == 0:
            raise DegenerateAmplitudes("eps = 0 is the standing wave itself")
        if eps < 0:
            raise InvalidRange(f"eps must be positive, got {eps}")
        b = a + eps if reversed_branch else a - eps
        spec = DichromaticSpec(a, b, k, beta, hbar, mass, 0.0)
        t_probe = float(jacobi_time(spec, x_probe, allow_reversed=True))
        candidates = [x_null] + [tp.x for tp in find_turning_points(
            spec, x_null - half, x_null + half, allow_reversed=True)]
        ts = np.abs(jacobi_time(spec, np.array(candidates), allow_reversed=True))
        i = int(np.argmax(ts))
        x_peak = candidates[i]
        rows.append(LimitRow(float(eps), b, t_probe, float(x_peak),
                             float(jacobi_time(spec, x_peak, allow_reversed=True))))
    return rows


@dataclass
class BohmianPath:
    t: np.ndarray
    x: np.ndarray = field(repr=False)


def rk4_fixed(rhs, y0, t_max: float, dt: float):
    """Classic fixed-step fourth-order Runge-Kutta for an autonomous rhs(y).

    The step is shortened uniformly so that an integer number of steps
    lands exactly on t_max.
    """
    nsteps = max(1, int(math.ceil(t_max / dt - 1e-9)))
    h = t_max / nsteps
    y = np.array(y0, dtype=float)
    out = np.empty((nsteps + 1,) + y.shape)
    out[0] = y
    for i in range(nsteps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = y
    return np.linspace(0.0, t_max, nsteps + 1), out


def bohmian_trajectory(spec: DichromaticSpec, x0, t_max: float, dt: float) -> BohmianPath:
    """Integrate m dx/dt = p_d(x), the guidance law that treats p_d as m x_dot.

    Provided for contrast: with p_d > 0 everywhere these paths never reverse.
    ``x0`` may be an array of launch points.
    """
    require_running(spec)
    if not dt > 0 or not t_max > 0:
        raise InvalidRange(f"need dt > 0 and t_max > 0, got dt={dt}, t_max={t_max}")
    t, x = rk4_fixed(lambda y: conjugate_momentum(spec, y) / spec.mass, x0, t_max, dt)
    return BohmianPath(t, x)
