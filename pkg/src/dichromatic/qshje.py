"""Reduced action, conjugate momentum and Bohm's quantum potential.

The reduced action is the arctangent phase of psi_d, unwrapped across
branches so that it is continuous.  For A > B the conjugate momentum is
positive everywhere, so each branch crossing shows up as a drop of the
principal value between neighbouring sweep points.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DegenerateAmplitudes
from .wave_core import DichromaticSpec, born_density, interference_angle, require_running

# Sweep step in units of 1/k.  W advances by exactly pi*hbar per period pi/k,
# so any step shorter than pi/k advances it by less than pi and a drop of the
# principal value can only mean one branch crossing.
UNWRAP_STEP = 0.25


class ActionValue(NamedTuple):
    value: np.ndarray
    branch_count: np.ndarray


def principal_phase(spec: DichromaticSpec, x):
    """Single-argument arctan of (A sin kx - B sin(kx+b)) / (A cos kx + B cos(kx+b)).

    Values lie in [-pi/2, pi/2].  Evaluated through arctan2 with the sign of
    the denominator folded into the numerator, which avoids the division.
    """
    a, b = spec.amplitude_a, spec.amplitude_b
    kx = spec.wavenumber * np.asarray(x, dtype=float)
    num = a * np.sin(kx) - b * np.sin(kx + spec.phase_shift)
    den = a * np.cos(kx) + b * np.cos(kx + spec.phase_shift)
    sign = np.where(np.signbit(den), -1.0, 1.0)
    return np.arctan2(sign * num, np.abs(den))


def _branch_counts(spec: DichromaticSpec, x: np.ndarray) -> np.ndarray:
    """Number of branch crossings between 0 and each x (negative for x < 0)."""
    counts = np.zeros(x.shape, dtype=np.int64)
    step = UNWRAP_STEP / spec.wavenumber
    for direction in (1.0, -1.0):
        mask = direction * x > 0
        if not np.any(mask):
            continue
        targets = direction * x[mask]
        far = targets.max()
        nsteps = int(math.ceil(far / step))
        grid = np.union1d(np.linspace(0.0, nsteps * step, nsteps + 1), targets)
        w = principal_phase(spec, direction * grid)
        jumps = np.diff(w)
        # moving right the phase drops at a crossing; moving left it rises
        crossed = (jumps < 0) if direction > 0 else (jumps > 0)
        cumulative = np.concatenate(([0], np.cumsum(crossed)))
        idx = np.searchsorted(grid, targets)
        counts[mask] = (direction * cumulative[idx]).astype(np.int64)
    return counts


def reduced_action(spec: DichromaticSpec, x) -> ActionValue:
    """Continuous reduced action W_d(x), anchored at the principal value at 0.

    Requires A > B.  B = 0 reproduces hbar*k*x up to rounding.
    """
    require_running(spec)
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x)
    counts = _branch_counts(spec, flat)
    value = spec.hbar * (principal_phase(spec, flat) + math.pi * counts)
    if x.ndim == 0:
        return ActionValue(value[0], counts[0])
    return ActionValue(value.reshape(x.shape), counts.reshape(x.shape))


def conjugate_momentum(spec: DichromaticSpec, x):
    """p_d = hbar k (A^2 - B^2) / (A^2 + B^2 + 2AB cos(2kx + beta))."""
    return spec.hbar * spec.wavenumber * (spec.running_weight / born_density(spec, x))


def _density_derivatives(spec: DichromaticSpec, x):
    """rho, d rho/dx and d2 rho/dx2 for the interference density."""
    a, b, k = spec.amplitude_a, spec.amplitude_b, spec.wavenumber
    theta = interference_angle(spec, x)
    d0 = born_density(spec, x)
    d1 = -4.0 * a * b * k * np.sin(theta)
    d2 = -8.0 * a * b * k * k * np.cos(theta)
    return d0, d1, d2


def momentum_derivatives(spec: DichromaticSpec, x):
    """Closed-form (p, dp/dx, d2p/dx2), i.e. (W', W'', W''')."""
    d0, d1, d2 = _density_derivatives(spec, x)
    c = spec.hbar * spec.wavenumber * spec.running_weight
    p = c / d0
    dp = -c * d1 / (d0 * d0)
    ddp = c * (2.0 * d1 * d1 / d0 ** 3 - d2 / (d0 * d0))
    return p, dp, ddp


def quantum_potential(spec: DichromaticSpec, x):
    """Bohm's quantum potential (hbar^2/4m)[W'''/W' - 1.5 (W''/W')^2].

    With W' = C/rho the bracket reduces to 0.5 (rho'/rho)^2 - rho''/rho,
    which is what gets evaluated.
    """
    if spec.amplitude_a == spec.amplitude_b:
        raise DegenerateAmplitudes(f"A = B = {spec.amplitude_a}: p_d vanishes")
    d0, d1, d2 = _density_derivatives(spec, x)
    r1 = d1 / d0
    return spec.hbar ** 2 / (4.0 * spec.mass) * (0.5 * r1 * r1 - d2 / d0)


def qshje_residual(spec: DichromaticSpec, x):
    """p^2/2m - E + Q; vanishes identically for the dichromatic action."""
    p = conjugate_momentum(spec, x)
    q = quantum_potential(spec, x)
    return p * p / (2.0 * spec.mass) - spec.energy + q


def momentum_density_product(spec: DichromaticSpec, x):
    """p_d * rho_d, which equals hbar k (A^2 - B^2) at every x."""
    return conjugate_momentum(spec, x) * born_density(spec, x)
