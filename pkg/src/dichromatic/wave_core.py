"""Plane-wave components and the synthesized dichromatic wave function.

Conventions used throughout the package::

    psi_plus(x)  = A exp(i k x)
    psi_minus(x) = B exp(-i k x - i beta)
    psi_d        = psi_plus + psi_minus
    psi_dd       = psi_plus - psi_minus

All functions accept a scalar or an array for ``x`` and broadcast.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import DegenerateAmplitudes, InvalidSpec, ReversedAmplitudes


@dataclass(frozen=True)
class DichromaticSpec:
    """Parameters of a one-dimensional two-wave interference problem."""

    amplitude_a: float = 1.0
    amplitude_b: float = 0.5
    wavenumber: float = math.pi / 2
    phase_shift: float = 0.0
    hbar: float = 1.0
    mass: float = 1.0
    tau: float = 0.0

    def __post_init__(self):
        for name in ("amplitude_a", "amplitude_b", "wavenumber", "phase_shift",
                     "hbar", "mass", "tau"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidSpec(f"{name} must be finite, got {value!r}")
        if self.amplitude_a <= 0:
            raise InvalidSpec(f"amplitude_a must be > 0, got {self.amplitude_a}")
        if self.amplitude_b < 0:
            raise InvalidSpec(f"amplitude_b must be >= 0, got {self.amplitude_b}")
        for name in ("wavenumber", "hbar", "mass"):
            if getattr(self, name) <= 0:
                raise InvalidSpec(f"{name} must be > 0, got {getattr(self, name)}")

    @property
    def energy(self) -> float:
        return self.hbar ** 2 * self.wavenumber ** 2 / (2 * self.mass)

    @property
    def running_weight(self) -> float:
        """A^2 - B^2, the weight of the net running component."""
        return self.amplitude_a ** 2 - self.amplitude_b ** 2

    def with_(self, **changes) -> "DichromaticSpec":
        return replace(self, **changes)


class PolarWave(NamedTuple):
    amplitude: np.ndarray
    phase: np.ndarray


def require_running(spec: DichromaticSpec, allow_reversed: bool = False) -> None:
    """Raise unless the spec has a net running component (A != B).

    ``B > A`` is rejected too, unless ``allow_reversed`` is set.
    """
    a, b = spec.amplitude_a, spec.amplitude_b
    if a == b:
        raise DegenerateAmplitudes(
            f"A = B = {a}: standing wave, use the standing-wave diagnostics")
    if b > a and not allow_reversed:
        raise ReversedAmplitudes(
            f"B = {b} > A = {a}; pass allow_reversed=True for the reversed branch")


def interference_angle(spec: DichromaticSpec, x):
    """2 k x + beta."""
    return 2.0 * spec.wavenumber * np.asarray(x, dtype=float) + spec.phase_shift


def psi_plus(spec: DichromaticSpec, x):
    x = np.asarray(x, dtype=float)
    return spec.amplitude_a * np.exp(1j * spec.wavenumber * x)


def psi_minus(spec: DichromaticSpec, x):
    x = np.asarray(x, dtype=float)
    return spec.amplitude_b * np.exp(-1j * (spec.wavenumber * x + spec.phase_shift))


def eval_superposition(spec: DichromaticSpec, x):
    """psi_d(x) = A exp(ikx) + B exp(-ikx - i beta)."""
    return psi_plus(spec, x) + psi_minus(spec, x)


def eval_psi_dd(spec: DichromaticSpec, x):
    """Companion solution A exp(ikx) - B exp(-ikx - i beta).

    psi_d + psi_dd reproduces 2 psi_plus, not psi_plus.
    """
    return psi_plus(spec, x) - psi_minus(spec, x)


def born_density(spec: DichromaticSpec, x):
    """|psi_d|^2 = A^2 + B^2 + 2AB cos(2kx + beta).

    Evaluated as (A-B)^2 + 4AB cos^2(kx + beta/2); both terms are
    non-negative so there is no cancellation near the interference nulls.
    """
    a, b = spec.amplitude_a, spec.amplitude_b
    half = np.cos(0.5 * interference_angle(spec, x))
    return (a - b) ** 2 + 4.0 * a * b * half * half


def eval_polar(spec: DichromaticSpec, x) -> PolarWave:
    """Amplitude and principal phase of psi_d.

    The phase is the two-argument arctangent of (Im, Re), mapped into
    (-pi, pi].  At an exact null (only possible for A = B) the phase is
    the limit from the left in x.
    """
    x = np.asarray(x, dtype=float)
    psi = eval_superposition(spec, x)
    amplitude = np.sqrt(born_density(spec, x))
    phase = np.angle(psi)

    a, b = spec.amplitude_a, spec.amplitude_b
    if a == b:
        # psi = 2A cos(theta/2) exp(-i beta/2); the left limit takes the sign
        # of sin(theta/2) where cos(theta/2) vanishes.
        tiny = 64 * np.finfo(float).eps * (a + b)
        null = np.abs(psi) <= tiny * np.maximum(1.0, np.abs(spec.wavenumber * x))
        if np.any(null):
            half = 0.5 * interference_angle(spec, x)
            left = np.where(np.sin(half) >= 0, 1.0, -1.0) * np.exp(-0.5j * spec.phase_shift)
            phase = np.where(null, np.angle(left), phase)
    phase = np.where(phase <= -math.pi, math.pi, phase)
    return PolarWave(amplitude, phase[()])


_WAVES = {
    "d": eval_superposition,
    "dd": eval_psi_dd,
    "plus": psi_plus,
    "minus": psi_minus,
}


def schroedinger_residual(spec: DichromaticSpec, x, h: float, wave: str = "d"):
    """|-(hbar^2/2m) D2 psi - E psi| with a central second difference of step h.

    ``wave`` selects ``"d"``, ``"dd"``, ``"plus"`` or ``"minus"``.
    """
    if not h > 0:
        raise ValueError(f"step must be positive, got {h}")
    f = _WAVES[wave]
    x = np.asarray(x, dtype=float)
    second = (f(spec, x + h) - 2.0 * f(spec, x) + f(spec, x - h)) / (h * h)
    kinetic = -(spec.hbar ** 2 / (2.0 * spec.mass)) * second
    return np.abs(kinetic - spec.energy * f(spec, x))

