import cmath
import math

import numpy as np
import pytest

from dichromatic import DichromaticSpec, InvalidSpec, DegenerateAmplitudes, ReversedAmplitudes
from dichromatic import wave_core as wc


def direct_psi(a, b, k, beta, x, sign=1):
    # plain complex arithmetic, independent of the vectorized code
    return a * cmath.exp(1j * k * x) + sign * b * cmath.exp(-1j * k * x - 1j * beta)


def test_superposition_examples(base):
    assert abs(complex(wc.eval_superposition(base, 0.0)) - 1.5) < 1e-15
    assert abs(complex(wc.eval_superposition(base, 1.0)) - 0.5j) < 1e-15


@pytest.mark.parametrize("x", [-3.7, 0.0, 0.37, 2.0, 11.5])
@pytest.mark.parametrize("beta", [0.0, 1.1, math.pi])
def test_superposition_matches_direct_arithmetic(x, beta):
    spec = DichromaticSpec(1.0, 0.7, 1.3, beta)
    assert abs(complex(wc.eval_superposition(spec, x)) - direct_psi(1.0, 0.7, 1.3, beta, x)) < 1e-14
    assert abs(complex(wc.eval_psi_dd(spec, x)) - direct_psi(1.0, 0.7, 1.3, beta, x, -1)) < 1e-14


def test_single_running_wave_has_modulus_a():
    spec = DichromaticSpec(2.0, 0.0, 0.8, 0.4)
    x = np.linspace(-20, 20, 101)
    assert np.allclose(np.abs(wc.eval_superposition(spec, x)), 2.0, rtol=0, atol=1e-15)
    assert np.allclose(wc.eval_psi_dd(spec, x), 2.0 * np.exp(0.8j * x), atol=1e-15)


def test_polar_examples(base):
    amp, phase = wc.eval_polar(base, 1.0)
    assert amp == pytest.approx(0.5, abs=1e-15)
    assert phase == pytest.approx(math.pi / 2, abs=1e-15)
    amp, phase = wc.eval_polar(base, 0.0)
    assert (amp, phase) == (1.5, 0.0)


def test_polar_phase_range_and_standing_null():
    spec = DichromaticSpec(1.0, 1.0, math.pi / 2, 0.0)
    amp, phase = wc.eval_polar(spec, 1.0)  # 2kx = pi
    assert amp < 1e-15
    assert -math.pi < phase <= math.pi
    _, phases = wc.eval_polar(DichromaticSpec(1.0, 0.3, 2.0, 0.5), np.linspace(-5, 5, 1001))
    assert np.all((phases > -math.pi) & (phases <= math.pi))


def test_psi_dd_example(base):
    assert abs(complex(wc.eval_psi_dd(base, 0.0)) - 0.5) < 1e-15


def test_companion_sum_is_twice_the_forward_wave():
    spec = DichromaticSpec(1.0, 0.4, 1.7, 0.9)
    x = np.linspace(-8, 8, 301)
    total = wc.eval_superposition(spec, x) + wc.eval_psi_dd(spec, x)
    assert np.max(np.abs(total - 2 * np.exp(1.7j * x))) < 1e-14
    assert np.max(np.abs(total - 2 * wc.psi_plus(spec, x))) < 1e-14


def test_born_density_examples(base):
    assert wc.born_density(base, 0.0) == pytest.approx(2.25, abs=1e-15)
    assert wc.born_density(base, 1.0) == pytest.approx(0.25, abs=1e-15)
    standing = DichromaticSpec(1.0, 1.0, math.pi / 2, 0.0)
    assert wc.born_density(standing, 1.0) < 1e-30


def test_born_density_is_squared_modulus():
    spec = DichromaticSpec(1.0, 0.9, 1.1, 2.0)
    x = np.linspace(-10, 10, 2001)
    assert np.allclose(wc.born_density(spec, x), np.abs(wc.eval_superposition(spec, x)) ** 2,
                       rtol=1e-12, atol=1e-14)


def test_schroedinger_residual_bound_and_order(base):
    assert wc.schroedinger_residual(base, 0.3, 1e-4) < 1e-6
    assert wc.schroedinger_residual(base.with_(amplitude_b=0.0), 0.3, 1e-4) < 1e-6
    r = [float(wc.schroedinger_residual(base, 0.3, h)) for h in (1e-2, 5e-3, 2.5e-3)]
    assert r[0] / r[1] == pytest.approx(4.0, rel=1e-2)
    assert r[1] / r[2] == pytest.approx(4.0, rel=1e-2)


@pytest.mark.parametrize("wave", ["d", "dd", "plus", "minus"])
def test_every_component_solves_the_free_equation(base, wave):
    assert wc.schroedinger_residual(base, 1.3, 1e-4, wave) < 1e-6


@pytest.mark.parametrize("kwargs", [
    dict(amplitude_a=0.0), dict(amplitude_b=-0.1), dict(wavenumber=0.0),
    dict(hbar=-1.0), dict(mass=0.0), dict(phase_shift=math.nan), dict(tau=math.inf),
])
def test_spec_validation(kwargs):
    with pytest.raises(InvalidSpec):
        DichromaticSpec(**kwargs)


def test_require_running_distinguishes_cases():
    with pytest.raises(DegenerateAmplitudes):
        wc.require_running(DichromaticSpec(1.0, 1.0))
    with pytest.raises(ReversedAmplitudes):
        wc.require_running(DichromaticSpec(1.0, 2.0))
    wc.require_running(DichromaticSpec(1.0, 2.0), allow_reversed=True)
