"""Randomized checks of the closed-form identities."""
import math

import numpy as np
from hypothesis import given, settings, strategies as st

from dichromatic import DichromaticSpec, PlanarSpec
from dichromatic import dynamics, planar, qshje, wave_core
from dichromatic.tables import Table, from_csv, to_csv

amp_b = st.floats(0.0, 0.95)
ks = st.floats(0.2, 4.0)
betas = st.floats(-2 * math.pi, 2 * math.pi)
xs = st.floats(-20.0, 20.0)


@settings(max_examples=200, deadline=None)
@given(amp_b, ks, betas, xs)
def test_qshje_identity(b, k, beta, x):
    spec = DichromaticSpec(1.0, b, k, beta)
    assert abs(float(qshje.qshje_residual(spec, x))) < 1e-9 * spec.energy * max(1.0, 1 / (1 - b) ** 2)


@settings(max_examples=200, deadline=None)
@given(amp_b, ks, betas, xs)
def test_density_bounds(b, k, beta, x):
    rho = float(wave_core.born_density(DichromaticSpec(1.0, b, k, beta), x))
    assert (1 - b) ** 2 * (1 - 1e-12) <= rho <= (1 + b) ** 2 * (1 + 1e-12)


@settings(max_examples=200, deadline=None)
@given(amp_b, ks, betas, st.one_of(st.just(0.0), st.floats(1e-9, 30.0)))
def test_time_stays_in_wedge(b, k, beta, x):
    spec = DichromaticSpec(1.0, b, k, beta)
    up, lo = dynamics.turning_loci(spec)
    t = float(dynamics.jacobi_time(spec, x))
    assert lo * x * (1 - 1e-12) <= t <= up * x * (1 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 0.9), betas, st.floats(-10.0, 10.0), st.floats(0.01, 3.0))
def test_action_increments_match_momentum(b, beta, x, span):
    spec = DichromaticSpec(1.0, b, math.pi / 2, beta)
    grid = np.linspace(x, x + span, 2001)
    p = qshje.conjugate_momentum(spec, grid)
    trapz = np.sum((p[1:] + p[:-1]) * np.diff(grid)) / 2
    w = qshje.reduced_action(spec, np.array([x, x + span])).value
    assert abs((w[1] - w[0]) - trapz) < 1e-5 * max(1.0, trapz) / (1 - b) ** 2


@settings(max_examples=100, deadline=None)
@given(amp_b, ks, betas, st.floats(0.1, 10.0))
def test_turning_points_are_sign_changes(b, k, beta, x_max):
    spec = DichromaticSpec(1.0, b, k, beta)
    for tp in dynamics.find_turning_points(spec, 0.0, x_max):
        h = 1e-7
        left, right = dynamics.dwell_density(spec, [tp.x - h, tp.x + h])
        assert left * right < 0
        assert (left > 0) == (tp.kind == "upper")


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 0.9), betas, st.floats(0.3, 3.0), xs, st.floats(-5, 5))
def test_planar_contours_are_exact(b, beta, ky, level, x):
    spec = PlanarSpec(1.0, b, beta, math.pi / 2, ky)
    poly = planar.contour_of_action(spec, level, x, x + 1.0, 17)
    w = planar.reduced_action_2d(spec, poly.x, poly.y).value
    assert np.max(np.abs(w - level)) < 1e-10


@given(st.lists(st.floats(allow_nan=False), min_size=1, max_size=20))
def test_csv_round_trip_is_lossless(values):
    table = Table(("v",), [(v,) for v in values])
    assert from_csv(to_csv(table)).column("v") == [float(v) for v in values]
