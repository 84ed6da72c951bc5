"""Self-check suites behind ``dichromatic verify``.

Each check evaluates one invariant against an independent route (finite
differences, direct complex arithmetic, closed forms) and reports the
worst deviation it saw.
"""
from __future__ import annotations

import hashlib
import math
from typing import Callable, NamedTuple

import numpy as np

from . import dynamics, planar, qshje, wave_core
from .wave_core import DichromaticSpec

K = math.pi / 2
B_VALUES = (0.25, 0.5, 0.9)
BETAS = (0.0, math.pi / 4, math.pi)
FAMILY_BETAS = tuple(j * math.pi / 4 for j in range(8))


class CheckResult(NamedTuple):
    suite: str
    name: str
    passed: bool
    detail: str


def _grid_specs(bs=B_VALUES, betas=BETAS):
    for b in bs:
        for beta in betas:
            yield DichromaticSpec(1.0, b, K, beta)


def _rel(a, b):
    return np.abs(a - b) / np.maximum(np.abs(b), 1e-300)


# --- wave_core -------------------------------------------------------------

def check_polar_reconstruction():
    x = np.linspace(-10, 10, 4001)
    worst = 0.0
    for a, b in ((1.0, 0.5), (10.0, 10.0), (3.0, 7.5), (2.0, 0.0)):
        spec = DichromaticSpec(a, b, 1.3, 0.7)
        pol = wave_core.eval_polar(spec, x)
        diff = np.abs(pol.amplitude * np.exp(1j * pol.phase) - wave_core.eval_superposition(spec, x))
        worst = max(worst, float(diff.max()))
    return worst < 1e-12, f"max |amp e^(i phase) - psi_d| = {worst:.3e}"


def check_companion_sum():
    x = np.linspace(-10, 10, 2001)
    worst = 0.0
    for spec in _grid_specs():
        total = wave_core.eval_superposition(spec, x) + wave_core.eval_psi_dd(spec, x)
        worst = max(worst, float(np.abs(total - 2 * spec.amplitude_a * np.exp(1j * spec.wavenumber * x)).max()))
    return worst < 1e-12, f"max |psi_d + psi_dd - 2 psi_+| = {worst:.3e}"


def check_born_density():
    x = np.linspace(-10, 10, 2001)
    worst, bounds_ok = 0.0, True
    for spec in _grid_specs():
        rho = wave_core.born_density(spec, x)
        worst = max(worst, float(np.abs(rho - np.abs(wave_core.eval_superposition(spec, x)) ** 2).max()))
        a, b = spec.amplitude_a, spec.amplitude_b
        bounds_ok &= bool(np.all(rho >= (a - b) ** 2 - 1e-12) and np.all(rho <= (a + b) ** 2 + 1e-12))
    return worst < 1e-12 and bounds_ok, f"max |rho - |psi|^2| = {worst:.3e}, bounds ok = {bounds_ok}"


def check_schroedinger_order():
    spec = DichromaticSpec(1.0, 0.5, K, 0.3)
    x = np.linspace(-3, 3, 13)
    ratios = []
    for wave in ("d", "dd", "plus", "minus"):
        r1 = wave_core.schroedinger_residual(spec, x, 2e-2, wave).max()
        r2 = wave_core.schroedinger_residual(spec, x, 1e-2, wave).max()
        ratios.append(r1 / r2)
    ok = all(3.8 < r < 4.2 for r in ratios)
    return ok, "halving ratios " + ", ".join(f"{r:.3f}" for r in ratios)


# --- qshje -------------------------------------------------------------

def check_action_gradient():
    x = np.linspace(-10, 10, 2001)
    h = 1e-5
    worst = 0.0
    for spec in _grid_specs(bs=(0.0, 0.25, 0.5, 0.9), betas=(0.0, math.pi / 4, math.pi)):
        wp = qshje.reduced_action(spec, x + h).value
        wm = qshje.reduced_action(spec, x - h).value
        fd = (wp - wm) / (2 * h)
        p = qshje.conjugate_momentum(spec, x)
        excess = np.abs(fd - p) / np.maximum(1e-8, 1e-6 * np.abs(p))
        worst = max(worst, float(excess.max()))
    return worst <= 1.0, f"worst error / tolerance = {worst:.3f}"


def check_action_monotone():
    x = np.linspace(-10, 10, 20001)
    ok = all(np.all(np.diff(qshje.reduced_action(spec, x).value) > 0) for spec in _grid_specs())
    return ok, "strictly increasing on every grid" if ok else "monotonicity violated"


def check_momentum_density():
    x = np.linspace(-10, 10, 10001)
    worst = 0.0
    for spec in _grid_specs():
        c = spec.hbar * spec.wavenumber * spec.running_weight
        worst = max(worst, float(_rel(qshje.momentum_density_product(spec, x), c).max()))
    return worst < 1e-12, f"max relative deviation = {worst:.3e}"


def check_qshje():
    x = np.linspace(-10, 10, 10001)
    worst = 0.0
    for spec in _grid_specs():
        worst = max(worst, float(np.abs(qshje.qshje_residual(spec, x)).max() / spec.energy))
    return worst < 1e-9, f"max |residual|/E = {worst:.3e}"


def check_quantum_potential_fd():
    # Q from finite differences of the unwrapped action, no closed forms
    x = np.linspace(-4, 4, 161)
    h = 1e-3
    worst = 0.0
    for spec in _grid_specs(bs=(0.25, 0.5)):
        w = [qshje.reduced_action(spec, x + j * h).value for j in (-2, -1, 0, 1, 2)]
        w1 = (w[3] - w[1]) / (2 * h)
        w2 = (w[3] - 2 * w[2] + w[1]) / h ** 2
        w3 = (w[4] - 2 * w[3] + 2 * w[1] - w[0]) / (2 * h ** 3)
        q_fd = spec.hbar ** 2 / (4 * spec.mass) * (w3 / w1 - 1.5 * (w2 / w1) ** 2)
        worst = max(worst, float(np.abs(q_fd - qshje.quantum_potential(spec, x)).max() / spec.energy))
    return worst < 1e-3, f"max |Q_fd - Q|/E = {worst:.3e}"


# --- dynamics ------------------------------------------------------------

def _away_from_reversals(spec, x, floor=1e-3):
    return np.abs(dynamics.reversal_factor(spec, x)) > floor


def check_identity_chain():
    x = np.linspace(-10, 10, 10001)
    worst = 0.0
    for spec in _grid_specs():
        keep = _away_from_reversals(spec, x)
        xs = x[keep]
        p = qshje.conjugate_momentum(spec, xs)
        v = dynamics.velocity(spec, xs)
        mq = dynamics.effective_mass(spec, xs)
        dd = dynamics.dwell_density(spec, xs)
        worst = max(worst, float(_rel(mq * v, p).max()), float(np.abs(v * dd - 1).max()))
    return worst < 1e-10, f"max relative deviation = {worst:.3e}"


def velocity_from_energy_derivative(spec: DichromaticSpec, x, rel_step=1e-6):
    """1 / (dp/dE) by a central difference in E at fixed x."""
    e = spec.energy
    de = rel_step * e

    def p_at(energy):
        k = math.sqrt(2 * spec.mass * energy) / spec.hbar
        return qshje.conjugate_momentum(spec.with_(wavenumber=k), x)

    return 2 * de / (p_at(e + de) - p_at(e - de))


def check_energy_derivative():
    x = np.linspace(-10, 10, 2001)
    worst = 0.0
    for spec in _grid_specs():
        keep = _away_from_reversals(spec, x, 1e-2)
        v_fd = velocity_from_energy_derivative(spec, x[keep])
        worst = max(worst, float(_rel(v_fd, dynamics.velocity(spec, x[keep])).max()))
    return worst < 1e-6, f"max relative deviation = {worst:.3e}"


def check_tangency():
    worst_t, worst_slope = 0.0, 0.0
    # the slope near 2kx+beta = n pi is ill-conditioned in x (grows like x/(A-B)^2),
    # so the check uses the caustic-scan family on [0, 10]
    for spec in _grid_specs(bs=(0.5,), betas=FAMILY_BETAS):
        up, lo = dynamics.turning_loci(spec)
        for p in dynamics.envelope_points(spec, [spec.phase_shift], 1e-9, 10.0):
            slope = up if p.side == "upper" else lo
            line = spec.tau + slope * p.x
            worst_t = max(worst_t, abs(p.t - line) / abs(line))
            worst_slope = max(worst_slope, abs(float(dynamics.dwell_density(spec, p.x)) - slope) / slope)
    ok = worst_t < 1e-12 and worst_slope < 1e-12
    return ok, f"line offset {worst_t:.3e}, slope offset {worst_slope:.3e}"


def check_mass_sign():
    x = np.linspace(-10, 10, 10001)
    ok = True
    for spec in _grid_specs():
        ok &= bool(np.all(np.sign(dynamics.effective_mass(spec, x)) ==
                          np.sign(dynamics.dwell_density(spec, x))))
        for tp in dynamics.find_turning_points(spec, 0.01, 10):
            ok &= abs(float(dynamics.transformed_mass_velocity(spec, tp.x)[0])) < 1e-9
    return ok, "sign(m_Q) = sign(dt/dx); M_Q ~ 0 at reversals" if ok else "sign mismatch"


def check_turning_wedge():
    worst = 0.0
    for spec in _grid_specs():
        up, lo = dynamics.turning_loci(spec)
        for tp in dynamics.find_turning_points(spec, 1e-6, 20.0):
            excess = max(tp.t - (spec.tau + up * tp.x), (spec.tau + lo * tp.x) - tp.t)
            worst = max(worst, excess)
    return worst <= 1e-9, f"max excursion outside the wedge = {worst:.3e}"


def check_quasi_period():
    spec = DichromaticSpec(1.0, 0.5, K, 0.0)
    uppers = [tp.x for tp in dynamics.find_turning_points(spec, 0.01, 60) if tp.kind == "upper"]
    gaps = np.diff(uppers) - math.pi / spec.wavenumber
    scaled = np.abs(gaps) * np.asarray(uppers[1:])
    ok = bool(np.all(np.abs(gaps[5:]) < 0.05)) and bool(scaled[-1] < 2 * scaled[5])
    return ok, f"last gap deviation {gaps[-1]:.3e}, x*gap {scaled[-1]:.3e}"


# --- planar ------------------------------------------------------------

def check_separability():
    spec = planar.PlanarSpec(1.0, 0.5, 0.4)
    x = np.linspace(-5, 5, 101)
    worst = 0.0
    for y in (-3.0, -0.5, 1.0, 2.5):
        d = planar.reduced_action_2d(spec, x, y).value - planar.reduced_action_2d(spec, x, 0.0).value
        worst = max(worst, float(np.abs(d - spec.hbar * spec.ky * y).max()))
    return worst < 1e-12, f"max deviation = {worst:.3e}"


def y0_from_constrained_derivative(spec: planar.PlanarSpec, x, y, rel_step=1e-6):
    """d(W/hbar)/dky at fixed energy, kx following sqrt(2mE/hbar^2 - ky^2)."""
    total = spec.kx ** 2 + spec.ky ** 2
    dk = rel_step * spec.ky

    def w_at(ky):
        kx = math.sqrt(total - ky * ky)
        return planar.reduced_action_2d(spec.with_(kx=kx, ky=ky), x, y).value / spec.hbar

    return (w_at(spec.ky + dk) - w_at(spec.ky - dk)) / (2 * dk)


def check_jacobi_planar():
    spec = planar.PlanarSpec(1.0, 0.5, 0.0)
    x = np.linspace(0.05, 6, 120)
    y = planar.trajectory_y(spec, 0.0, x)
    y0 = y0_from_constrained_derivative(spec, x, y)
    # y0 should vanish: compare against the size of the terms involved
    worst = float(np.abs(y0).max() / np.abs(y).max())
    return worst < 1e-6, f"max |y0_fd| / max |y| = {worst:.3e}"


def check_contours():
    spec = planar.PlanarSpec(1.0, 0.5, 0.0)
    worst = 0.0
    for j in range(-8, 9):
        w = j * math.pi / 2
        poly = planar.contour_of_action(spec, w, -2, 2, 401)
        err = np.abs(planar.reduced_action_2d(spec, poly.x, poly.y).value - w)
        worst = max(worst, float(err.max()))
    return worst < 1e-10 * spec.hbar, f"max |W - target| = {worst:.3e}"


def check_planar_wedge():
    ok = True
    for b in B_VALUES:
        for beta in BETAS:
            spec = planar.PlanarSpec(1.0, b, beta)
            up, lo = planar.turning_loci_2d(spec)
            x = np.linspace(1e-6, 20, 20001)
            y = planar.trajectory_y(spec, 0.0, x)
            ok &= bool(np.all(y <= up * x * (1 + 1e-12)) and np.all(y >= lo * x * (1 - 1e-12)))
    return ok, "y_l <= y <= y_u for x > 0" if ok else "trajectory leaves the wedge"


def check_orthogonality():
    x = np.linspace(-10, 10, 4001)
    free = planar.PlanarSpec(1.0, 0.0, 0.3)
    dev0 = float(np.abs(planar.tangency_angle(free, 0.0, x) - math.pi / 2).max())
    devs = [float(np.abs(planar.tangency_angle(planar.PlanarSpec(1.0, b, 0.0), 0.0, x) - math.pi / 2).max())
            for b in (0.1, 0.5, 0.9)]
    ok = dev0 < 1e-12 and min(devs) > 1e-3
    return ok, f"B=0 deviation {dev0:.3e}; B>=0.1 min max-deviation {min(devs):.3e}"


# --- cli ---------------------------------------------------------------

def check_cli_determinism():
    from .cli import main_capture

    argsets = [
        ["traj", "--n", "201"],
        ["turning", "--xmax", "20"],
        ["mass", "--n", "201"],
        ["contour2d", "--levels", "h/4", "--window=-2,2", "--n", "101"],
        ["traj", "--n", "201", "--format", "svg"],
        ["family", "--format", "json"],
    ]
    ok = True
    for args in argsets:
        c1, o1 = main_capture(args)
        c2, o2 = main_capture(args)
        ok &= c1 == 0 and c2 == 0 and hashlib.sha256(o1.encode()).digest() == hashlib.sha256(o2.encode()).digest()
    return ok, f"{len(argsets)} commands byte-identical across runs" if ok else "outputs differ"


def check_csv_roundtrip():
    from .cli import main_capture
    from .tables import from_csv

    code, text = main_capture(["traj", "--n", "501", "--beta", "pi/4"])
    table = from_csv(text)
    spec = DichromaticSpec(1.0, 0.5, K, math.pi / 4)
    x = np.array(table.column("x"))
    sample = dynamics.sample_trajectory(spec, float(x[0]), float(x[-1]), len(x))
    worst = 0.0
    for name in dynamics.TRAJECTORY_COLUMNS:
        got = np.array(table.column(name), dtype=float)
        want = getattr(sample, name)
        finite = np.isfinite(want)
        if not np.array_equal(np.isfinite(got), finite):
            return False, f"column {name}: infinity flags differ"
        worst = max(worst, float(_rel(got[finite], want[finite]).max()))
    return code == 0 and worst <= 1e-12, f"max relative deviation = {worst:.3e}"


SUITES: dict[str, list[tuple[str, Callable[[], tuple[bool, str]]]]] = {
    "wave_core": [
        ("polar form reconstructs psi_d", check_polar_reconstruction),
        ("psi_d + psi_dd = 2 psi_+", check_companion_sum),
        ("Born density and its bounds", check_born_density),
        ("Schroedinger residual is O(h^2)", check_schroedinger_order),
    ],
    "qshje": [
        ("dW/dx matches p_d", check_action_gradient),
        ("W strictly increasing", check_action_monotone),
        ("p_d * rho_d constant", check_momentum_density),
        ("QSHJE residual", check_qshje),
        ("Q from finite differences of W", check_quantum_potential_fd),
    ],
    "dynamics": [
        ("p = m_Q x_dot and x_dot dt/dx = 1", check_identity_chain),
        ("x_dot = 1/(dp/dE)", check_energy_derivative),
        ("tangency to the turning lines", check_tangency),
        ("effective mass sign and zeros", check_mass_sign),
        ("turning points inside the wedge", check_turning_wedge),
        ("quasi-periodic reversals", check_quasi_period),
    ],
    "planar": [
        ("separability in y", check_separability),
        ("trajectory from constrained dW/dky", check_jacobi_planar),
        ("contour identity", check_contours),
        ("trajectory inside the y wedge", check_planar_wedge),
        ("orthogonality iff B = 0", check_orthogonality),
    ],
    "cli": [
        ("deterministic output", check_cli_determinism),
        ("CSV round trip", check_csv_roundtrip),
    ],
}


def run_suite(name: str = "all") -> list[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    results = []
    for suite in names:
        for label, check in SUITES[suite]:
            try:
                passed, detail = check()
            except Exception as exc:  # a crashing check is a failing check
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            results.append(CheckResult(suite, label, bool(passed), detail))
    return results
