"""Compute back end for the CLI: one function per command, each returning tables.

A command produces an ordered mapping of named tables.  The first table
is the primary output written for ``csv`` and ``json``; the rest are
auxiliary series (companion trajectories, wedge lines) used by
:func:`emit_svg`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import dynamics, planar
from .errors import EmptyTable
from .svg import Figure, Series, break_on_sign_flip, render
from .tables import Table, require_rows
from .wave_core import DichromaticSpec

COMMANDS = ("traj", "turning", "family", "mass", "contour2d", "traj2d", "limits", "verify")

EIGHTH_TURNS = tuple(i * math.pi / 4 for i in range(8))
B_SWEEP = (0.0, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75, 1.0, -1.0)


@dataclass
class RunConfig:
    command: str
    a: float = 1.0
    b: float = 0.5
    k: float = math.pi / 2
    beta: float = 0.0
    hbar: float = 1.0
    m: float = 1.0
    tau: float = 0.0
    kx: float | None = None
    ky: float | None = None
    x_min: float = 0.0
    x_max: float = 10.0
    n: int = 1001
    betas: tuple[float, ...] = EIGHTH_TURNS
    b_list: tuple[float, ...] | None = None
    w_levels: tuple[float, ...] | None = None
    w_spacing: float | None = None
    window: tuple[float, float] | None = None
    y0: float = 0.0
    x_probe: float = 0.5
    x_null: float = 1.0
    epsilons: tuple[float, ...] = (1e-1, 1e-2, 1e-3)
    allow_reversed: bool = False
    envelope: bool = False
    suite: str = "all"
    output_path: str = "-"
    format: str = "csv"
    extra: dict = field(default_factory=dict)

    @property
    def spec(self) -> DichromaticSpec:
        return DichromaticSpec(self.a, self.b, self.k, self.beta, self.hbar, self.m, self.tau)

    @property
    def planar_spec(self) -> planar.PlanarSpec:
        kx = self.k if self.kx is None else self.kx
        ky = self.k if self.ky is None else self.ky
        return planar.PlanarSpec(self.a, self.b, self.beta, kx, ky, self.hbar, self.m)


def trajectory_table(spec: DichromaticSpec, x_min, x_max, n, allow_reversed=False) -> Table:
    sample = dynamics.sample_trajectory(spec, x_min, x_max, n, allow_reversed)
    return Table(dynamics.TRAJECTORY_COLUMNS, list(sample.rows()), title=f"beta={spec.phase_shift:g}")


def _wedge_table(spec: DichromaticSpec, x_min, x_max) -> Table:
    up, lo = dynamics.turning_loci(spec)
    xs = (x_min, x_max)
    return Table(("x", "t_u", "t_l"),
                 [(x, spec.tau + up * x, spec.tau + lo * x) for x in xs], title="wedge")


def run_traj(cfg: RunConfig) -> dict[str, Table]:
    spec = cfg.spec
    tables = {"trajectory": trajectory_table(spec, cfg.x_min, cfg.x_max, cfg.n, cfg.allow_reversed)}
    if cfg.format == "svg":
        partner = spec.with_(phase_shift=spec.phase_shift + math.pi)
        tables["companion"] = trajectory_table(partner, cfg.x_min, cfg.x_max, cfg.n, cfg.allow_reversed)
        if spec.amplitude_a > spec.amplitude_b:
            tables["wedge"] = _wedge_table(spec, cfg.x_min, cfg.x_max)
    return tables


def run_turning(cfg: RunConfig) -> dict[str, Table]:
    spec = cfg.spec
    tps = dynamics.find_turning_points(spec, cfg.x_min, cfg.x_max, cfg.allow_reversed)
    tables = {"turning": Table(("x", "t", "kind", "locus_residual"),
                               [(tp.x, tp.t, tp.kind, tp.locus_residual) for tp in tps],
                               title="turning points")}
    if cfg.format == "svg":
        tables["trajectory"] = trajectory_table(spec, cfg.x_min, cfg.x_max, cfg.n, cfg.allow_reversed)
    return tables


def run_family(cfg: RunConfig) -> dict[str, Table]:
    spec = cfg.spec
    scan = dynamics.envelope_points if cfg.envelope else dynamics.caustic_scan
    points = scan(spec, cfg.betas, cfg.x_min, cfg.x_max)
    tables = {"family": Table(("beta", "x", "t", "side", "dt_dbeta"),
                              [(p.beta, p.x, p.t, p.side, p.dt_dbeta) for p in points],
                              title="envelope contacts" if cfg.envelope else "caustic locus")}
    if cfg.format == "svg":
        for beta in cfg.betas:
            member = spec.with_(phase_shift=float(beta))
            tables[f"beta={beta:.6g}"] = trajectory_table(member, cfg.x_min, cfg.x_max, cfg.n)
        tables["wedge"] = _wedge_table(spec, cfg.x_min, cfg.x_max)
    return tables


def run_mass(cfg: RunConfig) -> dict[str, Table]:
    spec = cfg.spec
    x = np.linspace(cfg.x_min, cfg.x_max, cfg.n)
    mq, xd = dynamics.transformed_mass_velocity(spec, x, cfg.allow_reversed)
    return {"mass": Table(("x", "M_Q", "Xdot_T"), list(zip(x.tolist(), mq.tolist(), xd.tolist())),
                          title="transformed mass and velocity")}


def contour_levels(cfg: RunConfig, spec: planar.PlanarSpec, window) -> list[float]:
    if cfg.w_levels is not None:
        return list(cfg.w_levels)
    lo, hi = window
    if cfg.w_spacing is None:
        return [0.0]
    w = planar.reduced_action_2d(spec, [lo, hi], [lo, hi]).value
    step = cfg.w_spacing
    j0 = math.ceil(min(w) / step - 1e-9)
    j1 = math.floor(max(w) / step + 1e-9)
    return [j * step for j in range(j0, j1 + 1)]


def run_contour2d(cfg: RunConfig) -> dict[str, Table]:
    spec = cfg.planar_spec
    window = cfg.window or (cfg.x_min, cfg.x_max)
    tables: dict[str, Table] = {}
    if cfg.b_list is not None:
        levels = list(cfg.w_levels) if cfg.w_levels is not None else [0.0]
        rows = []
        for w in levels:
            for poly in planar.contour_family(spec, cfg.b_list, w, window, cfg.n):
                rows.extend((poly.b, w, x, y) for x, y in poly.points)
        tables["contours"] = Table(("b", "level", "x", "y"), rows, title="contour family")
        return tables
    rows = []
    for w in contour_levels(cfg, spec, window):
        poly = planar.contour_of_action(spec, w, window[0], window[1], cfg.n)
        rows.extend((w, x, y) for x, y in poly.points)
    tables["contours"] = Table(("level", "x", "y"), rows, title="contours")
    if cfg.format == "svg":
        x = np.linspace(window[0], window[1], cfg.n)
        y = planar.trajectory_y(spec, cfg.y0, x)
        tables["trajectory"] = Table(("x", "y"), list(zip(x.tolist(), y.tolist())), title="trajectory")
        tables["window"] = Table(("x", "y"), [(window[0], window[0]), (window[1], window[1])])
    return tables


def run_traj2d(cfg: RunConfig) -> dict[str, Table]:
    spec = cfg.planar_spec
    x = np.linspace(cfg.x_min, cfg.x_max, cfg.n)
    y = planar.trajectory_y(spec, cfg.y0, x)
    angle = planar.tangency_angle(spec, cfg.y0, x)
    tables = {"trajectory": Table(("x", "y", "angle"),
                                  list(zip(x.tolist(), y.tolist(), angle.tolist())),
                                  title="planar trajectory")}
    if cfg.format == "svg":
        up, lo = planar.turning_loci_2d(spec)
        tables["wedge"] = Table(("x", "y_u", "y_l"),
                                [(v, cfg.y0 + up * v, cfg.y0 + lo * v) for v in (cfg.x_min, cfg.x_max)])
    return tables


def run_limits(cfg: RunConfig) -> dict[str, Table]:
    rows = dynamics.standing_wave_limit_diagnostic(
        cfg.a, cfg.epsilons, cfg.k, cfg.x_probe, cfg.x_null, cfg.beta, cfg.hbar, cfg.m)
    return {"limits": Table(("epsilon", "B", "t_probe", "x_peak", "t_peak"),
                            [tuple(r) for r in rows], title="standing-wave limit")}


RUNNERS: dict[str, Callable[[RunConfig], dict[str, Table]]] = {
    "traj": run_traj,
    "turning": run_turning,
    "family": run_family,
    "mass": run_mass,
    "contour2d": run_contour2d,
    "traj2d": run_traj2d,
    "limits": run_limits,
}


def _series(table: Table, xcol: str, ycol: str, **kw) -> Series:
    return Series(table.column(xcol), table.column(ycol), **kw)


def _trajectory_series(table: Table, **kw) -> Series:
    # time reversal rows carry +-inf velocity; the t column itself is finite
    return _series(table, "x", "t", **kw)


def emit_svg(tables: dict[str, Table], plot_kind: str) -> str:
    """Render the plot for a command's tables."""
    if not tables or all(len(t) == 0 for t in tables.values()):
        raise EmptyTable("no rows to plot")
    first = next(iter(tables.values()))
    require_rows(first)

    if plot_kind == "traj":
        fig = Figure("Trajectory t(x)", "x", "t")
        fig.series.append(_trajectory_series(tables["trajectory"], label=first.title))
        if "companion" in tables:
            fig.series.append(_trajectory_series(tables["companion"], label=tables["companion"].title,
                                                 dashed=True))
        _add_wedge(fig, tables)
    elif plot_kind == "turning":
        fig = Figure("Time reversals", "x", "t")
        if "trajectory" in tables:
            fig.series.append(_trajectory_series(tables["trajectory"], label="trajectory"))
        fig.series.append(_series(tables["turning"], "x", "t", markers=True, label="turning points"))
    elif plot_kind == "family":
        fig = Figure("Trajectory family over beta", "x", "t")
        for name, table in tables.items():
            if name.startswith("beta="):
                fig.series.append(_trajectory_series(table, color="#1f4e9c"))
        _add_wedge(fig, tables)
        fig.series.append(_series(tables["family"], "x", "t", markers=True, color="#b22222",
                                  label=tables["family"].title))
    elif plot_kind == "mass":
        table = tables["mass"]
        fig = Figure("Transformed effective mass and velocity", "x", "M_Q, Xdot_T", ylim=(-1.05, 1.05))
        fig.series.append(_series(table, "x", "M_Q", label="M_Q"))
        gx, gy = break_on_sign_flip(table.column("x"), table.column("Xdot_T"))
        fig.series.append(Series(gx, gy, label="Xdot_T", dashed=True))
    elif plot_kind == "contour2d":
        table = tables["contours"]
        window = tables.get("window")
        lim = None if window is None else (window.rows[0][0], window.rows[1][0])
        fig = Figure("Contours of constant reduced action", "x", "y", xlim=lim, ylim=lim)
        key = "b" if "b" in table.columns else "level"
        ix, iy = table.columns.index("x"), table.columns.index("y")
        groups: dict = {}
        for row in table.rows:
            gkey = (row[0], row[1]) if key == "b" else row[0]
            g = groups.setdefault(gkey, ([], []))
            g[0].append(row[ix])
            g[1].append(row[iy])
        for gk, (xs, ys) in groups.items():
            label = f"B={gk[0]:g}" if key == "b" else ""
            fig.series.append(Series(xs, ys, label=label, color=None if key == "b" else "#1f4e9c"))
        if "trajectory" in tables:
            fig.series.append(_series(tables["trajectory"], "x", "y", dashed=True, color="#b22222",
                                      label="trajectory"))
    elif plot_kind == "traj2d":
        fig = Figure("Planar trajectory", "x", "y")
        fig.series.append(_series(tables["trajectory"], "x", "y", label="y(x)"))
        if "wedge" in tables:
            fig.series.append(_series(tables["wedge"], "x", "y_u", dashed=True, color="#696969", label="y_u"))
            fig.series.append(_series(tables["wedge"], "x", "y_l", dashed=True, color="#696969", label="y_l"))
    elif plot_kind == "limits":
        table = tables["limits"]
        fig = Figure("Standing-wave limit", "log10 epsilon", "log10 |t|")
        le = [math.log10(v) for v in table.column("epsilon")]
        fig.series.append(Series(le, [math.log10(abs(v)) for v in table.column("t_probe")],
                                 label="t(x_probe)"))
        fig.series.append(Series(le, [math.log10(abs(v)) for v in table.column("t_peak")],
                                 label="peak t near null", dashed=True))
    else:
        raise ValueError(f"unknown plot kind {plot_kind!r}")
    return render(fig)


def _add_wedge(fig: Figure, tables: dict[str, Table]) -> None:
    if "wedge" in tables:
        w = tables["wedge"]
        fig.series.append(_series(w, "x", "t_u", color="#696969", label="t_u"))
        fig.series.append(_series(w, "x", "t_l", color="#696969", label="t_l"))
