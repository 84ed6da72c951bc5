"""Command-line front end.

Exit status: 0 on success, 1 when the arguments or config are invalid,
2 when the computation itself fails (e.g. A = B where a running component
is required).
"""
from __future__ import annotations

import argparse
import io
import json
import math
import re
import sys
from typing import Sequence

from . import commands
from .commands import COMMANDS, B_SWEEP, RunConfig
from .errors import DichromaticError, InvalidSpec
from .tables import to_csv, to_json
from .verify import SUITES, run_suite

EXIT_OK, EXIT_INVALID, EXIT_COMPUTE = 0, 1, 2

_TOKEN = re.compile(
    r"^(?P<sign>[+-])?(?:(?P<coef>\d+(?:\.\d*)?|\.\d+)\*?)?(?P<unit>pi|h)"
    r"(?:\*(?P<mul>\d+(?:\.\d*)?|\.\d+))?(?:/(?P<div>\d+(?:\.\d*)?|\.\d+))?$"
)


class UsageError(Exception):
    pass


def parse_number(text: str | float | int, hbar: float = 1.0) -> float:
    """Parse a float literal or a pi / h fraction such as ``pi/2``, ``-3pi/4``,
    ``pi*3/4`` or ``h/4`` (h = 2 pi hbar)."""
    if isinstance(text, (int, float)):
        value = float(text)
    else:
        s = text.strip().replace(" ", "")
        m = _TOKEN.match(s)
        if m:
            value = math.pi if m["unit"] == "pi" else 2 * math.pi * hbar
            if m["coef"]:
                value *= float(m["coef"])
            if m["mul"]:
                value *= float(m["mul"])
            if m["div"]:
                value /= float(m["div"])
            if m["sign"] == "-":
                value = -value
        else:
            try:
                value = float(s)
            except ValueError:
                raise UsageError(f"cannot parse number {text!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"number must be finite, got {text!r}")
    return value


def parse_list(text, hbar: float = 1.0) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(parse_number(v, hbar) for v in text)
    items = [t for t in str(text).split(",") if t.strip()]
    if not items:
        raise UsageError(f"empty list {text!r}")
    return tuple(parse_number(t, hbar) for t in items)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_VALUE_FLAGS = ("--A", "--B", "--k", "--beta", "--hbar", "--m", "--tau", "--kx", "--ky",
                "--xmin", "--xmax", "--betas", "--bs", "--levels", "--window", "--y0",
                "--x-probe", "--x-null", "--eps")


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    # "--window -2,2" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for tok in it:
        out.append(tok)
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                continue
            if len(nxt) > 1 and nxt[0] == "-" and nxt[1] in "0123456789.p":
                out[-1] = f"{tok}={nxt}"
            else:
                out.append(nxt)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dichromatic",
                     description="Trajectories of interfering plane waves.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with flag values; flags override it")
        p.add_argument("--output", "-o", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json", "svg"))
        if name == "verify":
            p.add_argument("--suite", choices=("all",) + tuple(SUITES))
            continue
        p.add_argument("--A")
        p.add_argument("--B")
        p.add_argument("--k")
        p.add_argument("--beta")
        p.add_argument("--hbar")
        p.add_argument("--m")
        p.add_argument("--tau")
        p.add_argument("--xmin")
        p.add_argument("--xmax")
        p.add_argument("--n", type=int)
        if name in ("traj", "turning", "mass"):
            p.add_argument("--allow-reversed", action="store_true", default=None,
                           help="permit B > A (motion toward -x)")
        if name == "family":
            p.add_argument("--betas")
            p.add_argument("--envelope", action="store_true", default=None,
                           help="report line contacts instead of the turning-point locus")
        if name in ("contour2d", "traj2d"):
            p.add_argument("--kx")
            p.add_argument("--ky")
            p.add_argument("--y0")
        if name == "contour2d":
            p.add_argument("--levels", help="spacing such as h/4, or a comma list of levels")
            p.add_argument("--window", help="lo,hi for both x and y")
            p.add_argument("--bs", nargs="?", const="sweep",
                           help="comma list of B values for a contour family")
        if name == "limits":
            p.add_argument("--x-probe")
            p.add_argument("--x-null")
            p.add_argument("--eps")
    return parser


_CONFIG_KEYS = {
    "A", "B", "k", "beta", "hbar", "m", "tau", "kx", "ky", "xmin", "xmax", "n", "betas",
    "bs", "levels", "window", "y0", "x_probe", "x_null", "eps", "allow_reversed",
    "envelope", "suite", "format", "output",
}


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    data = {k.lstrip("-").replace("-", "_"): v for k, v in data.items()}
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return data


def make_config(ns: argparse.Namespace) -> RunConfig:
    merged = _load_config(ns.config) if ns.config else {}
    for key, value in vars(ns).items():
        if key not in ("command", "config") and value is not None:
            merged[key] = value

    cfg = RunConfig(command=ns.command)
    hbar = parse_number(merged.get("hbar", 1.0))
    numeric = {"A": "a", "B": "b", "k": "k", "beta": "beta", "hbar": "hbar", "m": "m",
               "tau": "tau", "kx": "kx", "ky": "ky", "xmin": "x_min", "xmax": "x_max",
               "y0": "y0", "x_probe": "x_probe", "x_null": "x_null"}
    for key, attr in numeric.items():
        if key in merged:
            setattr(cfg, attr, parse_number(merged[key], hbar))
    if "n" in merged:
        cfg.n = int(merged["n"])
    if "betas" in merged:
        cfg.betas = parse_list(merged["betas"])
    if "bs" in merged:
        cfg.b_list = B_SWEEP if merged["bs"] == "sweep" else parse_list(merged["bs"])
    if "eps" in merged:
        cfg.epsilons = parse_list(merged["eps"])
    if "window" in merged:
        lo_hi = parse_list(merged["window"], hbar)
        if len(lo_hi) != 2:
            raise UsageError("--window takes two values lo,hi")
        cfg.window = lo_hi
    if "levels" in merged:
        raw = merged["levels"]
        tokens = raw if isinstance(raw, (list, tuple)) else str(raw).split(",")
        if len(tokens) == 1 and "h" in str(tokens[0]).replace("pi", ""):
            cfg.w_spacing = parse_number(tokens[0], hbar)
            if cfg.w_spacing <= 0:
                raise UsageError("level spacing must be positive")
        else:
            cfg.w_levels = parse_list(tokens, hbar)
    for flag in ("allow_reversed", "envelope"):
        if merged.get(flag):
            setattr(cfg, flag, True)
    if "suite" in merged:
        cfg.suite = merged["suite"]
    if "output" in merged:
        cfg.output_path = merged["output"]
    cfg.format = merged.get("format", "csv")
    if cfg.command == "traj2d" and "xmax" not in merged:
        cfg.x_max = 4.0
    if cfg.command == "contour2d" and "n" not in merged:
        cfg.n = 401
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.format not in ("csv", "json", "svg"):
        raise UsageError(f"unknown format {cfg.format!r}")
    if cfg.command == "verify":
        if cfg.suite != "all" and cfg.suite not in SUITES:
            raise UsageError(f"unknown suite {cfg.suite!r}")
        return
    try:
        cfg.spec
        if cfg.command in ("contour2d", "traj2d"):
            cfg.planar_spec
    except InvalidSpec as exc:
        raise UsageError(str(exc)) from None
    if not cfg.x_min < cfg.x_max:
        raise UsageError(f"need xmin < xmax, got {cfg.x_min} >= {cfg.x_max}")
    if cfg.n < 2:
        raise UsageError(f"need n >= 2, got {cfg.n}")
    if cfg.window is not None and not cfg.window[0] < cfg.window[1]:
        raise UsageError(f"window must be increasing, got {cfg.window}")
    if cfg.command == "family" and not cfg.betas:
        raise UsageError("--betas is empty")
    if cfg.command == "limits" and any(e < 0 for e in cfg.epsilons):
        raise UsageError("--eps values must be non-negative")
    if cfg.b_list is not None and any(abs(b) > cfg.a for b in cfg.b_list):
        raise UsageError("every |B| in --bs must be <= A")


def render_output(cfg: RunConfig) -> str:
    tables = commands.RUNNERS[cfg.command](cfg)
    if cfg.format == "svg":
        return commands.emit_svg(tables, cfg.command)
    primary = next(iter(tables.values()))
    return to_csv(primary) if cfg.format == "csv" else to_json(primary)


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if cfg.command == "verify":
        results = run_suite(cfg.suite)
        lines = [f"{'PASS' if r.passed else 'FAIL'} [{r.suite}] {r.name}: {r.detail}" for r in results]
        npass = sum(r.passed for r in results)
        lines.append(f"{npass}/{len(results)} checks passed")
        _write(cfg.output_path, "\n".join(lines) + "\n", stdout)
        return EXIT_OK if npass == len(results) else EXIT_COMPUTE
    try:
        text = render_output(cfg)
    except DichromaticError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_COMPUTE
    _write(cfg.output_path, text, stdout)
    return EXIT_OK


def _write(path: str, text: str, stdout) -> None:
    if path in (None, "-"):
        stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = build_parser().parse_args(_join_negative_values(argv))
        cfg = make_config(ns)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    return run(cfg, stdout, stderr)


def main_capture(argv: Sequence[str]) -> tuple[int, str]:
    """Run the CLI in-process and return (exit status, stdout text)."""
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue() if code == 0 else err.getvalue()


def entry() -> None:
    sys.exit(main())
