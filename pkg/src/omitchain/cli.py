"""Command-line front end.

Subcommands: spectrum, windows, steady, timedomain, sweep.  Every file
output is accompanied by a JSON run manifest so a run can be reproduced
from its artifacts alone.

Exit codes: 0 success, 2 invalid configuration, 3 solver error, 4 all
sweep points failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .errors import OmitChainError
from .model import (
    Drive,
    PhysicalConfig,
    config_from_json,
    config_to_dict,
    normalize,
    validate,
)
from .presets import PRESETS, preset
from .response import ResponseSpectrum, spectrum
from .steady import solve_from_config
from .timedomain import integrate_nonlinear
from .windows import central_feature_width, detect_windows
from .errors import NotApplicableError

EXIT_OK = 0
EXIT_BAD_CONFIG = 2
EXIT_SOLVER = 3
EXIT_ALL_FAILED = 4


def _load_config(args) -> PhysicalConfig:
    if getattr(args, "preset", None):
        return preset(args.preset)
    if getattr(args, "config", None):
        try:
            cfg = config_from_json(Path(args.config).read_text())
        except (OmitChainError, ValueError, OSError) as exc:
            raise _InvalidConfig([str(exc)])
        violations = validate(cfg)
        if violations:
            raise _InvalidConfig(violations)
        return cfg
    raise _InvalidConfig(["either a config file or --preset is required"])


class _InvalidConfig(Exception):
    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = violations


def _write_manifest(out_path: Path, subcommand: str, config: PhysicalConfig,
                    wall_time: float, outputs: list[str], **extra) -> None:
    manifest = {
        "subcommand": subcommand,
        "config": config_to_dict(config),
        "outputs": outputs,
        "wall_time_s": wall_time,
        "tool_version": __version__,
        **extra,
    }
    out_path.write_text(json.dumps(manifest, indent=2) + "\n")


def _resolve_system(config: PhysicalConfig):
    if isinstance(config.drive_mode, Drive):
        system, _ = solve_from_config(config)
        return system
    return normalize(config)


def _cmd_spectrum(args) -> int:
    t0 = time.perf_counter()
    config = _load_config(args)
    system = _resolve_system(config)
    spec = spectrum(system, args.xmin, args.xmax, args.points, args.method)
    out = Path(args.out)
    spec.to_csv(out)
    _write_manifest(out.with_suffix(out.suffix + ".manifest.json"), "spectrum",
                    config, time.perf_counter() - t0, [str(out)],
                    method=args.method,
                    grid={"xmin": args.xmin, "xmax": args.xmax, "points": args.points})
    print(f"wrote {out} ({args.points} points, method={args.method})")
    return EXIT_OK


def _report_table(report) -> str:
    lines = [f"{'center_x':>12} {'depth':>12} {'width':>12}"]
    for w in report.windows:
        lines.append(f"{w.center_x:>12.6f} {w.depth:>12.6f} {w.width:>12.6f}")
    lines.append(f"count: {report.count}   central feature: {report.central_feature}")
    return "\n".join(lines)


def _cmd_windows(args) -> int:
    t0 = time.perf_counter()
    if args.spectrum:
        spec = ResponseSpectrum.from_csv(args.spectrum)
        config = None
    else:
        config = _load_config(args)
        system = _resolve_system(config)
        spec = spectrum(system, args.xmin, args.xmax, args.points, args.method)
    report = detect_windows(spec)
    print(_report_table(report))
    if args.out:
        out = Path(args.out)
        out.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
        if config is not None:
            _write_manifest(out.with_suffix(out.suffix + ".manifest.json"), "windows",
                            config, time.perf_counter() - t0, [str(out)],
                            method=args.method,
                            grid={"xmin": args.xmin, "xmax": args.xmax, "points": args.points})
    return EXIT_OK


def _cmd_steady(args) -> int:
    t0 = time.perf_counter()
    config = _load_config(args)
    system, state = solve_from_config(config)
    result = {
        "c_bar": [[c.real, c.imag] for c in state.c_bar],
        "lambda_bar": state.lambda_bar,
        "sigma_minus_bar": [state.sigma_minus_bar.real, state.sigma_minus_bar.imag],
        "sigma_z_bar": [state.sigma_z_bar.real, state.sigma_z_bar.imag],
        "residual_norm": state.residual_norm,
        "iterations": state.iterations,
        "G_effective": [system.G.real, system.G.imag],
    }
    print(json.dumps(result, indent=2))
    if args.out:
        out = Path(args.out)
        out.write_text(json.dumps(result, indent=2) + "\n")
        _write_manifest(out.with_suffix(out.suffix + ".manifest.json"), "steady",
                        config, time.perf_counter() - t0, [str(out)])
    return EXIT_OK


def _cmd_timedomain(args) -> int:
    t0 = time.perf_counter()
    config = _load_config(args)
    system = _resolve_system(config)
    Delta = args.x * system.kappa_probe + system.omega_m
    traj = integrate_nonlinear(config, Delta, args.t_end,
                               args.dt if args.dt else None, stride=args.stride)
    out = Path(args.out)
    traj.to_csv(out)
    _write_manifest(out.with_suffix(out.suffix + ".manifest.json"), "timedomain",
                    config, time.perf_counter() - t0, [str(out)],
                    grid={"x": args.x, "t_end": args.t_end, "dt": args.dt,
                          "stride": args.stride})
    print(f"wrote {out} ({len(traj.t)} samples)")
    return EXIT_OK


_SWEEPABLE = ("G_mag", "atom_position", "g_a", "gamma_a", "omega_m", "gamma_m", "epsilon_p")


def _apply_sweep_value(config: PhysicalConfig, param: str, value: float) -> PhysicalConfig:
    from dataclasses import replace

    if param == "G_mag":
        return replace(config, drive_mode=replace(config.drive_mode, G_mag=value))
    if param == "atom_position":
        if config.atom is None:
            raise _InvalidConfig(["cannot sweep atom_position: no atom in config"])
        return replace(config, atom=replace(config.atom, position=int(value)))
    if param == "g_a":
        return replace(config, atom=replace(config.atom, g_a=value))
    if param == "gamma_a":
        return replace(config, atom=replace(config.atom, gamma_a=value))
    if param in ("omega_m", "gamma_m", "epsilon_p"):
        return replace(config, **{param: value})
    raise _InvalidConfig([f"unsupported sweep parameter '{param}'; choose from {_SWEEPABLE}"])


def _sweep_point(config: PhysicalConfig, param: str, value: float, args) -> dict:
    row = {"value": value}
    try:
        cfg = _apply_sweep_value(config, param, value)
        violations = validate(cfg)
        if violations:
            raise _InvalidConfig(violations)
        system = _resolve_system(cfg)
        spec = spectrum(system, args.xmin, args.xmax, args.points, args.method)
        report = detect_windows(spec)
        row["count"] = report.count
        row["central_feature"] = report.central_feature
        try:
            row["central_width"] = central_feature_width(spec)
        except NotApplicableError:
            row["central_width"] = ""
        row["error"] = ""
    except Exception as exc:  # per-point failures stay in-row
        row.setdefault("count", "")
        row.setdefault("central_feature", "")
        row.setdefault("central_width", "")
        row["error"] = str(exc)
    return row


def _cmd_sweep(args) -> int:
    t0 = time.perf_counter()
    config = _load_config(args)
    values = [float(v) for v in args.values.split(",")] if args.values else []

    rows: list[dict]
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        futures = [pool.submit(_sweep_point, config, args.param, v, args) for v in values]
        rows = [f.result() for f in futures]   # grid order regardless of completion

    out = Path(args.out)
    with open(out, "w", newline="") as f:
        f.write("value,count,central_feature,central_width,error\n")
        for r in rows:
            cw = r["central_width"]
            cw_s = f"{cw:.17g}" if isinstance(cw, float) else cw
            f.write(f"{r['value']:.17g},{r['count']},{r['central_feature']},"
                    f"{cw_s},{r['error']}\n")
    _write_manifest(out.with_suffix(out.suffix + ".manifest.json"), "sweep",
                    config, time.perf_counter() - t0, [str(out)],
                    method=args.method, param=args.param, values=values,
                    grid={"xmin": args.xmin, "xmax": args.xmax, "points": args.points})
    print(f"wrote {out} ({len(rows)} rows)")
    if values and all(r["error"] for r in rows):
        return EXIT_ALL_FAILED
    return EXIT_OK


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("config", nargs="?", help="path to a JSON config file")
    p.add_argument("--preset", choices=sorted(PRESETS), help="named parameter set")


def _add_grid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=("cf", "linear", "full"), default="cf")
    p.add_argument("--xmin", type=float, default=-3.0)
    p.add_argument("--xmax", type=float, default=3.0)
    p.add_argument("--points", type=int, default=20001)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omitchain",
        description="Probe response and transparency windows of an N-cavity "
                    "optomechanical chain.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("spectrum", help="evaluate eps_T on a detuning grid")
    _add_config_args(p)
    _add_grid_args(p)
    p.add_argument("--out", default="spectrum.csv")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("windows", help="detect transparency windows")
    _add_config_args(p)
    _add_grid_args(p)
    p.add_argument("--spectrum", help="analyze an existing spectrum CSV instead")
    p.add_argument("--out", help="write the window report JSON here")
    p.set_defaults(func=_cmd_windows)

    p = sub.add_parser("steady", help="solve the pump-only steady state")
    _add_config_args(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_steady)

    p = sub.add_parser("timedomain", help="integrate the nonlinear mean-field equations")
    _add_config_args(p)
    p.add_argument("--x", type=float, default=0.0, help="probe detuning in units of kappa_N")
    p.add_argument("--t-end", type=float, default=50.0, help="integration time (us)")
    p.add_argument("--dt", type=float, default=0.0, help="step (us); 0 = auto")
    p.add_argument("--stride", type=int, default=50)
    p.add_argument("--out", default="trajectory.csv")
    p.set_defaults(func=_cmd_timedomain)

    p = sub.add_parser("sweep", help="sweep one scalar parameter, one row per point")
    _add_config_args(p)
    _add_grid_args(p)
    p.add_argument("--param", required=True, help=f"one of {_SWEEPABLE}")
    p.add_argument("--values", default="", help="comma-separated values (MHz or index)")
    p.add_argument("--jobs", type=int, default=4)
    p.add_argument("--out", default="sweep.csv")
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _InvalidConfig as exc:
        for v in exc.violations:
            print(f"config error: {v}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except OmitChainError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
