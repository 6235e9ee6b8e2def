"""Command-line entry point: single runs, h-sweeps, fixed-point iteration
runs, and gradient-pair oracle tables, all writing deterministic CSV/JSON.

Exit codes: 0 clean finish, 1 configuration or input error, 2 blow-up
detected (scripts branch on it without parsing), 3 iteration
non-convergence.

Config files are UTF-8 lines of `key = value` with `#` comments, no
sections; booleans are true/false, lists comma-separated. Flags override
file values and unknown keys are rejected. Floats in CSV output carry 17
significant digits so they round-trip exactly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields as dc_fields, replace
from pathlib import Path

import numpy as np

from .catalog import (MinusBlowupRational, PlainSine, PlusBlowupPoly,
                      StationaryMinusSine, StationaryPlusSine, Tabulated)
from .core import NonlocalCoupling, ShiftMethod, SignCase, make_grid
from .oracle import GradientPair, blowup_time, ode_integrate_pair
from .picard import picard_solve
from .solver import Scheme, SolverConfig, simulate

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BLOWUP = 2
EXIT_NO_CONVERGENCE = 3

IC_NAMES = (
    "plus-blowup-poly",
    "minus-blowup-rational",
    "stationary-minus-sine",
    "stationary-plus-sine",
    "plain-sine",
    "tabulated",
)

REQUIRED_KEYS = ("ic", "sign", "h", "L", "N", "dt", "t_end")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    ic: str = ""
    sign: str = ""
    h: float = float("nan")
    L: float = float("nan")
    N: int = 0
    dt: float = float("nan")
    t_end: float = float("nan")
    scheme: str = "rk4-spectral"
    cfl_limit: float = 0.5
    blowup_gradient_factor: float = 1e3
    record_every: int = 10
    probes: tuple[float, ...] = ()
    k: int = 1
    amplitude: float = 1.0
    ic_path: str = ""
    shift_method: str = "auto"
    dealias: bool = False
    dump_fields: int = 0

    def as_dict(self) -> dict:
        d = {}
        for f in dc_fields(self):
            v = getattr(self, f.name)
            d[f.name] = list(v) if isinstance(v, tuple) else v
        return d


_PARSERS = {
    "ic": str, "sign": str, "scheme": str, "ic_path": str, "shift_method": str,
    "h": float, "L": float, "dt": float, "t_end": float, "cfl_limit": float,
    "blowup_gradient_factor": float,
    "N": int, "record_every": int, "k": int, "dump_fields": int,
    "amplitude": float,
    "probes": lambda s: tuple(float(p) for p in str(s).split(",") if p.strip()),
    "dealias": lambda s: {"true": True, "false": False}[str(s).strip().lower()],
}


def parse_config_file(path: str) -> dict:
    raw = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected `key = value`, got {line!r}")
        key, value = (s.strip() for s in stripped.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            raw[key] = _PARSERS[key](value)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return raw


def resolve_config(file_values: dict, flag_values: dict) -> RunConfig:
    merged = dict(file_values)
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    missing = [k for k in REQUIRED_KEYS if k not in merged]
    if missing:
        raise ConfigError(
            "missing required settings: "
            + ", ".join(f"--{k.replace('_', '-')}" for k in missing)
        )
    config = RunConfig(**merged)
    if config.ic not in IC_NAMES:
        raise ConfigError(f"unknown ic {config.ic!r}; choose from {', '.join(IC_NAMES)}")
    if config.sign not in ("plus", "minus"):
        raise ConfigError(f"sign must be plus or minus, got {config.sign!r}")
    if config.ic == "tabulated" and not config.ic_path:
        raise ConfigError("ic=tabulated requires --ic-path")
    if config.shift_method not in ("auto", "grid-offset", "spectral-phase"):
        raise ConfigError(f"bad shift_method {config.shift_method!r}")
    try:
        Scheme(config.scheme)
    except ValueError:
        raise ConfigError(
            f"unknown scheme {config.scheme!r}; choose from "
            + ", ".join(s.value for s in Scheme)
        ) from None
    return config


def build_ic(config: RunConfig):
    if config.ic == "plus-blowup-poly":
        return PlusBlowupPoly(h=config.h)
    if config.ic == "minus-blowup-rational":
        ic = MinusBlowupRational()
        if abs(config.h - ic.h) > 1e-9:
            raise ConfigError(
                f"minus-blowup-rational is pinned to h={ic.h}; got --h {config.h}"
            )
        return ic
    if config.ic == "stationary-minus-sine":
        return StationaryMinusSine(k=config.k, h=config.h)
    if config.ic == "stationary-plus-sine":
        return StationaryPlusSine(k=config.k, h=config.h)
    if config.ic == "plain-sine":
        return PlainSine(L=config.L, amplitude=config.amplitude)
    return Tabulated(config.ic_path)


def build_run(config: RunConfig):
    grid = make_grid(config.N, config.L)
    coupling = NonlocalCoupling(SignCase(config.sign), config.h)
    shift = None if config.shift_method == "auto" else ShiftMethod(config.shift_method)
    solver_config = SolverConfig(
        dt=config.dt,
        t_end=config.t_end,
        scheme=Scheme(config.scheme),
        cfl_limit=config.cfl_limit,
        blowup_gradient_factor=config.blowup_gradient_factor,
        record_every=config.record_every,
        probes=config.probes,
        shift_method=shift,
        dealias=config.dealias,
    )
    return build_ic(config), coupling, grid, solver_config


def fmt(x) -> str:
    return f"{float(x):.17g}"


def write_record_csv(path: Path, run, probes) -> None:
    header = ["t", "max_u", "max_ux", "argmax_ux", "h1", "h2", "h3"]
    for p in probes:
        header += [f"u_at_{p:g}", f"ux_at_{p:g}"]
    lines = [",".join(header)]
    for row in run.rows:
        cells = [fmt(row.time), fmt(row.max_abs_u), fmt(row.max_abs_ux),
                 fmt(row.argmax_ux_location)] + [fmt(s) for s in row.sobolev]
        for u, ux in zip(row.probe_u, row.probe_ux):
            cells += [fmt(u), fmt(ux)]
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_fields_csv(path: Path, snapshots, n_points: int) -> None:
    header = ["t"] + [f"u{j}" for j in range(n_points)]
    lines = [",".join(header)]
    for t, values in snapshots:
        lines.append(",".join([fmt(t)] + [fmt(v) for v in values]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _series_max(series: np.ndarray) -> float | None:
    finite = series[np.isfinite(series)]
    return float(np.max(finite)) if finite.size else None


def write_report_json(path: Path, config: RunConfig, result, runtime: float) -> None:
    report = {
        "config": config.as_dict(),
        "blowup": {
            "blew_up": result.verdict.blew_up,
            "t_detect": result.verdict.t_detect,
            "t_estimate": result.verdict.t_estimate,
            "location": result.verdict.location,
        },
        "violations": {
            "parity_max": _series_max(result.record.parity_violation),
            "zero_max": _series_max(result.record.zero_violation),
        },
        "runtime_seconds": runtime,
    }
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def run_one(config: RunConfig, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    ic, coupling, grid, solver_config = build_run(config)
    started = time.perf_counter()
    result = simulate(ic, coupling, grid, solver_config,
                      snapshot_every=config.dump_fields)
    runtime = time.perf_counter() - started
    write_record_csv(out_dir / "record.csv", result.record, config.probes)
    write_report_json(out_dir / "report.json", config, result, runtime)
    if config.dump_fields > 0:
        write_fields_csv(out_dir / "fields.csv", result.snapshots, grid.n_points)
    return result


def cmd_simulate(config: RunConfig, out_dir: Path) -> int:
    result = run_one(config, out_dir)
    v = result.verdict
    if v.blew_up:
        print(f"blow-up detected at t={v.t_detect:.6g} "
              f"(estimate {v.t_estimate if v.t_estimate is None else f'{v.t_estimate:.6g}'}, "
              f"location {v.location:.6g}, reason {v.reason})")
        return EXIT_BLOWUP
    print(f"clean finish at t={result.final.time:.6g}")
    return EXIT_OK


def cmd_sweep(config: RunConfig, h_values, out_dir: Path, jobs: int) -> int:
    if not h_values:
        raise ConfigError("sweep needs a nonempty --h-list")
    out_dir.mkdir(parents=True, exist_ok=True)

    def one(h: float):
        sub = replace(config, h=h)
        return run_one(sub, out_dir / f"h_{h:g}")

    results: dict[float, object] = {}
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        futures = {h: pool.submit(one, h) for h in h_values}
        for h, fut in futures.items():
            try:
                results[h] = fut.result()
            except Exception as exc:  # recorded per-row, sweep continues
                print(f"h={h:g} failed: {exc}", file=sys.stderr)
                results[h] = None

    lines = ["h,t_estimate,blowup_location"]
    for h in h_values:
        res = results[h]
        if res is None:
            lines.append(f"{fmt(h)},nan,nan")
            continue
        v = res.verdict
        t_est = fmt(v.t_estimate) if v.t_estimate is not None else "nan"
        loc = fmt(v.location) if v.location is not None else "nan"
        lines.append(f"{fmt(h)},{t_est},{loc}")
    (out_dir / "summary.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"sweep finished: {len(h_values)} runs in {out_dir}")
    return EXIT_OK if any(r is not None for r in results.values()) else EXIT_ERROR


def cmd_picard(config: RunConfig, out_dir: Path, tolerance: float,
               max_iters: int) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    ic, coupling, grid, solver_config = build_run(config)
    trace, trajectory = picard_solve(
        ic, coupling, grid, t_end=config.t_end, dt=config.dt,
        tolerance=tolerance, max_iters=max_iters,
    )
    lines = ["iteration,sup_delta,max_h3"]
    for i, (delta, h3) in enumerate(zip(trace.sup_deltas, trace.h_m_norms[1:]), 1):
        lines.append(f"{i},{fmt(delta)},{fmt(h3)}")
    (out_dir / "deltas.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    direct = simulate(ic, coupling, grid, solver_config)
    sup_error = float(np.max(np.abs(
        trajectory.final_field().values - direct.final.values
    )))
    comparison = {
        "config": config.as_dict(),
        "converged": trace.converged,
        "iterations": len(trace.sup_deltas),
        "sup_deltas": trace.sup_deltas,
        "max_h3_norms": trace.h_m_norms,
        "sup_error": sup_error,
        "tolerance": tolerance,
    }
    (out_dir / "comparison.json").write_text(
        json.dumps(comparison, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if not trace.converged:
        print(f"no convergence after {len(trace.sup_deltas)} iterations "
              f"(last delta {trace.sup_deltas[-1]:.3g})", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    print(f"converged in {len(trace.sup_deltas)} iterations; "
          f"sup error vs direct solver {sup_error:.3g}")
    return EXIT_OK


def cmd_oracle(f1: float, f2: float, sign: str, dt: float, t_end: float,
               out: Path) -> int:
    pair = GradientPair(f1, f2, SignCase(sign))
    t_star = blowup_time(pair)
    curve = ode_integrate_pair(pair, dt, t_end)
    lines = [f"# t_star = {fmt(t_star) if t_star is not None else 'none'}",
             "t,F1,F2"]
    for t, v1, v2 in zip(curve.times, curve.values, curve.f2_values):
        lines.append(f"{fmt(t)},{fmt(v1)},{fmt(v2)}")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} (t_star = {t_star})")
    return EXIT_OK


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="config file of `key = value` lines")
    p.add_argument("--ic", choices=IC_NAMES)
    p.add_argument("--sign", choices=("plus", "minus"))
    p.add_argument("--h", type=float, help="shift distance of the nonlocal velocity")
    p.add_argument("--L", type=float, help="domain period")
    p.add_argument("--N", type=int, help="number of grid points (even, >= 8)")
    p.add_argument("--dt", type=float)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--scheme", choices=tuple(s.value for s in Scheme))
    p.add_argument("--cfl-limit", dest="cfl_limit", type=float)
    p.add_argument("--blowup-gradient-factor", dest="blowup_gradient_factor",
                   type=float)
    p.add_argument("--record-every", dest="record_every", type=int)
    p.add_argument("--probes", type=_PARSERS["probes"],
                   help="comma-separated probe locations (grid-aligned)")
    p.add_argument("--k", type=int, help="mode number for the sine families")
    p.add_argument("--amplitude", type=float,
                   help="amplitude of the plain sine profile (sign flips the"
                        " orientation)")
    p.add_argument("--ic-path", dest="ic_path", help="file for ic=tabulated")
    p.add_argument("--shift-method", dest="shift_method",
                   choices=("auto", "grid-offset", "spectral-phase"))
    p.add_argument("--dealias", dest="dealias", action="store_const", const=True)
    p.add_argument("--dump-fields", dest="dump_fields", type=int,
                   help="write full field snapshots every this many steps")
    p.add_argument("--out", default="out", help="output directory")


def _config_from_args(args) -> RunConfig:
    file_values = parse_config_file(args.config) if args.config else {}
    flag_values = {
        key: getattr(args, key, None)
        for key in _PARSERS
    }
    return resolve_config(file_values, flag_values)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nlb",
        description="nonlocal Burgers laboratory: u_t + (u(x+h) +/- u(x-h)) u_x = 0",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="one run, writing record.csv + report.json")
    _add_run_flags(p_sim)

    p_sweep = sub.add_parser("sweep", help="one run per shift in --h-list")
    _add_run_flags(p_sweep)
    p_sweep.add_argument("--h-list", dest="h_list", type=_PARSERS["probes"],
                         help="comma-separated shift distances")
    p_sweep.add_argument("--jobs", type=int,
                         default=int(os.environ.get("NLB_JOBS", "1")),
                         help="concurrent runs (default $NLB_JOBS or 1)")

    p_pic = sub.add_parser("picard", help="fixed-point iteration run")
    _add_run_flags(p_pic)
    p_pic.add_argument("--tolerance", type=float, default=1e-8)
    p_pic.add_argument("--max-iters", dest="max_iters", type=int, default=50)

    p_or = sub.add_parser("oracle", help="gradient-pair table F1(t), F2(t)")
    p_or.add_argument("--f1", type=float, required=True)
    p_or.add_argument("--f2", type=float, required=True)
    p_or.add_argument("--sign", choices=("plus", "minus"), required=True)
    p_or.add_argument("--dt", type=float, default=1e-5)
    p_or.add_argument("--t-end", dest="t_end", type=float, default=1.0)
    p_or.add_argument("--out", default="oracle.csv")

    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(_config_from_args(args), Path(args.out))
        if args.command == "sweep":
            h_list = args.h_list or ()
            if not h_list:
                raise ConfigError("sweep needs a nonempty --h-list")
            if args.h is None:
                args.h = h_list[0]
            return cmd_sweep(_config_from_args(args), h_list, Path(args.out),
                             args.jobs)
        if args.command == "picard":
            return cmd_picard(_config_from_args(args), Path(args.out),
                              args.tolerance, args.max_iters)
        return cmd_oracle(args.f1, args.f2, args.sign, args.dt, args.t_end,
                          Path(args.out))
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
