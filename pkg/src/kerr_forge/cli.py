"""kerr-forge command line: tables, Wigner dumps, pulse schedules, durations, weak force."""

from __future__ import annotations

import argparse
import math
import sys
import warnings

import numpy as np

from . import config as cfgmod
from .export import (atomic_outputs, field_csv, field_pgm, rows_to_csv, rows_to_json,
                     schedule_csv, schedule_rows)
from .fock import KerrParams, default_dim, kerr_state, truncated_kerr_state
from .metrology import WeakForceSetup, p_plus_approx, protocol_exact, sensitivity
from .one_pulse import LONG_PULSE_S, OnePulseConfig, omega_from, pulse_duration
from .pulses import RED, budget_check, synthesize
from .tables import table_rows
from .wigner import wigner_grid


def _m_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    lo = int(lo)
    hi = int(hi) if sep else lo
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty M range {text!r}")
    return range(lo, hi + 1)


def _floats(text: str) -> list[float]:
    return [cfgmod.parse_angle(s) for s in text.split(",") if s.strip()]


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration (overrides the config file)")
    g.add_argument("--output-dir", dest="output_dir")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--step", type=float, help="phase-space grid step")
    g.add_argument("--half-width", dest="half_width", type=float,
                   help="half side of the square region centred on alpha")
    g.add_argument("--region", help="re_min,re_max,im_min,im_max")
    g.add_argument("--fock-dim", dest="fock_dim", type=int)
    g.add_argument("--workers", type=int)
    g.add_argument("--omega-c", dest="omega_c", type=float, help="carrier Rabi frequency, rad/s")
    g.add_argument("--omega-r", dest="omega_r", type=float, help="red-sideband Rabi frequency, rad/s")
    g.add_argument("--eta", type=float)
    g.add_argument("--vib-coherence", dest="vib_coherence", type=float)
    g.add_argument("--elec-coherence", dest="elec_coherence", type=float)
    g.add_argument("--m-max", dest="m_max", type=int)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kerr-forge", description=__doc__)
    parser.add_argument("--config", help=f"flat key=value file (default ${cfgmod.ENV_VAR})")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("tables", parents=[common], help="isoline / agreement / error tables")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--tau", type=cfgmod.parse_angle, default=2 * math.pi)
    p.add_argument("--m-range", type=_m_range, default=range(9, 17), help="e.g. 9..16")

    p = sub.add_parser("wigner", parents=[common], help="Wigner field CSV + PGM")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--tau", type=cfgmod.parse_angle, default=2 * math.pi)
    p.add_argument("--m-cut", type=int, help="truncate at M (exact state if omitted)")

    p = sub.add_parser("schedule", parents=[common], help="pulse schedule for a truncated Kerr state")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--tau", type=cfgmod.parse_angle, default=math.pi / 2)
    p.add_argument("--m-cut", type=int, default=10)

    p = sub.add_parser("durations", parents=[common], help="one-pulse duration curves")
    p.add_argument("--etas", type=_floats, default=[0.1, 0.3, 0.02, 0.03])
    p.add_argument("--omega", type=float, default=1e7)
    p.add_argument("--omega-unit", choices=("rad/s", "Hz"), default="rad/s")
    p.add_argument("--taus", type=_floats, help="explicit tau values (default: sweep)")
    p.add_argument("--tau-max", type=cfgmod.parse_angle, default=math.pi)
    p.add_argument("--n-points", type=int, default=101)

    p = sub.add_parser("weakforce", parents=[common], help="P+ sweep over epsilon")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--eps-range", type=_floats, default=[0.0, 0.1], help="lo,hi")
    p.add_argument("--n-points", type=int, default=21)
    p.add_argument("--port", choices=("e", "g"), default="e")
    return parser


def _emit(files, stem: str, rows: list[dict], fmt: str):
    if fmt == "json":
        files.write(f"{stem}.json", rows_to_json(rows))
    else:
        files.write(f"{stem}.csv", rows_to_csv(rows))


def cmd_tables(args, run: cfgmod.RunConfig, out=None):
    out = out or sys.stdout
    iso, agree, err = table_rows(args.alpha, list(args.m_range), args.tau,
                                 run.region_for(args.alpha), run.step)
    with atomic_outputs(run.output_dir) as files:
        _emit(files, "table1_isolines", iso, run.format)
        _emit(files, "table2_agreement", agree, run.format)
        _emit(files, "table3_errors", err, run.format)
    for title, rows in (("isoline ratios", iso), ("agreement %", agree), ("errors %", err)):
        print(f"# {title}", file=out)
        for r in rows:
            print("  " + "  ".join(f"{k}={_short(v)}" for k, v in r.items()), file=out)
    return files.names


def _short(v):
    if v is None:
        return "-"
    return f"{v:.4g}" if isinstance(v, float) else str(v)


def cmd_wigner(args, run: cfgmod.RunConfig, out=None):
    out = out or sys.stdout
    if args.m_cut is not None:
        state = truncated_kerr_state(KerrParams(args.alpha, args.tau, args.m_cut))
    else:
        state = kerr_state(args.alpha, args.tau, run.fock_dim or default_dim(args.alpha))
    fld = wigner_grid(state, run.region_for(args.alpha), run.step, workers=run.workers)
    with atomic_outputs(run.output_dir) as files:
        files.write("wigner.csv", field_csv(fld))
        files.write("wigner.pgm", field_pgm(fld))
    print(f"grid {fld.values.shape[1]}x{fld.values.shape[0]}  min {fld.values.min():.4g}  "
          f"max {fld.values.max():.4g}  integral {fld.integral():.4g}", file=out)
    return files.names


def cmd_schedule(args, run: cfgmod.RunConfig, out=None):
    out = out or sys.stdout
    target = truncated_kerr_state(KerrParams(args.alpha, args.tau, args.m_cut))
    sched = synthesize(target, run.trap)
    report = budget_check(sched, run.trap)
    budget = [{"total_s": report.total_s, "max_pulse_s": report.max_pulse_s,
               "max_level": report.max_level, "vib_ok": report.vib_ok,
               "elec_ok": report.elec_ok, "level_ok": report.level_ok}]
    with atomic_outputs(run.output_dir) as files:
        if run.format == "json":
            files.write("schedule.json", rows_to_json(schedule_rows(sched)))
        else:
            files.write("schedule.csv", schedule_csv(sched))
        _emit(files, "budget", budget, run.format)
    reds = sorted(sched.of_kind(RED), key=lambda p: -p.index)
    cars = sorted((p for p in sched if p.kind != RED), key=lambda p: -p.index)
    print(f"{'':>4} {'phi_R':>7} {'t_R':>10}    {'':>4} {'phi_C':>7} {'t_C':>10}", file=out)
    for i, r in enumerate(reds):
        left = f"{r.label:>4} {r.phase:7.2f} {r.duration * 1e3:7.2f} ms"
        right = ""
        if i < len(cars):
            c = cars[i]
            right = f"{c.label:>4} {c.phase:7.2f} {c.duration * 1e6:7.2f} us"
        print(f"{left}    {right}", file=out)
    print(f"total {report.total_s * 1e3:.2f} ms  vib {'ok' if report.vib_ok else 'FAIL'}  "
          f"elec {'ok' if report.elec_ok else 'FAIL'}  level {'ok' if report.level_ok else 'FAIL'}",
          file=out)
    return files.names


def cmd_durations(args, run: cfgmod.RunConfig, out=None):
    out = out or sys.stdout
    omega = omega_from(args.omega, args.omega_unit)
    taus = args.taus if args.taus else list(np.linspace(0.0, args.tau_max, args.n_points))
    rows = []
    for eta in args.etas:
        cfg = OnePulseConfig(omega, eta)
        for tau in taus:
            t = pulse_duration(cfg, tau, warn=False)
            rows.append({"eta": eta, "tau": float(tau), "t_s": t, "over_1s": int(t > LONG_PULSE_S)})
    with atomic_outputs(run.output_dir) as files:
        _emit(files, "durations", rows, run.format)
    if args.taus:
        for r in rows:
            print(f"eta={r['eta']:<6g} tau={r['tau']:.6g}  t={r['t_s']:.6g} s", file=out)
    return files.names


def cmd_weakforce(args, run: cfgmod.RunConfig, out=None):
    out = out or sys.stdout
    if len(args.eps_range) != 2:
        raise ValueError("--eps-range needs lo,hi")
    lo, hi = args.eps_range
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for eps in np.linspace(lo, hi, args.n_points):
            setup = WeakForceSetup(args.alpha, float(eps), run.fock_dim, args.port)
            rows.append({"epsilon": float(eps), "p_exact": protocol_exact(setup),
                         "p_approx": p_plus_approx(args.alpha, eps),
                         "dp_deps": sensitivity(args.alpha, eps)})
    with atomic_outputs(run.output_dir) as files:
        _emit(files, "weakforce", rows, run.format)
    return files.names


COMMANDS = {
    "tables": cmd_tables,
    "wigner": cmd_wigner,
    "schedule": cmd_schedule,
    "durations": cmd_durations,
    "weakforce": cmd_weakforce,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {k: getattr(args, k, None) for k in cfgmod.KEYS}
    try:
        run = cfgmod.load(args.config, overrides)
        COMMANDS[args.command](args, run)
    except (ValueError, OSError) as exc:
        print(f"kerr-forge {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
