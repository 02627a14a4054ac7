"""Batch command-line front end.

Three verbs: `run` executes one configured scenario and writes gauge,
energy and final-state files; `converge` produces an error/rate table
for the forced exact-solution problem; `bench` runs a named experiment
preset. Every invocation writes a JSON manifest next to its CSV output.

Exit codes: 0 success, 1 configuration error, 2 numerical failure
(the failing simulation time goes to stderr).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import platform
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import benchmarks
from .bathymetry import preset as bathymetry_preset
from .bathymetry import from_file as bathymetry_from_file
from .config import Config, ConvergeSettings, RunSettings, load_config
from .diagnostics import GaugeRecord, record_gauges, wall_runup
from .errors import BadInput, NumericalFailure, SgnError
from .scenarios import Scenario, prepare, scenario, scenario_names
from .solitary import SolitaryWave
from .spaces import eval_field
from .stepper import RunConfig, rkf45_run, run

_NORM_KEYS = {"L2": 0, "H1": 1, "H2": 2, "Linf": "inf"}
_NORM_HEADER = {0: "E0", 1: "E1", 2: "E2", "inf": "Einf"}

BENCH_NAMES = ("shoal35", "wall", "beach50", "revere", "runup-sweep")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument errors are configuration errors: exit 1, never 2."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


# -- output helpers -----------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if np.isnan(v):
        return "nan"
    return repr(v)


def write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _resolve_out_dir(flag_value: str | None, config_value: str) -> Path:
    out = flag_value or config_value or os.environ.get("SGN_OUT_DIR") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _versions() -> dict:
    try:
        from importlib.metadata import version

        own = version("sgnfem")
    except Exception:
        own = "unknown"
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "sgnfem": own,
    }


def write_manifest(out_dir: Path, command: str, config_echo: dict, started: float, **extras) -> None:
    manifest = {
        "command": command,
        "config": config_echo,
        "versions": _versions(),
        "wall_clock_seconds": round(time.perf_counter() - started, 3),
    }
    manifest.update(extras)
    text = json.dumps(manifest, indent=2, sort_keys=True, default=str)
    (out_dir / "manifest.json").write_text(text + "\n", encoding="utf-8")


def _settings_echo(settings) -> dict:
    return dataclasses.asdict(settings)


def _write_gauges(out_dir: Path, record: GaugeRecord, name: str = "gauges.csv") -> None:
    header = ["t"] + [f"g{k}" for k in range(len(record.positions))]
    rows = [[t, *eta] for t, eta in zip(record.times, record.eta)]
    write_csv(out_dir / name, header, rows)


# -- run ----------------------------------------------------------------------


def _custom_scenario(settings: RunSettings) -> Scenario:
    c = settings.custom
    if c is None:
        raise BadInput("scenario 'custom' needs a [run.custom] section")
    if c.bathymetry_file:
        bottom = bathymetry_from_file(c.bathymetry_file, smoothing_radius=c.smoothing_radius)
    else:
        bottom = bathymetry_preset(c.bathymetry, depth=c.depth)
    wave = SolitaryWave(c.amplitude, depth=c.b0, g=c.g, x0=c.x0)

    def h0(x):
        return wave.eta(x) - bottom(x)

    return Scenario(
        name="custom",
        bathymetry=bottom,
        domain=(float(c.domain[0]), float(c.domain[1])),
        dx=settings.dx if settings.dx is not None else 0.1,
        t_end=c.t_end,
        g=c.g,
        initial_h=h0,
        initial_u=lambda x: wave.u(x),
        gauges=tuple(float(x) for x in c.gauges),
        amplitude=c.amplitude,
        description="config-defined solitary-wave run",
    )


def _scenario_from_settings(settings: RunSettings) -> Scenario:
    if settings.scenario == "custom":
        sc = _custom_scenario(settings)
    else:
        kwargs = {}
        if settings.amplitude is not None:
            key = "relative_amplitude" if settings.scenario == "revere" else "amplitude"
            kwargs[key] = settings.amplitude
        sc = scenario(settings.scenario, **kwargs)
    if settings.t_end is not None:
        sc = dataclasses.replace(sc, t_end=settings.t_end)
    if settings.gauges is not None:
        sc = dataclasses.replace(sc, gauges=tuple(float(x) for x in settings.gauges))
    return sc


def cmd_run(args) -> int:
    started = time.perf_counter()
    cfg = load_config(args.config) if args.config else Config()
    settings = cfg.run if cfg.run is not None else RunSettings()
    _apply_run_overrides(settings, args)

    sc = _scenario_from_settings(settings)
    fam_h = settings.family_h or None
    fam_u = settings.family_u or None
    ctx, state = prepare(
        sc,
        family_h=fam_h,
        family_u=fam_u,
        dx=settings.dx,
        lumping=settings.lumping,
        bottom_coupling=settings.bottom_coupling,
    )
    dt = settings.dt if settings.dt is not None else sc.step

    record = GaugeRecord(positions=np.asarray(sc.gauges)) if sc.gauges else None
    callbacks = []
    if record is not None:
        callbacks.append(
            (settings.gauge_period, lambda step, st: record_gauges(ctx, st, sc.gauges, record) and None)
        )

    result = run(
        RunConfig(
            ctx=ctx,
            dt=dt,
            t_end=sc.t_end,
            initial=state,
            callbacks=callbacks,
            depth_floor=settings.depth_floor,
            record_energy=settings.record_energy,
            sample_period=settings.energy_period,
            forcing_h=sc.forcing_h,
            forcing_u=sc.forcing_u,
            momentum_form="standard" if settings.standard_galerkin else "modified",
        )
    )

    out_dir = _resolve_out_dir(args.out, settings.out_dir)
    extras: dict = {
        "scenario": sc.name,
        "step_count": result.step_count,
        "dt": dt,
        "dx": settings.dx if settings.dx is not None else sc.dx,
        "family_h": str(fam_h or sc.family_h.value),
        "family_u": str(fam_u or sc.family_u.value),
        "bottom_reading": sc.bottom_reading,
        "final_time": result.final.t,
    }

    if record is not None:
        _write_gauges(out_dir, record)
    if settings.record_energy:
        e = result.log.energy
        rows = [[t, v, v - e[0]] for t, v in zip(result.log.t, e)]
        write_csv(out_dir / "energy.csv", ["t", "I", "dI"], rows)
        extras["energy_initial"] = float(e[0])
        extras["energy_max_drift"] = float(np.abs(e - e[0]).max())

    nodes = ctx.mesh.nodes
    h_fin = eval_field(result.final.H, nodes)
    eta_fin = h_fin + eval_field(ctx.dbath.b_h, nodes)
    u_fin = eval_field(result.final.U, nodes)
    write_csv(
        out_dir / "final_state.csv",
        ["x", "h", "eta", "u"],
        zip(nodes, h_fin, eta_fin, u_fin),
    )

    if settings.verify_rkf:
        adaptive = rkf45_run(
            ctx, state, sc.t_end,
            depth_floor=settings.depth_floor,
            forcing_h=sc.forcing_h, forcing_u=sc.forcing_u,
        )
        dh = float(np.abs(adaptive.H.values - result.final.H.values).max())
        du = float(np.abs(adaptive.U.values - result.final.U.values).max())
        extras["rkf_max_dh"] = dh
        extras["rkf_max_du"] = du
        print(f"adaptive cross-check: max|dh| = {dh:.3e}, max|du| = {du:.3e}")

    write_manifest(out_dir, "run", _settings_echo(settings), started, **extras)
    print(f"{sc.name}: {result.step_count} steps to t = {result.final.t:g}; output in {out_dir}")
    return 0


def _apply_run_overrides(settings: RunSettings, args) -> None:
    if args.dt is not None:
        settings.dt = args.dt
    if args.dx is not None:
        settings.dx = args.dx
    if args.family_h:
        settings.family_h = args.family_h
    if args.family_u:
        settings.family_u = args.family_u
    if args.lumping is not None:
        settings.lumping = args.lumping == "on"
    if args.verify_rkf:
        settings.verify_rkf = True


# -- converge -------------------------------------------------------------------


def _table_header(norms) -> list[str]:
    header = ["N"]
    for s in norms:
        lab = _NORM_HEADER[s]
        header += [f"{lab}H", "rateH", f"{lab}U", "rateU"]
    return header


def cmd_converge(args) -> int:
    started = time.perf_counter()
    cfg = load_config(args.config) if args.config else Config()
    settings = cfg.converge if cfg.converge is not None else ConvergeSettings()
    if args.family_h:
        settings.family_h = args.family_h
    if args.family_u:
        settings.family_u = args.family_u
    if args.threads is not None:
        settings.threads = args.threads
    if args.dt is not None:
        settings.dt_rule = "fixed"
        settings.dt = args.dt

    try:
        norms = [_NORM_KEYS[k] for k in settings.norms]
    except KeyError as exc:
        raise BadInput(f"unknown norm {exc.args[0]!r}; pick from {sorted(_NORM_KEYS)}") from None

    table = benchmarks.convergence_study(
        family_h=settings.family_h,
        family_u=settings.family_u,
        n_values=list(settings.n_values),
        norms=norms,
        dt_rule=settings.dt_rule,
        dt=settings.dt,
        lumping=args.lumping == "on",
        threads=settings.threads,
    )
    out_dir = _resolve_out_dir(args.out, settings.out_dir)
    write_csv(out_dir / "table.csv", _table_header(norms), table.rows())
    write_manifest(
        out_dir, "converge", _settings_echo(settings), started,
        n_values=list(settings.n_values),
    )
    finest = {f"{_NORM_HEADER[s]}_{w}": table.rates(s, w)[-1] for s in norms for w in ("H", "U")}
    print(f"{settings.family_h}/{settings.family_u} finest rates: "
          + ", ".join(f"{k} = {v:.3f}" for k, v in finest.items()))
    print(f"table written to {out_dir / 'table.csv'}")
    return 0


# -- bench ----------------------------------------------------------------------


def _bench_shoal35(args, out_dir: Path, amplitude: float) -> dict:
    study = benchmarks.shoaling_crest_study(
        amplitude=amplitude,
        family=args.family_h or "S3",
        dx=args.dx,
        dt=args.dt,
        with_gauges=True,
    )
    _write_gauges(out_dir, study.gauges)
    write_csv(out_dir / "crest.csv", ["t", "x", "eta", "eta_over_depth"], study.track)
    print(f"shoaling amplification exponent: {study.exponent:.4f}")
    return {"amplitude": amplitude, "shoaling_exponent": study.exponent}


def _bench_wall(args, out_dir: Path, amplitude: float) -> dict:
    fam = args.family_h or "S3"
    extras: dict = {"amplitude": amplitude}
    if args.collision_check:
        check = benchmarks.collision_check(amplitude, family=fam, dx=args.dx, dt=args.dt)
        _write_gauges(out_dir, check.wall)
        _write_gauges(out_dir, check.collision, name="collision_gauges.csv")
        extras["collision_discrepancy"] = check.discrepancy
        record = check.wall
        print(f"max wall-vs-collision gauge discrepancy: {check.discrepancy:.3e}"
              f" ({100.0 * check.discrepancy / amplitude:.3f}% of the amplitude)")
    else:
        record = benchmarks.wall_gauge_study(amplitude, family=fam, dx=args.dx, dt=args.dt)
        _write_gauges(out_dir, record)
    r_max = wall_runup(record, 0.0)
    extras["r_max"] = r_max
    extras["r_asym"] = benchmarks.runup_asymptote(amplitude)
    print(f"maximum runup at the wall: {r_max:.4f} (asymptotic estimate {extras['r_asym']:.4f})")
    return extras


def _bench_beach50(args, out_dir: Path, amplitude: float) -> dict:
    record = benchmarks.beach_gauge_study(
        amplitude=amplitude, family=args.family_h or "S3", dx=args.dx, dt=args.dt
    )
    _write_gauges(out_dir, record)
    peaks = record.eta_array().max(axis=0)
    for x_g, peak in zip(record.positions, peaks):
        print(f"gauge at x = {x_g:g}: peak elevation {peak:.4f}")
    return {"amplitude": amplitude, "gauge_peaks": [float(p) for p in peaks]}


def _bench_revere(args, out_dir: Path, amplitude: float) -> dict:
    result = benchmarks.revere_runup(
        relative_amplitude=amplitude, family=args.family_h or "S3", dx=args.dx, dt=args.dt
    )
    _write_gauges(out_dir, result.record)
    lab = {0.05: 0.13, 0.3: 0.45}.get(round(amplitude, 3))
    note = f" (laboratory value {lab} m)" if lab is not None else ""
    print(f"A/b0 = {amplitude:g}: runup {result.runup:.4f} m{note}; "
          f"R/b0 = {result.runup_over_depth:.4f}")
    return {
        "relative_amplitude": amplitude,
        "runup_m": result.runup,
        "runup_over_depth": result.runup_over_depth,
    }


def _bench_runup_sweep(args, out_dir: Path, amplitude: float | None) -> dict:
    families = [args.family_h] if args.family_h else ["P1", "S3"]
    sweep = benchmarks.runup_sweep(
        families=families, dx=args.dx, dt=args.dt, threads=args.threads or 1
    )
    for fam, rows in sweep.items():
        name = "runup.csv" if len(families) == 1 else f"runup_{fam}.csv"
        write_csv(out_dir / name, ["A", "Rmax", "Rasym"],
                  [[r.amplitude, r.r_max, r.r_asym] for r in rows])
    extras: dict = {"families": families, "rows": len(next(iter(sweep.values())))}
    if len(families) > 1:
        a = np.array([r.r_max for r in sweep[families[0]]])
        b = np.array([r.r_max for r in sweep[families[1]]])
        gap = float(np.abs(a - b).max() / np.abs(b).max())
        extras["cross_family_gap"] = gap
        print(f"max relative runup gap between {families[0]} and {families[1]}: {gap:.4%}")
    print(f"sweep of {extras['rows']} amplitudes written to {out_dir}")
    return extras


_BENCH_DEFAULT_AMPLITUDE = {
    "shoal35": 0.2,
    "wall": 0.2,
    "beach50": 0.07,
    "revere": 0.05,
    "runup-sweep": None,
}

_BENCH_RUNNERS = {
    "shoal35": _bench_shoal35,
    "wall": _bench_wall,
    "beach50": _bench_beach50,
    "revere": _bench_revere,
    "runup-sweep": _bench_runup_sweep,
}


def cmd_bench(args) -> int:
    started = time.perf_counter()
    if args.name not in _BENCH_RUNNERS:
        raise BadInput(f"unknown benchmark {args.name!r}; pick from {', '.join(BENCH_NAMES)}")
    amplitude = args.amplitude if args.amplitude is not None else _BENCH_DEFAULT_AMPLITUDE[args.name]
    out_dir = _resolve_out_dir(args.out, "")
    extras = _BENCH_RUNNERS[args.name](args, out_dir, amplitude)
    echo = {
        "name": args.name,
        "amplitude": amplitude,
        "dx": args.dx,
        "dt": args.dt,
        "family_h": args.family_h,
        "family_u": args.family_u,
        "threads": args.threads,
        "collision_check": bool(args.collision_check),
    }
    write_manifest(out_dir, f"bench {args.name}", echo, started, **extras)
    return 0


# -- argument parsing -------------------------------------------------------------


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="TOML configuration file")
    p.add_argument("--out", metavar="DIR", help="output directory (or $SGN_OUT_DIR, or .)")
    p.add_argument("--dt", type=float, help="time step override")
    p.add_argument("--dx", type=float, help="mesh size override")
    p.add_argument("--family-h", choices=["P1", "P2", "P3", "S3"], help="depth space family")
    p.add_argument("--family-u", choices=["P1", "P2", "P3", "S3"], help="velocity space family")
    p.add_argument("--lumping", choices=["on", "off"], help="mass lumping for P1/P2 spaces")
    p.add_argument("--verify-rkf", action="store_true",
                   help="cross-check the fixed-step result with an adaptive integrator")
    p.add_argument("--collision-check", action="store_true",
                   help="wall bench: also run the mirrored head-on collision")
    p.add_argument("--threads", type=int, metavar="K", help="parallel workers for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sgnfem", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="verb", required=True)

    p_run = sub.add_parser("run", help="execute one configured scenario",
                           description=f"known scenarios: {', '.join(scenario_names())}")
    _common_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_conv = sub.add_parser("converge", help="error/rate table on a mesh ladder")
    _common_flags(p_conv)
    p_conv.set_defaults(func=cmd_converge)

    p_bench = sub.add_parser("bench", help="run a named experiment preset")
    p_bench.add_argument("name", help=f"one of: {', '.join(BENCH_NAMES)}")
    p_bench.add_argument("amplitude", nargs="?", type=float,
                         help="wave amplitude (relative to depth for revere)")
    _common_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except NumericalFailure as exc:
        # the message carries the failing simulation time when known
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except SgnError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
