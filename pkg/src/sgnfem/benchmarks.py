"""Benchmark drivers: convergence tables, invariant studies, runup sweeps.

Pure computation. Every driver returns plain data (tables, gauge
records, result rows); file output lives in the command-line layer.
Independent runs inside a sweep may execute on worker threads; results
are always assembled in parameter order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import bathymetry as bathy
from . import manufactured
from .diagnostics import (
    ConvergenceTable,
    GaugeRecord,
    crest_point,
    error_norm,
    fit_shoaling_exponent,
    record_gauges,
    reflection_equivalence,
)
from .errors import BadInput
from .scenarios import (
    REVERE_DEPTH,
    WALL_SWEEP_AMPLITUDES,
    Scenario,
    prepare,
    scenario,
)
from .solitary import SolitaryWave
from .stepper import RunConfig, run

DEFAULT_N_LADDER = (80, 160, 320, 640)
SPLINE_N_LADDER = (200, 250, 300, 350, 400, 450, 500)


def step_for(dx: float, dt_rule: str = "dx8", dt: float | None = None) -> float:
    """Time step for a convergence run at mesh size dx.

    "dx8" keeps temporal error below the spatial floor of every family
    in play at benchmark resolutions; "dx2" is the conservative
    quadratic rule; "fixed" uses the supplied dt unchanged.
    """
    if dt_rule == "dx8":
        return dx / 8.0
    if dt_rule == "dx2":
        return 0.1 * dx * dx
    if dt_rule == "fixed":
        if dt is None:
            raise BadInput("dt_rule 'fixed' needs an explicit dt")
        return dt
    raise BadInput(f"unknown dt rule {dt_rule!r}; use 'dx8', 'dx2' or 'fixed'")


def _map_ordered(fn: Callable, args: Sequence, threads: int) -> list:
    if threads <= 1 or len(args) <= 1:
        return [fn(a) for a in args]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, args))


# -- manufactured-solution convergence ---------------------------------------


def _manufactured_errors(
    n: int, fam_h: str, fam_u: str, norms, dt_rule: str, dt, lumping: bool
) -> dict:
    sc = scenario("manufactured_convergence")
    a, b = sc.domain
    dx = (b - a) / n
    ctx, state = prepare(sc, family_h=fam_h, family_u=fam_u, dx=dx, lumping=lumping)
    result = run(
        RunConfig(
            ctx=ctx,
            dt=step_for(dx, dt_rule, dt),
            t_end=sc.t_end,
            initial=state,
            forcing_h=sc.forcing_h,
            forcing_u=sc.forcing_u,
        )
    )
    t_fin = result.final.t
    exact = {
        "H": [manufactured.exact_h, manufactured.exact_h_x, manufactured.exact_h_xx],
        "U": [manufactured.exact_u, manufactured.exact_u_x, manufactured.exact_u_xx],
    }
    errs = {}
    for which, vec in (("H", result.final.H), ("U", result.final.U)):
        f, fx, fxx = [(lambda x, g=g: g(x, t_fin)) for g in exact[which]]
        for s in norms:
            errs[(s, which)] = error_norm(vec, f, s, exact_d1=fx, exact_d2=fxx)
    return errs


def convergence_study(
    family_h: str = "P1",
    family_u: str | None = None,
    n_values: Sequence[int] = DEFAULT_N_LADDER,
    norms: Sequence = (0, 1, "inf"),
    dt_rule: str = "dx8",
    dt: float | None = None,
    lumping: bool = False,
    threads: int = 1,
) -> ConvergenceTable:
    """Errors and rates for the forced exact-solution problem on a mesh ladder."""
    fam_u = family_u if family_u is not None else family_h
    norms = list(norms)
    table = ConvergenceTable(norms=norms)
    rows = _map_ordered(
        lambda n: _manufactured_errors(n, family_h, fam_u, norms, dt_rule, dt, lumping),
        list(n_values),
        threads,
    )
    for n, errs in zip(n_values, rows):
        table.add_row(n, errs)
    return table


# -- invariant conservation ---------------------------------------------------


@dataclass
class EnergyStudy:
    times: np.ndarray
    energy: np.ndarray
    bottom_reading: str
    step_count: int

    @property
    def initial(self) -> float:
        return float(self.energy[0])

    @property
    def max_drift(self) -> float:
        return float(np.abs(self.energy - self.energy[0]).max())


def energy_study(
    amplitude: float = 0.2,
    dx: float | None = None,
    dt: float | None = None,
    t_end: float | None = None,
    sample_period: float = 0.5,
    family_h: str = "S3",
    family_u: str = "S3",
    lumping: bool = False,
    bottom_coupling: str = "strong",
) -> EnergyStudy:
    """Long-time energy record for a solitary wave over the rippled bottom."""
    sc = scenario("energy_conservation", amplitude=amplitude)
    ctx, state = prepare(
        sc, family_h=family_h, family_u=family_u, dx=dx, lumping=lumping,
        bottom_coupling=bottom_coupling,
    )
    result = run(
        RunConfig(
            ctx=ctx,
            dt=dt if dt is not None else sc.step,
            t_end=t_end if t_end is not None else sc.t_end,
            initial=state,
            record_energy=True,
            sample_period=sample_period,
        )
    )
    return EnergyStudy(
        times=result.log.t,
        energy=result.log.energy,
        bottom_reading=sc.bottom_reading,
        step_count=result.step_count,
    )


@dataclass
class InvariantRow:
    amplitude: float
    initial: float
    final: float
    max_drift: float

    @property
    def digits(self) -> float:
        """Agreeing significant digits between I(t) and I(0) over the run."""
        if self.max_drift == 0.0:
            return np.inf
        return float(-np.log10(self.max_drift / abs(self.initial)))


def shoaling_invariants(
    amplitudes: Sequence[float] = (0.10, 0.15, 0.20, 0.25),
    family: str = "S3",
    t_end: float = 30.0,
    dx: float | None = None,
    dt: float | None = None,
    sample_period: float = 1.0,
    threads: int = 1,
) -> list[InvariantRow]:
    """Energy drift of shoaling runs on the 1:35 beach, one row per amplitude."""

    def one(a: float) -> InvariantRow:
        sc = scenario("shoal_35", amplitude=a, t_end=t_end)
        ctx, state = prepare(sc, family_h=family, family_u=family, dx=dx)
        result = run(
            RunConfig(
                ctx=ctx,
                dt=dt if dt is not None else sc.step,
                t_end=sc.t_end,
                initial=state,
                record_energy=True,
                sample_period=sample_period,
            )
        )
        e = result.log.energy
        return InvariantRow(
            amplitude=a,
            initial=float(e[0]),
            final=float(e[-1]),
            max_drift=float(np.abs(e - e[0]).max()),
        )

    return _map_ordered(one, list(amplitudes), threads)


# -- shoaling crest track ------------------------------------------------------


@dataclass
class ShoalingStudy:
    track: np.ndarray  # rows (t, x*, eta*, eta*/depth)
    exponent: float
    gauges: GaugeRecord | None = None


def shoaling_crest_study(
    amplitude: float = 0.2,
    family: str = "P1",
    dx: float | None = None,
    dt: float | None = None,
    t_end: float = 50.0,
    depth_window: tuple[float, float] = (0.45, 0.90),
    track_period: float = 0.5,
    gauge_period: float = 0.1,
    with_gauges: bool = False,
) -> ShoalingStudy:
    """Crest amplification along the 1:35 slope and its depth power law.

    The default fit window covers the gradual-shoaling zone only: below
    depth 0.45 the crest-to-depth ratio passes 0.5 and amplification
    steepens well beyond any single power law.
    """
    sc = scenario("shoal_35", amplitude=amplitude, t_end=t_end)
    ctx, state = prepare(sc, family_h=family, family_u=family, dx=dx)

    rows: list[tuple] = []
    gauges = GaugeRecord(positions=np.asarray(sc.gauges)) if with_gauges else None

    def track(step, st):
        rows.append((st.t, *crest_point(ctx, st)))

    callbacks = [(track_period, track)]
    if with_gauges:
        callbacks.append(
            (gauge_period, lambda step, st: record_gauges(ctx, st, sc.gauges, gauges) and None)
        )
    run(
        RunConfig(
            ctx=ctx, dt=dt if dt is not None else sc.step, t_end=sc.t_end,
            initial=state, callbacks=callbacks,
        )
    )

    arr = np.asarray(rows)
    depth = np.array([abs(float(sc.bathymetry(x))) for x in arr[:, 1]])
    lo, hi = depth_window
    on_slope = (arr[:, 1] > 0.0) & (depth >= lo) & (depth <= hi)
    if on_slope.sum() < 3:
        raise BadInput("crest never traversed the requested depth window")
    alpha = fit_shoaling_exponent(depth[on_slope], arr[on_slope, 2])
    return ShoalingStudy(track=arr, exponent=alpha, gauges=gauges)


# -- wall runup ----------------------------------------------------------------


def runup_asymptote(alpha: float) -> float:
    """Third-order maximum-runup estimate 2a + a^2/2 + a^3/2 for a = A/b0."""
    return 2.0 * alpha + 0.5 * alpha**2 + 0.5 * alpha**3


def _refined_peak(times: np.ndarray, series: np.ndarray) -> float:
    """Series maximum sharpened by a parabola through the top three samples."""
    j = int(np.argmax(series))
    if j == 0 or j == len(series) - 1:
        return float(series[j])
    y0, y1, y2 = series[j - 1 : j + 2]
    denom = y0 - 2.0 * y1 + y2
    if denom >= 0.0:
        return float(y1)
    return float(y1 - 0.125 * (y2 - y0) ** 2 / denom)


def _wall_runup_scenario(amplitude: float, t_end: float = 35.0) -> Scenario:
    """Short flat-channel variant of the wall reflection used for runup sweeps.

    The wave starts 30 depths from the wall; maximum runup occurs well
    before any reflected signal reaches the far boundary.
    """
    bottom = bathy.preset("flat", depth=1.0)
    wave = SolitaryWave(amplitude, depth=1.0, g=1.0, x0=-30.0)
    return Scenario(
        name="wall_runup",
        bathymetry=bottom,
        domain=(-60.0, 0.0),
        dx=0.1,
        t_end=t_end,
        initial_h=lambda x: wave.eta(x) + 1.0,
        initial_u=lambda x: wave.u(x),
        gauges=(0.0,),
        amplitude=amplitude,
        description="runup-only wall reflection on a shortened channel",
    )


@dataclass
class RunupRow:
    amplitude: float
    r_max: float
    r_asym: float


def single_runup(
    amplitude: float,
    family: str = "S3",
    dx: float | None = None,
    dt: float | None = None,
    t_end: float = 35.0,
    gauge_period: float = 0.05,
    lumping: bool = False,
) -> RunupRow:
    """Maximum runup of one solitary wave against the vertical wall."""
    sc = _wall_runup_scenario(amplitude, t_end=t_end)
    ctx, state = prepare(sc, family_h=family, family_u=family, dx=dx, lumping=lumping)
    record = GaugeRecord(positions=np.asarray(sc.gauges))

    def obs(step, st):
        record_gauges(ctx, st, sc.gauges, record)

    run(
        RunConfig(
            ctx=ctx, dt=dt if dt is not None else sc.step, t_end=sc.t_end,
            initial=state, callbacks=[(gauge_period, obs)],
        )
    )
    peak = _refined_peak(record.time_array(), record.eta_array()[:, 0])
    return RunupRow(amplitude=amplitude, r_max=peak, r_asym=runup_asymptote(amplitude))


def runup_sweep(
    amplitudes: Sequence[float] = WALL_SWEEP_AMPLITUDES,
    families: Sequence[str] = ("P1", "S3"),
    dx: float | None = None,
    dt: float | None = None,
    threads: int = 1,
) -> dict[str, list[RunupRow]]:
    """Runup versus amplitude for each requested element family."""
    jobs = [(fam, a) for fam in families for a in amplitudes]
    rows = _map_ordered(
        lambda job: single_runup(job[1], family=job[0], dx=dx, dt=dt), jobs, threads
    )
    out: dict[str, list[RunupRow]] = {fam: [] for fam in families}
    for (fam, _), row in zip(jobs, rows):
        out[fam].append(row)
    return out


# -- wall reflection versus head-on collision ----------------------------------


def _gauge_run(sc: Scenario, family: str, dx, sample_period: float, dt=None) -> GaugeRecord:
    ctx, state = prepare(sc, family_h=family, family_u=family, dx=dx)
    record = GaugeRecord(positions=np.asarray(sc.gauges))

    def obs(step, st):
        record_gauges(ctx, st, sc.gauges, record)

    run(
        RunConfig(
            ctx=ctx, dt=dt if dt is not None else sc.step, t_end=sc.t_end,
            initial=state, callbacks=[(sample_period, obs)],
        )
    )
    return record


def _collision_scenario(amplitude: float, t_end: float) -> Scenario:
    """Two mirrored solitary waves meeting head-on at x = 0.

    On the symmetric domain the midpoint behaves exactly like the
    vertical wall of the reflection run, so both runs share gauges.
    """
    bottom = bathy.preset("flat", depth=1.0)
    wave = SolitaryWave(amplitude, depth=1.0, g=1.0, x0=-50.0)

    def h0(x):
        x = np.asarray(x, dtype=float)
        return wave.eta(x) + wave.eta(-x) + 1.0

    def u0(x):
        x = np.asarray(x, dtype=float)
        return wave.u(x) - wave.u(-x)

    return Scenario(
        name="head_on_collision",
        bathymetry=bottom,
        domain=(-100.0, 100.0),
        dx=0.1,
        t_end=t_end,
        initial_h=h0,
        initial_u=u0,
        gauges=tuple(scenario("wall_reflection").gauges),
        amplitude=amplitude,
        description="mirrored-wave collision equivalent to the wall reflection",
    )


@dataclass
class CollisionCheck:
    amplitude: float
    wall: GaugeRecord
    collision: GaugeRecord
    discrepancy: float


def wall_gauge_study(
    amplitude: float = 0.2,
    family: str = "S3",
    dx: float | None = None,
    dt: float | None = None,
    t_end: float = 60.0,
    gauge_period: float = 0.1,
) -> GaugeRecord:
    """Gauge traces for the flat-channel wall reflection."""
    sc = scenario("wall_reflection", amplitude=amplitude, t_end=t_end)
    return _gauge_run(sc, family, dx, gauge_period, dt=dt)


def collision_check(
    amplitude: float,
    family: str = "S3",
    dx: float | None = None,
    dt: float | None = None,
    t_end: float = 60.0,
    sample_period: float = 0.1,
) -> CollisionCheck:
    """Max gauge discrepancy between the wall run and the mirrored collision."""
    wall_sc = scenario("wall_reflection", amplitude=amplitude, t_end=t_end)
    wall_rec = _gauge_run(wall_sc, family, dx, sample_period, dt=dt)
    coll_rec = _gauge_run(_collision_scenario(amplitude, t_end), family, dx, sample_period, dt=dt)
    return CollisionCheck(
        amplitude=amplitude,
        wall=wall_rec,
        collision=coll_rec,
        discrepancy=reflection_equivalence(wall_rec, coll_rec),
    )


# -- laboratory-scale composite beach ------------------------------------------


@dataclass
class RevereResult:
    relative_amplitude: float
    runup: float  # meters
    runup_over_depth: float
    record: GaugeRecord


def revere_runup(
    relative_amplitude: float = 0.05,
    family: str = "S3",
    dx: float | None = None,
    dt: float | None = None,
    t_end: float = 25.0,
    gauge_period: float = 0.02,
) -> RevereResult:
    """Wall runup on the composite laboratory beach, in meters and per depth."""
    sc = scenario("revere", relative_amplitude=relative_amplitude, t_end=t_end)
    ctx, state = prepare(sc, family_h=family, family_u=family, dx=dx)
    record = GaugeRecord(positions=np.asarray(sc.gauges))

    def obs(step, st):
        record_gauges(ctx, st, sc.gauges, record)

    run(
        RunConfig(
            ctx=ctx, dt=dt if dt is not None else sc.step, t_end=sc.t_end,
            initial=state, callbacks=[(gauge_period, obs)],
        )
    )
    peak = _refined_peak(record.time_array(), record.eta_array()[:, 0])
    return RevereResult(
        relative_amplitude=relative_amplitude,
        runup=peak,
        runup_over_depth=peak / REVERE_DEPTH,
        record=record,
    )


def beach_gauge_study(
    amplitude: float = 0.07,
    family: str = "S3",
    dx: float | None = None,
    dt: float | None = None,
    t_end: float = 70.0,
    gauge_period: float = 0.1,
) -> GaugeRecord:
    """Gauge traces for the 1:50 beach terminated by a wall."""
    sc = scenario("beach_50_wall", amplitude=amplitude, t_end=t_end)
    return _gauge_run(sc, family, dx, gauge_period, dt=dt)
