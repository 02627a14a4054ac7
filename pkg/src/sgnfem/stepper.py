"""Explicit RK4 time marching with per-stage linear solves.

Each stage rebuilds the velocity system matrix B at the stage depth and
solves three banded systems: the Gram system for the nonlinear discrete
Laplacian, the Gram system for the depth rate, and the SPD B system for
the velocity rate. Classical tableau, weights (1/6, 1/3, 1/3, 1/6) at
stage times (0, 1/2, 1/2, 1).

An adaptive Runge-Kutta-Fehlberg driver is included purely as a
verification mode to cross-check fixed-step results; it is never the
default path.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from numpy.typing import NDArray

from .assembly import (
    AssemblyContext,
    SgnState,
    assemble_momentum_matrix,
    continuity_rhs,
    energy_integral,
    min_depth,
    momentum_rhs,
    nonlinear_discrete_laplacian,
    standard_galerkin_momentum_rhs,
)
from .errors import BadInput, DepthCollapse, NotPositiveDefinite
from .spaces import CoefficientVector

Forcing = Callable[[NDArray[np.float64], float], NDArray[np.float64]]
Observer = Callable[[int, SgnState], Any]

# Stability margin for the explicit scheme on smooth data. Above HARD the
# run refuses to start; between SOFT and HARD it proceeds with a warning.
CFL_SOFT = 1.5
CFL_HARD = 2.0


@dataclass
class RunConfig:
    ctx: AssemblyContext
    dt: float
    t_end: float
    initial: SgnState
    callbacks: Sequence[tuple[float, Observer]] = field(default_factory=list)
    depth_floor: float = 1e-8
    record_energy: bool = False
    sample_period: float | None = None
    forcing_h: Forcing | None = None
    forcing_u: Forcing | None = None
    momentum_form: str = "modified"
    freeze_b_within_step: bool = False

    def __post_init__(self):
        if self.dt <= 0:
            raise BadInput(f"dt must be positive, got {self.dt}")
        if self.t_end < self.dt:
            raise BadInput(f"t_end {self.t_end} is below one step dt {self.dt}")
        if self.momentum_form not in ("modified", "standard"):
            raise BadInput(f"momentum_form must be 'modified' or 'standard', not {self.momentum_form!r}")
        ratio = self.dt / self.ctx.mesh.dx
        if ratio > CFL_HARD:
            raise BadInput(f"dt/dx = {ratio:.3g} exceeds the stability bound {CFL_HARD}")
        if ratio > CFL_SOFT:
            warnings.warn(
                f"dt/dx = {ratio:.3g} is close to the stability bound {CFL_HARD}",
                RuntimeWarning,
                stacklevel=2,
            )


@dataclass
class DiagnosticsLog:
    t: NDArray[np.float64]
    min_depth: NDArray[np.float64]
    energy: NDArray[np.float64] | None


@dataclass
class RunResult:
    final: SgnState
    step_count: int
    observations: list[list[Any]]
    log: DiagnosticsLog


def _rates(
    ctx: AssemblyContext,
    hv: NDArray[np.float64],
    uv: NDArray[np.float64],
    t: float,
    depth_floor: float,
    forcing_h: Forcing | None,
    forcing_u: Forcing | None,
    momentum_form: str,
    frozen_b=None,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Time derivatives (dH/dt, dU/dt) at one stage state."""
    H = CoefficientVector(ctx.space_h, hv)
    U = CoefficientVector(ctx.space_u, uv)
    if min_depth(ctx, H) < depth_floor:
        raise DepthCollapse(f"depth fell below the floor {depth_floor}", t=t)
    h_dot = ctx.gram_h.solve(continuity_rhs(ctx, H, U, forcing_h, t))
    b_mat = frozen_b if frozen_b is not None else assemble_momentum_matrix(ctx, H)
    if momentum_form == "standard":
        load = standard_galerkin_momentum_rhs(ctx, H, U, forcing_u, t)
    else:
        W = nonlinear_discrete_laplacian(ctx, U)
        load = momentum_rhs(ctx, H, U, W, forcing_u, t)
    try:
        u_dot = b_mat.solve(load)
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(f"velocity system lost positivity: {exc}", t=t) from None
    return h_dot, u_dot


def rk4_step(
    ctx: AssemblyContext,
    state: SgnState,
    dt: float,
    depth_floor: float = 0.0,
    forcing_h: Forcing | None = None,
    forcing_u: Forcing | None = None,
    momentum_form: str = "modified",
    freeze_b_within_step: bool = False,
) -> SgnState:
    """One classical RK4 step; B is rebuilt at each stage depth by default."""
    hv, uv, t = state.H.values, state.U.values, state.t
    frozen_b = assemble_momentum_matrix(ctx, state.H) if freeze_b_within_step else None

    def f(hh, uu, tau):
        return _rates(ctx, hh, uu, tau, depth_floor, forcing_h, forcing_u, momentum_form, frozen_b)

    k1h, k1u = f(hv, uv, t)
    k2h, k2u = f(hv + 0.5 * dt * k1h, uv + 0.5 * dt * k1u, t + 0.5 * dt)
    k3h, k3u = f(hv + 0.5 * dt * k2h, uv + 0.5 * dt * k2u, t + 0.5 * dt)
    k4h, k4u = f(hv + dt * k3h, uv + dt * k3u, t + dt)
    new_h = hv + dt / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h)
    new_u = uv + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    return SgnState(
        H=CoefficientVector(ctx.space_h, new_h),
        U=CoefficientVector(ctx.space_u, new_u),
        t=t + dt,
    )


def run(config: RunConfig) -> RunResult:
    """March the initial state to t_end, firing observers on their periods.

    Observers receive (step, state) and must not mutate the state; any
    value they return is collected into RunResult.observations (one list
    per callback, in the configured order). Every callback also fires on
    the initial state and after the final step.
    """
    ctx = config.ctx
    dt = config.dt
    n_steps = max(1, round(config.t_end / dt))
    periods = [max(1, round(p / dt)) for p, _ in config.callbacks]
    observations: list[list[Any]] = [[] for _ in config.callbacks]

    if config.sample_period is None:
        sample_every = max(1, n_steps // 200)
    else:
        sample_every = max(1, round(config.sample_period / dt))
    log_t, log_depth, log_energy = [], [], []

    state = config.initial.copy()

    def fire(step: int) -> None:
        for k, (_, obs) in enumerate(config.callbacks):
            if step % periods[k] == 0 or step == n_steps:
                out = obs(step, state)
                if out is not None:
                    observations[k].append(out)
        if step % sample_every == 0 or step == n_steps:
            log_t.append(state.t)
            log_depth.append(min_depth(ctx, state.H))
            if config.record_energy:
                log_energy.append(energy_integral(ctx, state.H, state.U))

    fire(0)
    for step in range(1, n_steps + 1):
        try:
            state = rk4_step(
                ctx,
                state,
                dt,
                depth_floor=config.depth_floor,
                forcing_h=config.forcing_h,
                forcing_u=config.forcing_u,
                momentum_form=config.momentum_form,
                freeze_b_within_step=config.freeze_b_within_step,
            )
        except DepthCollapse:
            raise
        fire(step)

    log = DiagnosticsLog(
        t=np.asarray(log_t),
        min_depth=np.asarray(log_depth),
        energy=np.asarray(log_energy) if config.record_energy else None,
    )
    return RunResult(final=state, step_count=n_steps, observations=observations, log=log)


# -- adaptive verification driver -------------------------------------------

# Runge-Kutta-Fehlberg 4(5) tableau.
_RKF_C = np.array([0.0, 0.25, 3.0 / 8.0, 12.0 / 13.0, 1.0, 0.5])
_RKF_A = [
    (),
    (0.25,),
    (3.0 / 32.0, 9.0 / 32.0),
    (1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0),
    (439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0),
    (-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0),
]
_RKF_B5 = np.array([16.0 / 135.0, 0.0, 6656.0 / 12825.0, 28561.0 / 56430.0, -9.0 / 50.0, 2.0 / 55.0])
_RKF_B4 = np.array([25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -0.2, 0.0])


def rkf45_run(
    ctx: AssemblyContext,
    initial: SgnState,
    t_end: float,
    rtol: float = 1e-8,
    atol: float = 1e-10,
    dt0: float | None = None,
    depth_floor: float = 0.0,
    forcing_h: Forcing | None = None,
    forcing_u: Forcing | None = None,
) -> SgnState:
    """Integrate with adaptive step control; used to cross-check rk4 runs."""
    state = initial.copy()
    hv, uv, t = state.H.values.copy(), state.U.values.copy(), state.t
    dt = dt0 if dt0 is not None else 0.1 * ctx.mesh.dx
    scale_ref = max(np.abs(hv).max(), np.abs(uv).max(), 1.0)
    while t < t_end - 1e-14 * max(1.0, t_end):
        dt = min(dt, t_end - t)
        kh, ku = [], []
        for i in range(6):
            dh = sum(a * k for a, k in zip(_RKF_A[i], kh)) if i else 0.0
            du = sum(a * k for a, k in zip(_RKF_A[i], ku)) if i else 0.0
            rh, ru = _rates(
                ctx, hv + dt * dh, uv + dt * du, t + _RKF_C[i] * dt,
                depth_floor, forcing_h, forcing_u, "modified",
            )
            kh.append(rh)
            ku.append(ru)
        err_h = dt * sum((b5 - b4) * k for b5, b4, k in zip(_RKF_B5, _RKF_B4, kh))
        err_u = dt * sum((b5 - b4) * k for b5, b4, k in zip(_RKF_B5, _RKF_B4, ku))
        tol = atol + rtol * scale_ref
        err = max(np.abs(err_h).max(), np.abs(err_u).max()) / tol
        if err <= 1.0:
            hv = hv + dt * sum(b * k for b, k in zip(_RKF_B5, kh))
            uv = uv + dt * sum(b * k for b, k in zip(_RKF_B5, ku))
            t += dt
        grow = 0.9 * err ** (-0.2) if err > 0 else 5.0
        dt *= min(5.0, max(0.2, grow))
        if dt / ctx.mesh.dx > CFL_HARD:
            dt = CFL_HARD * ctx.mesh.dx
    return SgnState(
        H=CoefficientVector(ctx.space_h, hv),
        U=CoefficientVector(ctx.space_u, uv),
        t=t,
    )
