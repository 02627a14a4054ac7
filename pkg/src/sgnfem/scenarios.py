"""Named benchmark scenarios: geometry, initial data, gauges, run defaults.

Every solitary-wave scenario starts the wave on a flat segment of the
bottom. Initial data are given as surface elevation eta0 = A sech^2 and
the flat-bottom closed-form velocity written as a function of eta0,

  h0(x) = eta0(x) - b(x),   u0(x) = c_s (1 - b0 / (b0 + eta0(x))),

which reduces to the exact traveling wave wherever the bottom is flat.
States enter the solver by L2 projection of these callables.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import bathymetry as bathy
from . import manufactured
from .assembly import AssemblyContext, SgnState, depth_guard as _depth_guard, energy_integral
from .bathymetry import Bathymetry
from .errors import BadInput, UnknownScenario
from .mesh import make_uniform_mesh
from .solitary import SolitaryWave
from .spaces import Family, FunctionSpace, Trace, default_rule, l2_project

DEFAULT_DT_CAP = 0.01


def default_dt(dx: float) -> float:
    """min(0.01, 0.1 dx): benchmark runs resolve time well below the mesh scale."""
    return min(DEFAULT_DT_CAP, 0.1 * dx)


def solitary_wave_fields(wave: SolitaryWave, t: float = 0.0):
    """(h, u) callables of x at a fixed time for the closed-form wave."""
    return (lambda x: wave.h(x, t)), (lambda x: wave.u(x, t))


def energy(ctx: AssemblyContext, state: SgnState) -> float:
    return energy_integral(ctx, state.H, state.U)


def depth_guard(ctx: AssemblyContext, state: SgnState, alpha: float):
    return _depth_guard(ctx, state.H, alpha)


def manufactured_forcing():
    """(f_h, f_u) as (x, t) callables for the manufactured convergence runs."""
    return manufactured.forcing_h, manufactured.forcing_u


@dataclass(frozen=True)
class Scenario:
    name: str
    bathymetry: Bathymetry
    domain: tuple[float, float]
    dx: float
    t_end: float
    initial_h: Callable
    initial_u: Callable
    g: float = 1.0
    dt: float | None = None
    family_h: Family = Family.S3
    family_u: Family = Family.S3
    gauges: tuple[float, ...] = ()
    forcing_h: Callable | None = None
    forcing_u: Callable | None = None
    amplitude: float | None = None
    bottom_reading: str = ""
    description: str = ""

    def __post_init__(self):
        a, b = self.domain
        if not b > a:
            raise BadInput(f"empty domain {self.domain}")
        for x_g in self.gauges:
            if not a <= x_g <= b:
                raise BadInput(f"gauge {x_g} outside domain [{a}, {b}]")

    @property
    def step(self) -> float:
        return self.dt if self.dt is not None else default_dt(self.dx)

    def n_elements(self, dx: float | None = None) -> int:
        a, b = self.domain
        return max(2, round((b - a) / (dx or self.dx)))


def _solitary_initials(wave: SolitaryWave, bottom: Bathymetry):
    def h0(x):
        return wave.eta(x) - bottom(x)

    def u0(x):
        return wave.u(x)

    return h0, u0


def _energy_conservation(amplitude: float = 0.2) -> Scenario:
    bottom = bathy.preset("sinusoidal_energy")
    wave = SolitaryWave(amplitude, depth=1.0, g=1.0, x0=0.0)
    h0, u0 = _solitary_initials(wave, bottom)
    return Scenario(
        name="energy_conservation",
        bathymetry=bottom,
        domain=(-100.0, 100.0),
        dx=0.1,
        dt=0.01,
        t_end=50.0,
        initial_h=h0,
        initial_u=u0,
        amplitude=amplitude,
        bottom_reading="ripple around depth 1: b(x) = -1 + 0.1 sin(pi x / 2)",
        description="long-time invariant conservation over a rippled bottom",
    )


_SHOAL_GAUGES = (-5.0, 20.96, 22.55, 23.68, 24.68, 25.91)


def _shoal_35(amplitude: float = 0.2, t_end: float = 30.0) -> Scenario:
    bottom = bathy.preset("grilli_35")
    wave = SolitaryWave(amplitude, depth=1.0, g=1.0, x0=-20.1171)
    h0, u0 = _solitary_initials(wave, bottom)
    return Scenario(
        name="shoal_35",
        bathymetry=bottom,
        domain=(-100.0, 34.0),
        dx=0.1,
        t_end=t_end,
        initial_h=h0,
        initial_u=u0,
        gauges=_SHOAL_GAUGES,
        amplitude=amplitude,
        description="solitary wave shoaling on a 1:35 beach with end wall",
    )


WALL_SWEEP_AMPLITUDES = (0.075, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4,
                         0.45, 0.5, 0.55, 0.6, 0.65, 0.7)
_WALL_GAUGES = (-25.0, -10.0, -5.0, 0.0)


def _wall_reflection(amplitude: float = 0.2, t_end: float = 60.0) -> Scenario:
    bottom = bathy.preset("flat", depth=1.0)
    wave = SolitaryWave(amplitude, depth=1.0, g=1.0, x0=-50.0)
    h0, u0 = _solitary_initials(wave, bottom)
    return Scenario(
        name="wall_reflection",
        bathymetry=bottom,
        domain=(-100.0, 0.0),
        dx=0.1,
        t_end=t_end,
        initial_h=h0,
        initial_u=u0,
        gauges=_WALL_GAUGES,
        amplitude=amplitude,
        description="solitary wave reflecting at the vertical wall x = 0",
    )


def _beach_50_wall(amplitude: float = 0.07, t_end: float = 70.0) -> Scenario:
    bottom = bathy.preset("beach_50_wall")
    wave = SolitaryWave(amplitude, depth=1.0, g=1.0, x0=-30.0)
    h0, u0 = _solitary_initials(wave, bottom)
    return Scenario(
        name="beach_50_wall",
        bathymetry=bottom,
        domain=(-100.0, 20.0),
        dx=0.1,
        t_end=t_end,
        initial_h=h0,
        initial_u=u0,
        gauges=(0.0, 16.25, 17.75),
        amplitude=amplitude,
        description="shoaling wave on a 1:50 beach reflecting at the wall x = 20",
    )


REVERE_DEPTH = 0.218
REVERE_WALL = 23.23


def _revere(relative_amplitude: float = 0.05, t_end: float = 25.0) -> Scenario:
    bottom = bathy.preset("revere")
    wave = SolitaryWave(
        relative_amplitude * REVERE_DEPTH, depth=REVERE_DEPTH, g=9.81, x0=0.0
    )
    h0, u0 = _solitary_initials(wave, bottom)
    return Scenario(
        name="revere",
        bathymetry=bottom,
        domain=(-11.77, REVERE_WALL),
        dx=0.1,
        t_end=t_end,
        g=9.81,
        initial_h=h0,
        initial_u=u0,
        gauges=(REVERE_WALL,),
        amplitude=relative_amplitude * REVERE_DEPTH,
        description="composite-beach wall reflection at laboratory scale",
    )


def _manufactured_convergence() -> Scenario:
    zero = bathy.from_analytic(
        lambda x: np.zeros_like(x),
        lambda x: np.zeros_like(x),
        lambda x: np.zeros_like(x),
        description="zero datum",
    )
    return Scenario(
        name="manufactured_convergence",
        bathymetry=zero,
        domain=manufactured.DOMAIN,
        dx=1.0 / 100.0,
        dt=None,
        t_end=manufactured.T_FINAL,
        initial_h=lambda x: manufactured.exact_h(x, 0.0),
        initial_u=lambda x: manufactured.exact_u(x, 0.0),
        g=manufactured.GRAVITY,
        family_h=Family.P1,
        family_u=Family.P1,
        forcing_h=manufactured.forcing_h,
        forcing_u=manufactured.forcing_u,
        description="forced exact-solution run for convergence tables",
    )


_FACTORIES = {
    "energy_conservation": _energy_conservation,
    "shoal_35": _shoal_35,
    "wall_reflection": _wall_reflection,
    "beach_50_wall": _beach_50_wall,
    "revere": _revere,
    "manufactured_convergence": _manufactured_convergence,
}


def scenario(name: str, **kwargs) -> Scenario:
    """Build a named scenario; amplitude-like keywords go to the factory."""
    try:
        factory = _FACTORIES[name]
    except KeyError:
        known = ", ".join(sorted(_FACTORIES))
        raise UnknownScenario(f"unknown scenario {name!r}; known: {known}") from None
    return factory(**kwargs)


def scenario_names() -> tuple[str, ...]:
    return tuple(sorted(_FACTORIES))


def prepare(
    sc: Scenario,
    family_h: Family | str | None = None,
    family_u: Family | str | None = None,
    dx: float | None = None,
    lumping: bool = False,
    bottom_coupling: str = "strong",
    rule=None,
) -> tuple[AssemblyContext, SgnState]:
    """Mesh, spaces, context and the projected initial state for a scenario."""
    fam_h = Family(family_h) if family_h is not None else sc.family_h
    fam_u = Family(family_u) if family_u is not None else sc.family_u
    step = dx if dx is not None else sc.dx
    a, b = sc.domain
    mesh = make_uniform_mesh(a, b, sc.n_elements(step))
    space_h = FunctionSpace(mesh, fam_h, Trace.FREE)
    space_u = FunctionSpace(mesh, fam_u, Trace.ZERO_AT_ENDS)
    ctx = AssemblyContext(
        space_h,
        space_u,
        sc.bathymetry,
        rule=rule or default_rule(fam_h, fam_u),
        g=sc.g,
        lumping=lumping,
        bottom_coupling=bottom_coupling,
    )
    state = SgnState(
        H=l2_project(sc.initial_h, space_h, ctx.rule),
        U=l2_project(sc.initial_u, space_u, ctx.rule),
        t=0.0,
    )
    return ctx, state


def with_amplitude(sc: Scenario, wave: SolitaryWave) -> Scenario:
    """Same geometry, different incident wave."""
    h0, u0 = _solitary_initials(wave, sc.bathymetry)
    return replace(sc, initial_h=h0, initial_u=u0, amplitude=wave.amplitude)
