"""Error norms, convergence rates, gauges, crest tracking, runup extraction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

from .assembly import AssemblyContext, SgnState
from .errors import (
    BadInput,
    DegenerateFit,
    DerivUnsupported,
    MeshMismatch,
    NoCrest,
    OutOfDomain,
    ZeroNormalizer,
)
from .spaces import CoefficientVector, Family, eval_at_quad, eval_field, quad_grid

_LINF_SAMPLES_PER_ELEMENT = 20


def _norm_sq_quad(space, full_coeffs, rule, orders) -> float:
    grid = quad_grid(space.mesh, rule)
    total = 0.0
    for d in orders:
        vals = eval_at_quad(space, full_coeffs, rule, d)
        total += float(np.dot((vals * vals).sum(axis=0), grid.w))
    return total


def error_norm(
    computed: CoefficientVector,
    exact: Callable,
    s,
    exact_d1: Callable | None = None,
    exact_d2: Callable | None = None,
    rule=None,
) -> float:
    """Normalized Sobolev error ||computed - exact||_s / ||exact||_s.

    s is 0 (L2), 1 (H1), 2 (H2, C2 elements only) or the string "inf"
    (relative max error on a dense per-element sample). H1/H2 need the
    exact derivative callables.
    """
    space = computed.space
    if rule is None:
        from .spaces import default_rule

        rule = default_rule(space.family)
    if s == "inf" or s is np.inf:
        mesh = space.mesh
        t = np.linspace(0.0, 1.0, _LINF_SAMPLES_PER_ELEMENT, endpoint=False)
        x = (mesh.nodes[:-1][:, None] + mesh.dx * t[None, :]).ravel()
        x = np.append(x, mesh.b)
        ev = np.asarray(exact(x), dtype=float)
        denom = np.abs(ev).max()
        if denom < 1e-14:
            raise ZeroNormalizer("exact field is zero in the max norm")
        diff = eval_field(computed, x) - ev
        return float(np.abs(diff).max() / denom)
    if s not in (0, 1, 2):
        raise BadInput(f"norm order must be 0, 1, 2 or 'inf', got {s!r}")
    if s == 2 and space.family is not Family.S3:
        raise DerivUnsupported("H2 norms need C2 elements (S3)")
    derivs = [exact, exact_d1, exact_d2][: s + 1]
    if any(d is None for d in derivs):
        raise BadInput(f"H{s} norm needs exact derivatives up to order {s}")
    grid = quad_grid(space.mesh, rule)
    full = space.expand(computed.values)
    num = den = 0.0
    for d, ex in enumerate(derivs):
        vals = eval_at_quad(space, full, rule, d)
        ev = np.asarray(ex(grid.x), dtype=float)
        num += float(np.dot(((vals - ev) ** 2).sum(axis=0), grid.w))
        den += float(np.dot((ev * ev).sum(axis=0), grid.w))
    if den < 1e-28:
        raise ZeroNormalizer(f"exact field is zero in the H{s} norm")
    return float(np.sqrt(num / den))


def convergence_rate(e_prev: float, e_curr: float, dx_prev: float, dx_curr: float) -> float:
    """log(e_prev / e_curr) / log(dx_prev / dx_curr)."""
    if min(e_prev, e_curr, dx_prev, dx_curr) <= 0:
        raise BadInput("convergence_rate needs positive errors and mesh sizes")
    if dx_prev == dx_curr:
        raise BadInput("convergence_rate needs distinct mesh sizes")
    return float(np.log(e_prev / e_curr) / np.log(dx_prev / dx_curr))


NORM_LABELS = {0: "E0", 1: "E1", 2: "E2", "inf": "Einf"}


@dataclass
class ConvergenceTable:
    """Error and rate rows, one per mesh, for each norm and both fields."""

    norms: Sequence
    n_values: list[int] = field(default_factory=list)
    errors: dict = field(default_factory=dict)  # (norm, field) -> list of floats

    def add_row(self, n: int, errs: dict) -> None:
        self.n_values.append(n)
        for key, val in errs.items():
            self.errors.setdefault(key, []).append(float(val))

    def rates(self, norm, which: str) -> list[float]:
        errs = self.errors[(norm, which)]
        out = [float("nan")]
        for k in range(1, len(errs)):
            out.append(
                convergence_rate(
                    errs[k - 1], errs[k], 1.0 / self.n_values[k - 1], 1.0 / self.n_values[k]
                )
            )
        return out

    def columns(self) -> list[str]:
        cols = ["N"]
        for s in self.norms:
            lab = NORM_LABELS[s]
            for which in ("H", "U"):
                cols += [f"{lab}_{which}", f"rate_{lab}_{which}"]
        return cols

    def rows(self) -> list[list]:
        rate_cache = {
            (s, w): self.rates(s, w) for s in self.norms for w in ("H", "U")
        }
        out = []
        for k, n in enumerate(self.n_values):
            row: list = [n]
            for s in self.norms:
                for which in ("H", "U"):
                    row.append(self.errors[(s, which)][k])
                    row.append(rate_cache[(s, which)][k])
            out.append(row)
        return out


@dataclass
class GaugeRecord:
    """Surface-elevation time series at fixed gauge positions."""

    positions: NDArray[np.float64]
    times: list[float] = field(default_factory=list)
    eta: list[NDArray[np.float64]] = field(default_factory=list)
    u: list[NDArray[np.float64]] | None = None

    def __post_init__(self):
        self.positions = np.atleast_1d(np.asarray(self.positions, dtype=float))

    def append(self, t: float, eta: NDArray[np.float64], u: NDArray[np.float64] | None = None):
        if self.times and t <= self.times[-1]:
            raise BadInput(f"gauge sample times must increase, got {t} after {self.times[-1]}")
        if eta.shape != self.positions.shape:
            raise BadInput("one eta sample per gauge required")
        self.times.append(float(t))
        self.eta.append(np.asarray(eta, dtype=float))
        if u is not None:
            if self.u is None:
                self.u = []
            self.u.append(np.asarray(u, dtype=float))

    def time_array(self) -> NDArray[np.float64]:
        return np.asarray(self.times)

    def eta_array(self) -> NDArray[np.float64]:
        """(n_times, n_gauges)."""
        return np.asarray(self.eta)


def record_gauges(
    ctx: AssemblyContext,
    state: SgnState,
    positions,
    record: GaugeRecord | None = None,
    with_velocity: bool = False,
) -> GaugeRecord:
    """Append eta(x_g, t) = h(x_g) + b(x_g) per gauge; returns the record."""
    positions = np.atleast_1d(np.asarray(positions, dtype=float))
    mesh = ctx.mesh
    if np.any(positions < mesh.a) or np.any(positions > mesh.b):
        raise OutOfDomain(f"gauge outside [{mesh.a}, {mesh.b}]")
    if record is None:
        record = GaugeRecord(positions=positions)
    eta = eval_field(state.H, positions) + eval_field(ctx.dbath.b_h, positions)
    uvals = eval_field(state.U, positions) if with_velocity else None
    record.append(state.t, np.atleast_1d(eta), None if uvals is None else np.atleast_1d(uvals))
    return record


def crest_point(ctx: AssemblyContext, state: SgnState) -> tuple[float, float, float]:
    """(x*, eta(x*), eta(x*)/|b(x*)|) with x* from a quadratic through the maximal nodal triple."""
    mesh = ctx.mesh
    nodes = mesh.nodes
    eta = eval_field(state.H, nodes) + eval_field(ctx.dbath.b_h, nodes)
    if eta.max() - eta.min() < 1e-13:
        raise NoCrest("surface is flat; no crest to track")
    i = int(np.argmax(eta))
    i = min(max(i, 1), len(nodes) - 2)
    x3, y3 = nodes[i - 1 : i + 2], eta[i - 1 : i + 2]
    denom = y3[0] - 2.0 * y3[1] + y3[2]
    if denom >= 0.0:
        x_star = float(nodes[i])
    else:
        x_star = float(nodes[i] + 0.5 * mesh.dx * (y3[0] - y3[2]) / denom)
        x_star = float(np.clip(x_star, x3[0], x3[2]))
    eta_star = float(eval_field(state.H, x_star) + eval_field(ctx.dbath.b_h, x_star))
    depth = abs(float(ctx.bathymetry(x_star)))
    return x_star, eta_star, eta_star / depth if depth > 0 else float("inf")


def crest_track(ctx: AssemblyContext, states: Sequence[SgnState]) -> NDArray[np.float64]:
    """Rows of (t, x*, eta*, eta*/depth) over a state sequence."""
    rows = [(st.t, *crest_point(ctx, st)) for st in states]
    return np.asarray(rows)


def fit_shoaling_exponent(depths, eta_max) -> float:
    """Least-squares alpha in eta_max ~ depth^(-alpha)."""
    d = np.asarray(depths, dtype=float)
    e = np.asarray(eta_max, dtype=float)
    if d.size < 3:
        raise BadInput("need at least 3 (depth, eta_max) samples")
    if np.any(d <= 0) or np.any(e <= 0):
        raise BadInput("depths and crest heights must be positive")
    lx = -np.log(d)
    if np.ptp(lx) < 1e-12:
        raise DegenerateFit("all depths equal; exponent undefined")
    slope, _ = np.polyfit(lx, np.log(e), 1)
    return float(slope)


def wall_runup(record: GaugeRecord, x_wall: float, normalize_by: float | None = None) -> float:
    """Max surface elevation over time at the wall gauge."""
    j = np.nonzero(np.isclose(record.positions, x_wall, atol=1e-9))[0]
    if j.size == 0:
        raise BadInput(f"no gauge at the wall coordinate {x_wall}")
    peak = float(record.eta_array()[:, j[0]].max())
    return peak / normalize_by if normalize_by else peak


def reflection_equivalence(wall: GaugeRecord, collision: GaugeRecord) -> float:
    """Max |eta_wall - eta_collision| over shared gauges and times."""
    if wall.positions.shape != collision.positions.shape or not np.allclose(
        wall.positions, collision.positions
    ):
        raise MeshMismatch("gauge positions differ between the two runs")
    tw, tc = wall.time_array(), collision.time_array()
    if tw.shape != tc.shape or not np.allclose(tw, tc):
        raise MeshMismatch("sample times differ between the two runs")
    return float(np.abs(wall.eta_array() - collision.eta_array()).max())
