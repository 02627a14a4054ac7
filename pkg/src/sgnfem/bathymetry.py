"""Bottom profiles b(x) with first and second derivatives.

Sign convention: b is the bottom elevation, negative below the still
water level, so still water has total depth h = -b and surface eta = 0.

Piecewise-linear profiles get each interior kink replaced on
[x_k - r, x_k + r] by the unique quadratic matching value and slope of
the two segments at the blend edges (C1 profile, piecewise-constant
b_xx), which is all the weak forms require of the bottom.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import BadInput, NonMonotoneBreakpoints, RadiusTooLarge, UnknownPreset
from .quadrature import QuadratureRule
from .spaces import CoefficientVector, FunctionSpace, l2_project

Field = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@dataclass(frozen=True)
class Bathymetry:
    b: Field
    b_x: Field
    b_xx: Field
    description: str = ""
    smoothing_radius: float = 0.0

    def __call__(self, x, deriv: int = 0):
        return (self.b, self.b_x, self.b_xx)[deriv](np.asarray(x, dtype=float))


@dataclass(frozen=True)
class DiscreteBathymetry:
    """L2 projections of b, b_x, b_xx onto the elevation space."""

    b_h: CoefficientVector
    bx_h: CoefficientVector
    bxx_h: CoefficientVector


def from_analytic(b: Field, b_x: Field, b_xx: Field, description: str = "analytic") -> Bathymetry:
    return Bathymetry(b=b, b_x=b_x, b_xx=b_xx, description=description)


def flat(depth: float) -> Bathymetry:
    if depth <= 0:
        raise BadInput(f"flat bottom needs positive depth, got {depth}")
    return Bathymetry(
        b=lambda x: np.full_like(x, -depth, dtype=float),
        b_x=lambda x: np.zeros_like(x, dtype=float),
        b_xx=lambda x: np.zeros_like(x, dtype=float),
        description=f"flat depth {depth}",
    )


def from_breakpoints(
    points: Sequence[tuple[float, float]], smoothing_radius: float = 0.0
) -> Bathymetry:
    """Piecewise-linear profile through (x, b) pairs with C1 kink blending."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise BadInput("need at least two (x, b) breakpoints")
    xs, bs = pts[:, 0], pts[:, 1]
    if np.any(np.diff(xs) <= 0):
        raise NonMonotoneBreakpoints("breakpoint x values must strictly increase")
    r = float(smoothing_radius)
    if r < 0:
        raise BadInput(f"smoothing radius must be >= 0, got {r}")
    if r > 0 and 2.0 * r >= np.diff(xs).min():
        raise RadiusTooLarge(
            f"radius {r} is at least half the shortest segment {np.diff(xs).min()}"
        )
    slopes = np.diff(bs) / np.diff(xs)

    def segment_index(x: NDArray[np.float64]) -> NDArray[np.int64]:
        return np.clip(np.searchsorted(xs, x, side="right") - 1, 0, len(slopes) - 1)

    def eval_all(x: NDArray[np.float64]):
        shape = np.shape(x)
        x = np.asarray(x, dtype=float).ravel()
        seg = segment_index(x)
        val = bs[seg] + slopes[seg] * (x - xs[seg])
        der = slopes[seg]
        dd = np.zeros_like(val)
        if r > 0:
            for k in range(1, len(xs) - 1):
                m = np.abs(x - xs[k]) < r
                if not np.any(m):
                    continue
                s0, s1 = slopes[k - 1], slopes[k]
                xi = x[m] - xs[k]
                gamma = (s1 - s0) / (4.0 * r)
                beta = 0.5 * (s0 + s1)
                alpha = bs[k] + 0.25 * r * (s1 - s0)
                val[m] = alpha + beta * xi + gamma * xi**2
                der[m] = beta + 2.0 * gamma * xi
                dd[m] = 2.0 * gamma
        return val.reshape(shape), der.reshape(shape), dd.reshape(shape)

    return Bathymetry(
        b=lambda x: eval_all(x)[0],
        b_x=lambda x: eval_all(x)[1],
        b_xx=lambda x: eval_all(x)[2],
        description=f"piecewise linear through {len(xs)} points, blend radius {r}",
        smoothing_radius=r,
    )


def from_file(path, smoothing_radius: float = 0.0) -> Bathymetry:
    """Two-column whitespace-separated text file (x, b); '#' starts a comment."""
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise BadInput(f"expected two columns (x, b) in {path}, got {data.shape[1]}")
    return from_breakpoints(data, smoothing_radius)


def sinusoidal_energy_bottom() -> Bathymetry:
    """Rippled bottom around depth 1: b(x) = -1 + 0.1 sin(pi x / 2)."""
    k = 0.5 * np.pi
    return Bathymetry(
        b=lambda x: -1.0 + 0.1 * np.sin(k * x),
        b_x=lambda x: 0.1 * k * np.cos(k * x),
        b_xx=lambda x: -0.1 * k * k * np.sin(k * x),
        description="sinusoidal ripple around depth 1",
    )


_REVERE_POINTS = (
    (-11.77, -0.218),
    (15.04, -0.218),
    (19.4, 19.4 / 53.0 - 0.5018),
    (22.33, 22.33 / 150.0 - 0.265),
    (23.23, 23.23 / 13.0 - 1.834),
)


def preset(name: str, depth: float = 1.0) -> Bathymetry:
    """Named bottom profiles used by the benchmark scenarios."""
    if name == "flat":
        return flat(depth)
    if name == "grilli_35":
        return from_breakpoints(
            [(-100.0, -1.0), (0.0, -1.0), (34.0, 34.0 / 35.0 - 1.0)], smoothing_radius=1.0
        )
    if name == "beach_50_wall":
        return from_breakpoints(
            [(-100.0, -1.0), (0.0, -1.0), (20.0, 20.0 / 50.0 - 1.0)], smoothing_radius=1.0
        )
    if name == "revere":
        return from_breakpoints(_REVERE_POINTS, smoothing_radius=0.2)
    if name == "sinusoidal_energy":
        return sinusoidal_energy_bottom()
    raise UnknownPreset(f"unknown bathymetry preset {name!r}")


def project_bathymetry(
    bath: Bathymetry, space: FunctionSpace, rule: QuadratureRule
) -> DiscreteBathymetry:
    return DiscreteBathymetry(
        b_h=l2_project(bath.b, space, rule),
        bx_h=l2_project(bath.b_x, space, rule),
        bxx_h=l2_project(bath.b_xx, space, rule),
    )
