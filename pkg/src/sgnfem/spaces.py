"""Finite element spaces on uniform meshes.

Four families on the reference element t in [0, 1]:

  P1, P2, P3  Lagrange elements (continuous piecewise polynomials with
              equispaced nodal dofs, element-local left-to-right dof
              ordering so P2 runs node, midpoint, node, ...).
  S3          C2 cubic splines built from the cardinal B-spline with
              B(0) = 1, B(+-1) = 1/4. One dof per knot j = -1..N+1.

A space with trace ZERO_AT_ENDS is the subspace vanishing at both
endpoints. For Lagrange families that simply drops the two boundary
dofs. For S3 the first and last two basis functions are recombined
(psi_0 = phi_0 - 4 phi_-1, psi_1 = phi_1 - phi_-1, and the mirror
images at the right end), which keeps the reduced matrices at
bandwidth 3.

Assembly kernels (assemble_load, assemble_symmetric, eval_at_quad) are
vectorized over elements; on a uniform mesh every local dof slot maps
to a strictly increasing global index sequence, so band scatter needs
no index deduplication.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from numpy.typing import NDArray

from .banded import BandedSymMatrix
from .errors import BadIndex, BadInput, DerivUnsupported, OutOfDomain, UnsupportedFamily
from .mesh import Mesh
from .quadrature import QuadratureRule, gauss_legendre_rule


class Family(str, enum.Enum):
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    S3 = "S3"


class Trace(str, enum.Enum):
    FREE = "free"
    ZERO_AT_ENDS = "zero_at_ends"


# Local shape functions as ascending polynomial coefficients in t on [0, 1].
_LOCAL_COEFFS: dict[Family, NDArray[np.float64]] = {
    Family.P1: np.array([[1.0, -1.0], [0.0, 1.0]]).T,
    Family.P2: np.array([[1.0, -3.0, 2.0], [0.0, 4.0, -4.0], [0.0, -1.0, 2.0]]).T,
    Family.P3: np.array(
        [
            [1.0, -5.5, 9.0, -4.5],
            [0.0, 9.0, -22.5, 13.5],
            [0.0, -4.5, 18.0, -13.5],
            [0.0, 1.0, -4.5, 4.5],
        ]
    ).T,
    Family.S3: np.array(
        [
            [0.25, -0.75, 0.75, -0.25],
            [1.0, 0.0, -1.5, 0.75],
            [0.25, 0.75, 0.75, -0.75],
            [0.0, 0.0, 0.0, 0.25],
        ]
    ).T,
}

_BANDWIDTH = {Family.P1: 1, Family.P2: 2, Family.P3: 3, Family.S3: 3}
_STRIDE = {Family.P1: 1, Family.P2: 2, Family.P3: 3, Family.S3: 1}
DEFAULT_QUAD_NODES = {Family.P1: 3, Family.P2: 5, Family.P3: 5, Family.S3: 8}


def default_rule(*families: Family) -> QuadratureRule:
    """Default Gauss-Legendre rule for one family or a mixed pairing (max node count)."""
    return gauss_legendre_rule(max(DEFAULT_QUAD_NODES[f] for f in families))


@dataclass(frozen=True)
class BasisTables:
    """Reference-element shape values and t-derivatives at quadrature points.

    Shapes are (n_local, n_q); physical derivatives need a 1/dx factor
    per derivative order.
    """

    values: NDArray[np.float64]
    d1: NDArray[np.float64]
    d2: NDArray[np.float64]
    t: NDArray[np.float64]


class FunctionSpace:
    def __init__(self, mesh: Mesh, family: Family | str, trace: Trace | str = Trace.FREE):
        self.mesh = mesh
        self.family = Family(family)
        self.trace = Trace(trace)
        n = mesh.n_elements
        stride = _STRIDE[self.family]
        self.local_count = _LOCAL_COEFFS[self.family].shape[1]
        self.offsets = np.arange(self.local_count)
        self.n_full = stride * n + (3 if self.family is Family.S3 else 1)
        self.stride = stride
        self.bandwidth = _BANDWIDTH[self.family]
        self.dof_count = self.n_full - (2 if self.trace is Trace.ZERO_AT_ENDS else 0)
        # element_dofs[e, l] = stride*e + offsets[l], full-space numbering
        self.element_dofs = stride * np.arange(n)[:, None] + self.offsets[None, :]
        self._tables: dict[int, BasisTables] = {}
        self._gram: dict[int, BandedSymMatrix] = {}

    def __repr__(self):
        return (
            f"FunctionSpace({self.family.value}, {self.trace.value}, "
            f"N={self.mesh.n_elements}, dofs={self.dof_count})"
        )

    # -- reference tables ------------------------------------------------

    def tables_at(self, t: NDArray[np.float64]) -> BasisTables:
        """Shape values/derivatives at arbitrary reference coordinates t."""
        coeffs = _LOCAL_COEFFS[self.family]
        vals = npoly.polyval(t, coeffs)
        d1 = npoly.polyval(t, npoly.polyder(coeffs, 1, axis=0))
        d2 = npoly.polyval(t, npoly.polyder(coeffs, 2, axis=0))
        return BasisTables(values=vals, d1=d1, d2=d2, t=t)

    def tables(self, rule: QuadratureRule) -> BasisTables:
        tab = self._tables.get(rule.n)
        if tab is None:
            t = 0.5 * (rule.nodes + 1.0)
            tab = self.tables_at(t)
            self._tables[rule.n] = tab
        return tab

    # -- trace handling ----------------------------------------------------

    def expand(self, values: NDArray[np.float64]) -> NDArray[np.float64]:
        """Coefficients in this space -> coefficients of the full (FREE) basis."""
        if self.trace is Trace.FREE:
            return values
        full = np.zeros(values.shape[:-1] + (self.n_full,))
        if self.family is Family.S3:
            full[..., 1:-1] = values
            full[..., 0] = -4.0 * values[..., 0] - values[..., 1]
            full[..., -1] = -values[..., -2] - 4.0 * values[..., -1]
        else:
            full[..., 1:-1] = values
        return full

    def restrict_load(self, load_full: NDArray[np.float64]) -> NDArray[np.float64]:
        """Load vector against the full basis -> load against this space's basis."""
        if self.trace is Trace.FREE:
            return load_full
        f = load_full[1:-1].copy()
        if self.family is Family.S3:
            f[0] = -4.0 * load_full[0] + load_full[1]
            f[1] = -load_full[0] + load_full[2]
            f[-2] = load_full[-3] - load_full[-1]
            f[-1] = load_full[-2] - 4.0 * load_full[-1]
        return f

    def restrict_matrix(self, m_full: BandedSymMatrix) -> BandedSymMatrix:
        """Gram-like matrix on the full basis -> matrix on this space's basis."""
        if self.trace is Trace.FREE:
            return m_full
        u = m_full.bandwidth
        ab = m_full.ab[:, 1:-1].copy()
        for k in range(1, u + 1):
            ab[u - k, :k] = 0.0
        red = BandedSymMatrix(self.dof_count, u, ab)
        if self.family is Family.S3:
            _fix_s3_corners(self, m_full, red)
        return red

    # -- misc -------------------------------------------------------------

    def zeros(self) -> NDArray[np.float64]:
        return np.zeros(self.dof_count)

    def gram(self, rule: QuadratureRule) -> BandedSymMatrix:
        g = self._gram.get(rule.n)
        if g is None:
            g = assemble_gram(self, rule)
            self._gram[rule.n] = g
        return g


def _corner_dense(m: BandedSymMatrix, i0: int, size: int) -> NDArray[np.float64]:
    """Dense size x size block of M starting at (i0, i0)."""
    block = np.zeros((size, size))
    u = m.bandwidth
    for di in range(size):
        for dj in range(di, min(di + u + 1, size)):
            i, j = i0 + di, i0 + dj
            v = m.ab[u + i - j, j]
            block[di, dj] = v
            block[dj, di] = v
    return block


def _fix_s3_corners(space: FunctionSpace, m_full: BandedSymMatrix, red: BandedSymMatrix) -> None:
    """Overwrite the 4x4 end blocks of the reduced S3 matrix.

    The reduced basis recombines three boundary splines at each end;
    away from the 4x4 corners the restriction is a pure index shift,
    which the band slice in restrict_matrix already produced.
    """
    n_red = red.order
    u = red.bandwidth
    r_left = np.array(
        [
            [-4.0, 1.0, 0.0, 0.0, 0.0],
            [-1.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0],
        ]
    )
    c = _corner_dense(m_full, 0, 5)
    left = r_left @ c @ r_left.T
    nf = m_full.order
    r_right = np.array(
        [
            [1.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0, -1.0],
            [0.0, 0.0, 0.0, 1.0, -4.0],
        ]
    )
    c = _corner_dense(m_full, nf - 5, 5)
    right = r_right @ c @ r_right.T
    for di in range(4):
        for dj in range(di, 4):
            if dj - di <= u:
                red.ab[u + di - dj, dj] = left[di, dj]
                red.ab[u + di - dj, n_red - 4 + dj] = right[di, dj]


@dataclass
class CoefficientVector:
    """Coefficients of a field in a FunctionSpace."""

    space: FunctionSpace
    values: NDArray[np.float64]

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.space.dof_count,):
            raise BadInput(
                f"coefficient length {self.values.shape} != dof count {self.space.dof_count}"
            )

    def copy(self) -> "CoefficientVector":
        return CoefficientVector(self.space, self.values.copy())


def _check_domain(mesh: Mesh, x: NDArray[np.float64]) -> None:
    tol = 1e-12 * max(1.0, abs(mesh.a), abs(mesh.b))
    if np.any(x < mesh.a - tol) or np.any(x > mesh.b + tol):
        raise OutOfDomain(f"evaluation point outside [{mesh.a}, {mesh.b}]")


def eval_field(c: CoefficientVector, x, deriv: int = 0):
    """Pointwise value or derivative of the field; x may be scalar or array."""
    space = c.space
    if deriv not in (0, 1, 2):
        raise DerivUnsupported(f"derivative order {deriv} not supported")
    if deriv == 2 and space.family is not Family.S3:
        raise DerivUnsupported("second derivatives are only continuous for S3")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    _check_domain(space.mesh, xa)
    e = space.mesh.element_of(xa)
    t = (xa - space.mesh.nodes[e]) / space.mesh.dx
    tab = space.tables_at(t)
    table = (tab.values, tab.d1, tab.d2)[deriv]
    full = space.expand(c.values)
    dofs = space.element_dofs[e]  # (npts, n_local)
    out = np.einsum("pl,lp->p", full[dofs], table) / space.mesh.dx**deriv
    return out if np.ndim(x) else float(out[0])


def eval_basis(space: FunctionSpace, j: int, x: float, deriv: int | None = None):
    """Value and first derivative of the j-th basis function at x.

    With deriv=2 (S3 only) a (value, d1, d2) triple is returned.
    """
    if not 0 <= j < space.dof_count:
        raise BadIndex(f"dof index {j} outside [0, {space.dof_count})")
    unit = space.zeros()
    unit[j] = 1.0
    c = CoefficientVector(space, unit)
    if deriv == 2:
        return (eval_field(c, x, 0), eval_field(c, x, 1), eval_field(c, x, 2))
    if deriv not in (None, 0, 1):
        raise DerivUnsupported(f"derivative order {deriv} not supported")
    return (eval_field(c, x, 0), eval_field(c, x, 1))


# -- quadrature-point machinery -------------------------------------------


@dataclass(frozen=True)
class QuadGrid:
    """Physical quadrature points and weights, shared by all assembly calls."""

    mesh: Mesh
    rule: QuadratureRule
    x: NDArray[np.float64] = field(repr=False)  # (n_el, n_q)
    w: NDArray[np.float64] = field(repr=False)  # (n_q,) physical weights


def quad_grid(mesh: Mesh, rule: QuadratureRule) -> QuadGrid:
    t = 0.5 * (rule.nodes + 1.0)
    x = mesh.nodes[:-1][:, None] + mesh.dx * t[None, :]
    w = 0.5 * mesh.dx * rule.weights
    return QuadGrid(mesh=mesh, rule=rule, x=x, w=w)


def eval_at_quad(
    space: FunctionSpace,
    full_coeffs: NDArray[np.float64],
    rule: QuadratureRule,
    deriv: int = 0,
) -> NDArray[np.float64]:
    """Field values at quadrature points from full-basis coefficients; (n_el, n_q)."""
    tab = space.tables(rule)
    table = (tab.values, tab.d1, tab.d2)[deriv]
    ce = full_coeffs[space.element_dofs]  # (n_el, n_local)
    return np.dot(ce, table) / space.mesh.dx**deriv


def assemble_load(
    space: FunctionSpace,
    rule: QuadratureRule,
    integrand: NDArray[np.float64],
    test_deriv: int = 0,
) -> NDArray[np.float64]:
    """Full-basis load vector of (integrand, test^(test_deriv)).

    integrand holds pointwise values at the quadrature grid, shape
    (n_el, n_q); quadrature weights are applied here.
    """
    tab = space.tables(rule)
    table = (tab.values, tab.d1, tab.d2)[test_deriv] / space.mesh.dx**test_deriv
    grid_w = 0.5 * space.mesh.dx * rule.weights
    local = np.dot(integrand * grid_w[None, :], table.T)  # (n_el, n_local)
    load = np.zeros(space.n_full)
    ed = space.element_dofs
    for slot in range(space.local_count):
        load[ed[:, slot]] += local[:, slot]
    return load


def assemble_symmetric(
    space: FunctionSpace,
    rule: QuadratureRule,
    terms: Sequence[tuple[NDArray[np.float64], int]],
) -> BandedSymMatrix:
    """Full-basis banded matrix of sum_k (C_k chi_i^(dk), chi_j^(dk)).

    Each term is (coefficient values at the quadrature grid, derivative
    order); every term is symmetric because trial and test derivative
    orders match.
    """
    tab = space.tables(rule)
    grid_w = 0.5 * space.mesh.dx * rule.weights
    n_local = space.local_count
    local = None
    for coeff, d in terms:
        table = (tab.values, tab.d1, tab.d2)[d] / space.mesh.dx**d
        contrib = np.einsum("eq,lq,mq->elm", coeff * grid_w[None, :], table, table)
        local = contrib if local is None else local + contrib
    u = space.bandwidth
    m = BandedSymMatrix(space.n_full, u, np.zeros((u + 1, space.n_full)))
    ed = space.element_dofs
    for l in range(n_local):
        for mm in range(l, n_local):
            gap = space.offsets[mm] - space.offsets[l]
            m.ab[u - gap, ed[:, mm]] += local[:, l, mm]
    return m


def assemble_gram(space: FunctionSpace, rule: QuadratureRule) -> BandedSymMatrix:
    """Mass (Gram) matrix (chi_i, chi_j) respecting the space's trace."""
    ones = np.ones((space.mesh.n_elements, rule.n))
    full = assemble_symmetric(space, rule, [(ones, 0)])
    return space.restrict_matrix(full)


def lump_mass(space: FunctionSpace) -> NDArray[np.float64]:
    """Diagonal nodal-quadrature mass: trapezoid for P1, Simpson for P2."""
    dx = space.mesh.dx
    n = space.mesh.n_elements
    if space.family is Family.P1:
        diag = np.full(n + 1, dx)
        diag[0] = diag[-1] = 0.5 * dx
    elif space.family is Family.P2:
        diag = np.empty(2 * n + 1)
        diag[0::2] = dx / 3.0  # shared nodes
        diag[1::2] = 2.0 * dx / 3.0  # midpoints
        diag[0] = diag[-1] = dx / 6.0
    else:
        raise UnsupportedFamily(f"mass lumping is defined for P1/P2, not {space.family.value}")
    if space.trace is Trace.ZERO_AT_ENDS:
        diag = diag[1:-1]
    return diag


def l2_project(
    f: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    space: FunctionSpace,
    rule: QuadratureRule,
) -> CoefficientVector:
    """L2 projection of a scalar field onto the space (trace respected)."""
    grid = quad_grid(space.mesh, rule)
    load = assemble_load(space, rule, np.asarray(f(grid.x), dtype=float))
    rhs = space.restrict_load(load)
    return CoefficientVector(space, space.gram(rule).solve(rhs))
