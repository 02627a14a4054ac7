"""Function spaces: basis properties, traces, projection, assembly."""

import numpy as np
import pytest

from sgnfem.banded import BandedSymMatrix
from sgnfem.errors import BadIndex, BadInput, DerivUnsupported, OutOfDomain, UnsupportedFamily
from sgnfem.mesh import make_uniform_mesh
from sgnfem.quadrature import gauss_legendre_rule
from sgnfem.spaces import (
    CoefficientVector,
    Family,
    FunctionSpace,
    Trace,
    assemble_gram,
    assemble_load,
    assemble_symmetric,
    default_rule,
    eval_basis,
    eval_field,
    l2_project,
    lump_mass,
    quad_grid,
)

ALL_FAMILIES = [Family.P1, Family.P2, Family.P3, Family.S3]
LAGRANGE = [Family.P1, Family.P2, Family.P3]
MAX_DEGREE = {Family.P1: 1, Family.P2: 2, Family.P3: 3, Family.S3: 3}


def _space(family, n=16, a=-2.0, b=3.0, trace=Trace.FREE):
    return FunctionSpace(make_uniform_mesh(a, b, n), family, trace)


def _random_field(space, seed=0):
    rng = np.random.default_rng(seed)
    return CoefficientVector(space, rng.standard_normal(space.dof_count))


@pytest.mark.parametrize("family", LAGRANGE)
def test_partition_of_unity(family):
    space = _space(family)
    ones = CoefficientVector(space, np.ones(space.dof_count))
    rng = np.random.default_rng(1)
    x = rng.uniform(space.mesh.a, space.mesh.b, size=1000)
    assert np.allclose(eval_field(ones, x), 1.0, atol=1e-12)


def test_s3_reproduces_constants():
    space = _space(Family.S3)
    c = l2_project(lambda x: np.full_like(x, 2.5), space, default_rule(Family.S3))
    x = np.linspace(space.mesh.a, space.mesh.b, 200)
    assert np.allclose(eval_field(c, x), 2.5, atol=1e-10)


@pytest.mark.parametrize("family", ALL_FAMILIES)
def test_polynomial_reproduction_and_derivatives(family):
    # each family represents polynomials up to its local degree exactly
    deg = MAX_DEGREE[family]
    coeffs = np.array([0.7, -1.3, 0.4, 0.9])[: deg + 1]
    p = np.polynomial.Polynomial(coeffs)
    space = _space(family, n=9)
    c = l2_project(p, space, default_rule(family))
    rng = np.random.default_rng(2)
    x = rng.uniform(space.mesh.a, space.mesh.b, size=50)
    assert np.allclose(eval_field(c, x), p(x), atol=1e-9)
    assert np.allclose(eval_field(c, x, 1), p.deriv(1)(x), atol=1e-8)
    if family is Family.S3:
        assert np.allclose(eval_field(c, x, 2), p.deriv(2)(x), atol=1e-7)
    else:
        with pytest.raises(DerivUnsupported):
            eval_field(c, x, 2)


@pytest.mark.parametrize("family", ALL_FAMILIES)
def test_projection_idempotence(family):
    space = _space(family, n=11)
    c = _random_field(space, seed=3)
    again = l2_project(
        lambda x: eval_field(c, np.ravel(x)).reshape(np.shape(x)),
        space,
        gauss_legendre_rule(10),
    )
    assert np.allclose(again.values, c.values, atol=1e-11 * np.abs(c.values).max())


@pytest.mark.parametrize("family", ALL_FAMILIES)
@pytest.mark.parametrize("n", [4, 17, 100])
def test_gram_symmetric_positive_definite(family, n):
    space = _space(family, n=n)
    g = space.gram(default_rule(family))
    dense = g.to_dense()
    assert np.array_equal(dense, dense.T)
    eigmin = float(np.linalg.eigvalsh(dense).min())
    assert eigmin > 0


@pytest.mark.parametrize("family", [Family.P1, Family.P2])
def test_lumped_and_consistent_mass_share_total(family):
    space = _space(family, n=13, a=0.0, b=4.0)
    length = space.mesh.b - space.mesh.a
    lumped = lump_mass(space)
    assert float(lumped.sum()) == pytest.approx(length, abs=1e-12)
    consistent = space.gram(default_rule(family))
    assert float(consistent.to_dense().sum()) == pytest.approx(length, abs=1e-12)


@pytest.mark.parametrize("family", [Family.P3, Family.S3])
def test_lumping_unsupported_for_cubics(family):
    with pytest.raises(UnsupportedFamily):
        lump_mass(_space(family))


def test_s3_fields_are_c2_at_interior_nodes():
    space = _space(Family.S3, n=12)
    c = _random_field(space, seed=4)
    full = space.expand(c.values)
    left = space.tables_at(np.array([1.0]))
    right = space.tables_at(np.array([0.0]))
    dx = space.mesh.dx
    for e in range(space.mesh.n_elements - 1):
        for tab_attr, scale in (("values", 1.0), ("d1", dx), ("d2", dx * dx)):
            tl = getattr(left, tab_attr)[:, 0]
            tr = getattr(right, tab_attr)[:, 0]
            vl = full[space.element_dofs[e]] @ tl / scale
            vr = full[space.element_dofs[e + 1]] @ tr / scale
            assert abs(vl - vr) < 1e-10 * max(1.0, abs(vl))


@pytest.mark.parametrize("family", ALL_FAMILIES)
def test_zero_trace_vanishes_at_walls(family):
    space = _space(family, n=8, trace=Trace.ZERO_AT_ENDS)
    c = _random_field(space, seed=5)
    scale = np.abs(c.values).max()
    assert abs(eval_field(c, space.mesh.a)) < 1e-12 * scale
    assert abs(eval_field(c, space.mesh.b)) < 1e-12 * scale


@pytest.mark.parametrize("family", [Family.P2, Family.S3])
def test_trace_restriction_consistency(family):
    """Reduced load/matrix equal full-space pairings of expanded coefficients."""
    mesh = make_uniform_mesh(0.0, 1.0, 7)
    free = FunctionSpace(mesh, family, Trace.FREE)
    zero = FunctionSpace(mesh, family, Trace.ZERO_AT_ENDS)
    rule = default_rule(family)

    grid = quad_grid(mesh, rule)
    integrand = np.sin(grid.x)
    load_full = assemble_load(free, rule, integrand)
    m_full = assemble_symmetric(free, rule, [(1.0 + 0.3 * np.cos(grid.x), 0), (integrand**2, 1)])

    m_red = zero.restrict_matrix(m_full)
    rng = np.random.default_rng(6)
    for _ in range(5):
        v = rng.standard_normal(zero.dof_count)
        w = rng.standard_normal(zero.dof_count)
        lhs = float(v @ m_red.matvec(w))
        rhs = float(zero.expand(v) @ m_full.matvec(zero.expand(w)))
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
        assert float(v @ zero.restrict_load(load_full)) == pytest.approx(
            float(zero.expand(v) @ load_full), rel=1e-12, abs=1e-12
        )


def test_eval_outside_domain_raises():
    space = _space(Family.P1)
    c = _random_field(space)
    with pytest.raises(OutOfDomain):
        eval_field(c, space.mesh.b + 0.5)


def test_eval_basis_bounds_and_duality():
    space = _space(Family.P2, n=5)
    with pytest.raises(BadIndex):
        eval_basis(space, space.dof_count, 0.0)
    # P2 basis is nodal: chi_j(x_k) = delta_jk on the dof grid
    xs = np.linspace(space.mesh.a, space.mesh.b, space.dof_count)
    val, _ = eval_basis(space, 3, xs[3])
    assert val == pytest.approx(1.0, abs=1e-12)
    val, _ = eval_basis(space, 3, xs[5])
    assert val == pytest.approx(0.0, abs=1e-12)


def test_coefficient_length_checked():
    space = _space(Family.P1, n=4)
    with pytest.raises(BadInput):
        CoefficientVector(space, np.zeros(space.dof_count + 1))


def test_gram_matches_exact_p1_mass():
    # closed-form P1 mass: dx/6 * tridiag(1, 4, 1) with halved end diagonal
    space = _space(Family.P1, n=6, a=0.0, b=3.0)
    g = assemble_gram(space, gauss_legendre_rule(3))
    dx = space.mesh.dx
    assert np.allclose(g.diagonal(1), dx / 6.0, atol=1e-14)
    inner = g.diagonal(0)[1:-1]
    assert np.allclose(inner, 2.0 * dx / 3.0, atol=1e-14)
    assert g.diagonal(0)[0] == pytest.approx(dx / 3.0, abs=1e-14)
