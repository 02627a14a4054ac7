"""Banded symmetric storage against a dense linear-algebra oracle."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sgnfem.banded import BandedSymMatrix, solve_banded_spd
from sgnfem.errors import BadInput, NotPositiveDefinite


def _random_spd(order: int, bandwidth: int, seed: int) -> BandedSymMatrix:
    """Diagonally dominant symmetric band, hence SPD."""
    rng = np.random.default_rng(seed)
    m = BandedSymMatrix(order, bandwidth)
    for k in range(1, bandwidth + 1):
        m.diagonal(k)[:] = rng.uniform(-1.0, 1.0, size=order - k)
    dense_offdiag = np.abs(m.to_dense()).sum(axis=1)
    m.diagonal(0)[:] = dense_offdiag + rng.uniform(0.5, 1.5, size=order)
    return m


@settings(deadline=None)
@given(
    order=st.integers(1, 15),
    bandwidth=st.integers(0, 4),
    seed=st.integers(0, 10_000),
)
def test_matvec_and_solve_match_dense(order, bandwidth, seed):
    bandwidth = min(bandwidth, order - 1)
    m = _random_spd(order, bandwidth, seed)
    dense = m.to_dense()
    assert np.allclose(dense, dense.T, atol=0)

    rng = np.random.default_rng(seed + 1)
    v = rng.standard_normal(order)
    assert np.allclose(m.matvec(v), dense @ v, atol=1e-12)

    x = m.solve(v)
    assert np.allclose(dense @ x, v, atol=1e-9 * max(1.0, np.abs(v).max()))
    assert np.allclose(solve_banded_spd(m, v), x, atol=0)


def test_factorization_is_cached_and_reused():
    m = _random_spd(8, 2, 3)
    m.solve(np.ones(8))
    cached = m._cholesky
    m.solve(np.arange(8.0))
    assert m._cholesky is cached


def test_copy_is_independent():
    m = _random_spd(6, 1, 9)
    c = m.copy()
    c.diagonal(0)[:] += 1.0
    assert not np.allclose(m.diagonal(0), c.diagonal(0))


def test_indefinite_matrix_raises():
    m = BandedSymMatrix(4, 1)
    m.diagonal(0)[:] = [1.0, -2.0, 1.0, 1.0]
    with pytest.raises(NotPositiveDefinite):
        m.solve(np.ones(4))


def test_shape_validation():
    with pytest.raises(BadInput):
        BandedSymMatrix(0, 1)
    with pytest.raises(BadInput):
        BandedSymMatrix(4, -1)
    with pytest.raises(BadInput):
        BandedSymMatrix(4, 1, ab=np.zeros((3, 4)))
    m = BandedSymMatrix(4, 1)
    m.diagonal(0)[:] = 1.0
    with pytest.raises(BadInput):
        m.solve(np.ones(5))


def test_diagonal_is_a_view():
    m = BandedSymMatrix(5, 2)
    m.diagonal(0)[:] = 2.0
    m.diagonal(2)[:] = 0.5
    dense = m.to_dense()
    assert dense[0, 0] == 2.0
    assert dense[0, 2] == 0.5
    assert dense[2, 0] == 0.5
