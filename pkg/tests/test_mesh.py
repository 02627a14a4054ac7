"""Uniform mesh construction and point location."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sgnfem.errors import NonPositiveLength, TooFewElements
from sgnfem.mesh import make_uniform_mesh


def test_nodes_span_interval_exactly():
    m = make_uniform_mesh(-3.0, 7.0, 25)
    assert m.nodes[0] == -3.0
    assert m.nodes[-1] == 7.0
    assert m.n_elements == 25
    assert len(m.nodes) == 26
    assert np.allclose(np.diff(m.nodes), m.dx, rtol=0, atol=1e-12)


@given(
    a=st.floats(-50, 50),
    length=st.floats(0.1, 200),
    n=st.integers(2, 500),
)
def test_element_of_locates_interior_points(a, length, n):
    m = make_uniform_mesh(a, a + length, n)
    rng = np.random.default_rng(0)
    x = rng.uniform(a, a + length, size=40)
    e = m.element_of(x)
    assert np.all((m.nodes[e] <= x + 1e-9) & (x <= m.nodes[e + 1] + 1e-9))


def test_right_endpoint_maps_to_last_element():
    m = make_uniform_mesh(0.0, 1.0, 10)
    assert m.element_of(1.0) == 9
    assert m.element_of(0.0) == 0


def test_rejects_degenerate_intervals():
    with pytest.raises(NonPositiveLength):
        make_uniform_mesh(1.0, 1.0, 4)
    with pytest.raises(NonPositiveLength):
        make_uniform_mesh(2.0, -2.0, 4)


def test_rejects_too_few_elements():
    with pytest.raises(TooFewElements):
        make_uniform_mesh(0.0, 1.0, 1)
