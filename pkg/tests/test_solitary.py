"""Closed-form solitary wave: speeds, crest values, identities, energy."""

import numpy as np
import pytest

from sgnfem.errors import BadInput
from sgnfem.solitary import SolitaryWave

# flat-bottom energy values of the invariant I for A = 0.10 .. 0.25;
# these pin the velocity prefactor to the wave speed cs (the still-water
# speed c0 gives 0.2953 at A = 0.2 instead of 0.3125...)
ENERGY_ORACLE = {
    0.10: 0.104058609813,
    0.15: 0.197139475070,
    0.20: 0.312548348249,
    0.25: 0.449208354485,
}


def test_derived_constants_for_reference_wave():
    w = SolitaryWave(0.2, depth=1.0, g=1.0)
    assert w.speed == pytest.approx(np.sqrt(1.2), abs=1e-12)
    assert w.speed == pytest.approx(1.0954451, abs=1e-7)
    assert w.decay == pytest.approx(np.sqrt(0.125), abs=1e-12)
    assert w.decay == pytest.approx(0.3535534, abs=1e-7)


def test_crest_values():
    w = SolitaryWave(0.2, x0=2.0)
    assert w.h(2.0) == pytest.approx(1.2, abs=1e-14)
    assert w.u(2.0) == pytest.approx(w.speed / 6.0, abs=1e-14)
    assert w.u(2.0) == pytest.approx(0.1825742, abs=1e-7)
    assert w.eta(2.0) == pytest.approx(0.2, abs=1e-14)


def test_far_field_decay():
    w = SolitaryWave(0.2)
    far = 40.0 / w.decay
    x = np.array([-far - 1.0, far + 1.0, 2 * far])
    assert np.all(np.abs(w.h(x) - 1.0) < 1e-12)
    assert np.all(np.abs(w.u(x)) < 1e-12)


def test_translation_property():
    w = SolitaryWave(0.17, x0=-3.0)
    x = np.linspace(-30, 30, 101)
    for t in (0.7, 2.4):
        shift = w.speed * t
        assert np.allclose(w.h(x, t), w.h(x - shift, 0.0), atol=1e-14)
        assert np.allclose(w.u(x, t), w.u(x - shift, 0.0), atol=1e-14)


def test_analytic_derivatives():
    w = SolitaryWave(0.3, x0=1.0)
    x = np.linspace(-12, 14, 41)
    eps = 1e-6
    fd_h = (w.h(x + eps) - w.h(x - eps)) / (2 * eps)
    fd_u = (w.u(x + eps) - w.u(x - eps)) / (2 * eps)
    assert np.allclose(w.h_x(x), fd_h, atol=1e-9)
    assert np.allclose(w.u_x(x), fd_u, atol=1e-9)


def test_mass_conservation_identity():
    # h_t + (h u)_x = 0 holds exactly for the traveling closed form
    w = SolitaryWave(0.25)
    x = np.linspace(-15, 15, 201)
    h_t = -w.speed * w.h_x(x)
    flux_x = w.h_x(x) * w.u(x) + w.h(x) * w.u_x(x)
    assert np.abs(h_t + flux_x).max() < 1e-13


@pytest.mark.parametrize("amplitude, want", sorted(ENERGY_ORACLE.items()))
def test_energy_oracle(amplitude, want):
    w = SolitaryWave(amplitude, depth=1.0, g=1.0)
    assert w.energy() == pytest.approx(want, abs=1e-10)


def test_energy_is_translation_invariant():
    a = SolitaryWave(0.2, x0=0.0).energy()
    b = SolitaryWave(0.2, x0=123.4).energy()
    assert a == pytest.approx(b, abs=1e-12)


def test_scale_invariance_of_the_profile():
    # depth-b0 wave is the depth-1 wave rescaled; crest height ratios match
    small = SolitaryWave(0.05 * 0.218, depth=0.218, g=9.81)
    unit = SolitaryWave(0.05, depth=1.0, g=1.0)
    assert small.eta(small.x0) / small.depth == pytest.approx(
        unit.eta(unit.x0) / unit.depth, abs=1e-14
    )


def test_rejects_nonpositive_parameters():
    for bad in (dict(amplitude=0.0), dict(amplitude=0.1, depth=-1.0), dict(amplitude=0.1, g=0.0)):
        with pytest.raises(BadInput):
            SolitaryWave(**bad)
