import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from memcrit import pickett
from memcrit.devices import make_model
from memcrit.errors import NonPhysicalError

P = make_model("pickett").params
gaps = st.floats(P.w_min, P.w_max)
biases = st.floats(-0.6, 0.6).filter(lambda v: abs(v) > 1e-6)


def test_constants():
    k = pickett.CONSTANTS
    assert k.J0 == pytest.approx(k.e / (2 * math.pi * k.h))


def test_barrier_geometry_is_ordered():
    g = pickett.barrier_geometry(P, 1.5e-9, 0.2)
    assert 0 < g.w1 < g.w2 < 1.5e-9
    assert g.phi_I > 0 and g.B > 0
    assert g.dw == pytest.approx(g.w2 - g.w1)


def test_barrier_lowers_with_bias():
    low = pickett.barrier_geometry(P, 1.5e-9, 0.0).phi_I
    high = pickett.barrier_geometry(P, 1.5e-9, 0.3).phi_I
    assert high < low


def test_nonphysical_gap():
    with pytest.raises(NonPhysicalError) as exc:
        pickett.barrier_geometry(P, 0.0, 0.1)
    assert exc.value.quantity == "w"


def test_large_bias_is_nonphysical():
    with pytest.raises(NonPhysicalError):
        pickett.junction_current(P, 1.5e-9, 5.0)


@given(gaps, biases)
def test_current_is_odd(w, v):
    try:
        i = pickett.tunnel_current(P, w, v)
    except NonPhysicalError:
        assume(False)
    assert pickett.tunnel_current(P, w, -v) == pytest.approx(-i, rel=1e-14)
    assert math.copysign(1.0, i) == math.copysign(1.0, v)


@given(gaps, st.floats(0.01, 0.5))
def test_slope_matches_finite_difference(w, v):
    h = 1e-6
    try:
        i, di = pickett.tunnel_current_slope(P, w, v)
        ip = pickett.tunnel_current(P, w, v + h)
        im = pickett.tunnel_current(P, w, v - h)
    except NonPhysicalError:
        assume(False)
    assume(di > 0)
    assert di == pytest.approx((ip - im) / (2 * h), rel=1e-5)


def test_narrow_gap_conducts_more():
    assert pickett.tunnel_current(P, P.w_min, 0.2) > 100 * pickett.tunnel_current(P, P.w_max, 0.2)


def test_state_rate_directions():
    w = 1.5e-9
    assert pickett.state_rate(P, w, 1e-4) > 0
    assert pickett.state_rate(P, w, -1e-4) < 0
    assert pickett.state_rate(P, w, 0.0) == 0.0


@given(gaps, st.floats(1e-7, 1e-3))
def test_state_rate_finite_and_monotone_in_current(w, i):
    r1 = pickett.state_rate(P, w, i)
    r2 = pickett.state_rate(P, w, 2 * i)
    assert math.isfinite(r1) and math.isfinite(r2)
    assert 0 <= r1 <= r2


@given(gaps, st.floats(-0.8, 0.8).filter(lambda v: abs(v) > 1e-4))
def test_series_solve_satisfies_kirchhoff(w, v):
    try:
        i, v_g = pickett.solve_device_current(P, v, w)
    except NonPhysicalError:
        assume(False)
    assert v_g + i * P.R_s == pytest.approx(v, abs=1e-11 * max(1.0, abs(v)))
    assert i == pytest.approx(pickett.tunnel_current(P, w, v_g), rel=1e-12)


def test_parameter_validation():
    with pytest.raises(ValueError):
        pickett.PickettParams(w0=3e-9)
    with pytest.raises(ValueError):
        pickett.PickettParams(phi0=-1.0)


def test_current_is_monotone_on_operating_grid():
    # the barrier formula turns over at large bias on narrow gaps; the
    # operating envelope of the shipped sweeps stays well inside
    import numpy as np
    for w in np.linspace(1.4e-9, P.w_max, 13):
        cur = [pickett.tunnel_current(P, w, v) for v in np.linspace(0.0, 0.55, 221)]
        assert np.all(np.diff(cur) > 0)


@pytest.mark.slow
def test_sweep_operating_points_have_positive_slope():
    from memcrit.circuits import single_device_system
    from memcrit.signals import triangular_sweep
    from memcrit.solver import integrate
    m = make_model("pickett")
    tr = integrate(single_device_system(m, 2400.0), triangular_sweep(4.0, -1.5, 100.0,
                                                                     start="negative"))
    v_g = tr.v_device[:, 0] - tr.i * P.R_s
    slopes = [pickett.tunnel_current_slope(P, w, v)[1] for w, v in zip(tr.x[:, 0], v_g)]
    assert min(slopes) > 0
