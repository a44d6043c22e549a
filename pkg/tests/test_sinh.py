import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from memcrit import sinh
from memcrit.devices import make_model

PARAMS = {k: make_model(k).params for k in sinh.SINH_KINDS}
unit = st.floats(0.0, 1.0)
volts = st.floats(-4.0, 4.0)


@given(st.sampled_from(sinh.SINH_KINDS), unit, volts)
def test_slope_matches_finite_difference(kind, x, v):
    p = PARAMS[kind]
    h = 1e-6
    i, di = sinh.sinh_current_slope(kind, p, x, v)
    fd = (sinh.sinh_current(kind, p, x, v + h) - sinh.sinh_current(kind, p, x, v - h)) / (2 * h)
    if abs(v) > 2 * h:
        assert di == pytest.approx(fd, rel=1e-5, abs=1e-15)


@given(st.sampled_from(["laiho", "yakopcic"]), unit, volts)
def test_passive_models_conduct_with_the_voltage(kind, x, v):
    i = sinh.sinh_current(kind, PARAMS[kind], x, v)
    assert i * v >= 0


def test_zero_state_blocks_laiho_and_yakopcic():
    for kind in ("laiho", "yakopcic"):
        assert sinh.sinh_current(kind, PARAMS[kind], 0.0, 2.0) == 0.0


def test_printed_chang_rectifier_is_not_passive():
    p = PARAMS["chang"]
    # fully in the rectifying state the current opposes a positive voltage
    assert sinh.sinh_current("chang", p, 0.0, 1.0) < 0
    assert make_model("chang").passive is False
    fixed = make_model("chang", {"sign_corrected": True})
    assert sinh.sinh_current("chang", fixed.params, 0.0, 1.0) > 0
    assert fixed.passive


@given(st.floats(-1.2, 1.2))
def test_yakopcic_is_inert_inside_thresholds(v):
    p = PARAMS["yakopcic"]
    assert sinh.yakopcic_drive(p, v) == 0.0
    assert sinh.sinh_rate("yakopcic", p, 0.2, v) == 0.0


def test_yakopcic_drive_above_threshold():
    p = PARAMS["yakopcic"]
    assert sinh.yakopcic_drive(p, 1.5) == pytest.approx(p.A_pos * (math.exp(1.5) - math.exp(1.2)))
    assert sinh.yakopcic_drive(p, -1.5) < 0


@given(unit)
def test_yakopcic_window_range(x):
    p = PARAMS["yakopcic"]
    for d in (1, -1):
        assert 0.0 <= sinh.yakopcic_window(p, x, d) <= 1.0


def test_yakopcic_window_vanishes_at_bounds():
    p = PARAMS["yakopcic"]
    assert sinh.yakopcic_window(p, 0.0, -1) == 0.0
    assert sinh.yakopcic_window(p, 1.0, 1) == pytest.approx(0.0, abs=1e-15)


@given(st.sampled_from(sinh.SINH_KINDS), unit, st.floats(0.1, 4.0))
def test_rate_sign_follows_voltage(kind, x, v):
    p = PARAMS[kind]
    assert sinh.sinh_rate(kind, p, x, v) >= 0
    assert sinh.sinh_rate(kind, p, x, -v) <= 0


def test_laiho_window_stops_state_at_bounds():
    p = PARAMS["laiho"]
    assert sinh.sinh_rate("laiho", p, 1.0, 2.0) == 0.0
    assert sinh.sinh_rate("laiho", p, 0.0, -2.0) == 0.0


def test_state_outside_bounds_raises():
    with pytest.raises(ValueError):
        sinh.sinh_current("laiho", PARAMS["laiho"], 1.01, 0.5)


def test_validation():
    with pytest.raises(ValueError):
        make_model("yakopcic", {"eta": 2})
    with pytest.raises(ValueError):
        make_model("laiho", {"A1": -1.0})


def test_yakopcic_drive_is_continuous_at_thresholds():
    p = PARAMS["yakopcic"]
    assert sinh.yakopcic_drive(p, p.V_th_pos * (1 + 1e-13)) == pytest.approx(0.0, abs=1e-11)
    assert sinh.yakopcic_drive(p, -p.V_th_neg * (1 + 1e-13)) == pytest.approx(0.0, abs=1e-11)


def test_yakopcic_window_is_continuous_at_joints():
    p = PARAMS["yakopcic"]
    e = 1e-14
    assert abs(sinh.yakopcic_window(p, p.x_p + e, 1) - sinh.yakopcic_window(p, p.x_p - e, 1)) < 1e-12
    j = 1.0 - p.x_n
    assert abs(sinh.yakopcic_window(p, j + e, -1) - sinh.yakopcic_window(p, j - e, -1)) < 1e-12
