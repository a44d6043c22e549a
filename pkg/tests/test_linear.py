import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from memcrit.linear import LinearParams, analytic_set_time, resistance, set_constant, state_rate
from memcrit.windows import WindowSpec

P = LinearParams()


def closed_form_constant(kind, p: LinearParams, x0, x1):
    """Volt-seconds from x0 to x1 by partial fractions, p = 1 windows."""
    a, b = p.R_HRS, p.R_LRS - p.R_HRS

    def antideriv(x):
        if kind in ("benderli", "joglekar"):
            # (a + b x) / (x (1 - x)) = a / x + (a + b) / (1 - x)
            g = a * math.log(x) - (a + b) * math.log1p(-x)
            return g / 4.0 if kind == "joglekar" else g
        if kind == "biolek":
            # (a + b x) / (1 - x^2) = A / (1 - x) + B / (1 + x)
            A, B = (a + b) / 2.0, (a - b) / 2.0
            return -A * math.log1p(-x) + B * math.log1p(x)
        return a * x + b * x * x / 2.0

    return (antideriv(x1) - antideriv(x0)) / p.K1


def test_resistance_endpoints():
    assert resistance(P, 0.0) == P.R_HRS
    assert resistance(P, 1.0) == P.R_LRS
    with pytest.raises(ValueError):
        resistance(P, 1.5)


def test_state_rate_sign_follows_current():
    w = WindowSpec("joglekar")
    assert state_rate(P, w, 0.5, 1e-4) > 0
    assert state_rate(P, w, 0.5, -1e-4) < 0
    assert state_rate(P, w, 0.5, 0.0) == 0.0
    assert state_rate(P, w, 0.5, 1e-4) == pytest.approx(P.K1 * 1e-4)


@pytest.mark.parametrize("kind,x0", [("benderli", 0.002), ("joglekar", 1e-6),
                                     ("biolek", 0.0), ("shin", 0.0), ("biolek", 0.2)])
def test_set_constant_matches_partial_fractions(kind, x0):
    got = set_constant(P, WindowSpec(kind), x0, 0.5)
    assert got == pytest.approx(closed_form_constant(kind, P, x0, 0.5), rel=1e-9)


@given(st.sampled_from(["benderli", "joglekar", "biolek", "shin"]),
       st.floats(1e-4, 0.4), st.floats(0.05, 0.55), st.floats(0.1, 20.0))
def test_set_time_scales_inverse_with_height(kind, x0, dx, v):
    x1 = x0 + dx
    t = analytic_set_time(P, WindowSpec(kind), v, x0, x1)
    assert t * v == pytest.approx(closed_form_constant(kind, P, x0, x1), rel=1e-8)


def test_zero_start_of_symmetric_window_never_switches():
    from memcrit.errors import ConvergenceError
    with pytest.raises(ConvergenceError):
        set_constant(P, WindowSpec("benderli"), 0.0, 0.5)


@pytest.mark.parametrize("bad", [dict(K1=0.0), dict(R_HRS=50.0), dict(x0=1.2)])
def test_parameter_validation(bad):
    with pytest.raises(ValueError):
        LinearParams(**bad)


def test_pulse_height_must_be_positive():
    with pytest.raises(ValueError):
        analytic_set_time(P, WindowSpec("shin"), 0.0, 0.0)


@pytest.mark.parametrize("kind", ["benderli", "joglekar", "biolek", "shin"])
def test_volt_seconds_are_height_independent(kind):
    w = WindowSpec(kind)
    x0 = {"benderli": 0.002, "joglekar": 1e-12}.get(kind, 0.0)
    k2 = [v * analytic_set_time(P, w, v, x0) for v in (0.5, 0.7, 1.0, 1.4, 2.0)]
    assert (max(k2) - min(k2)) / min(k2) < 1e-9
