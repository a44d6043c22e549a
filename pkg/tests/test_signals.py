import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from memcrit.signals import Waveform, custom, pulse, sample, triangular_sweep

amps = st.floats(0.1, 20.0)
rates = st.floats(0.01, 1000.0)


def test_triangular_breakpoints():
    w = triangular_sweep(2.0, -1.0, 1.0)
    assert w.breakpoints == ((0.0, 0.0), (2.0, 2.0), (5.0, -1.0), (6.0, 0.0))
    assert w(4.0) == 0.0
    assert w.period == 6.0
    assert w.periodic


def test_negative_start_goes_negative_first():
    w = triangular_sweep(4.0, -1.5, 1.0, start="negative")
    assert w(1.0) == -1.0
    assert max(w.voltages) == 4.0


def test_sample_is_exact_at_breakpoints_and_midpoints():
    w = triangular_sweep(3.0, -3.0, 10.0)
    assert sample(w, 0.3) == 3.0
    assert sample(w, 0.15) == pytest.approx(1.5, rel=1e-15)
    # periodic continuation
    assert sample(w, w.period + 0.3) == pytest.approx(3.0, rel=1e-12)


def test_pulse_shape():
    w = pulse(1.5, 10.0, rise=1e-3)
    assert w(0.0) == 0.0
    assert w(5e-4) == pytest.approx(0.75)
    assert w(5.0) == 1.5
    assert w.duration == pytest.approx(10.0 + 1e-3)
    with pytest.raises(ValueError):
        w(20.0)


@pytest.mark.parametrize("bad", [
    [(0.0, 0.0)],
    [(0.0, 0.0), (0.0, 1.0)],
    [(0.0, 0.0), (1.0, math.nan)],
])
def test_invalid_breakpoints(bad):
    with pytest.raises(ValueError):
        custom(bad)


def test_periodic_must_close():
    with pytest.raises(ValueError):
        Waveform(((0.0, 0.0), (1.0, 1.0)), period=1.0)


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        sample(triangular_sweep(1.0, -1.0, 1.0), -1e-3)


@given(amps, amps, rates)
def test_sweep_slope_is_constant(a, b, rate):
    w = triangular_sweep(a, -b, rate)
    t, v = w.times, w.voltages
    slopes = np.abs(np.diff(v) / np.diff(t))
    assert np.allclose(slopes, rate, rtol=1e-9)
    assert w.period == pytest.approx(2 * (a + b) / rate, rel=1e-12)


@given(amps, amps, rates, st.floats(0.0, 1.0))
def test_sample_within_amplitudes(a, b, rate, frac):
    w = triangular_sweep(a, -b, rate, cycles=2)
    v = w(frac * w.duration)
    assert -b - 1e-9 <= v <= a + 1e-9


@given(amps, rates, st.integers(1, 3))
def test_breakpoints_between_unrolls_periods(a, rate, cycles):
    w = triangular_sweep(a, -a, rate, cycles=1)
    bps = w.breakpoints_between(0.0, cycles * w.period)
    assert len(bps) == 3 * cycles
    assert bps == sorted(bps)


@given(amps, amps, rates, st.floats(0.0, 1.0), st.floats(1e-9, 1e-3))
def test_sample_is_continuous(a, b, rate, frac, eps):
    w = triangular_sweep(a, -b, rate)
    t = frac * (w.duration - eps)
    assert abs(w(t + eps) - w(t)) <= rate * eps * (1 + 1e-9) + 1e-12


@given(amps, amps, rates, st.floats(0.001, 0.999))
def test_finite_difference_slope_away_from_breakpoints(a, b, rate, frac):
    w = triangular_sweep(a, -b, rate)
    t = frac * w.duration
    h = 1e-6 * w.period
    near = min(abs(t - tb) for tb in w.times)
    if near > 2 * h:
        assert abs(w(t + h) - w(t - h)) / (2 * h) == pytest.approx(rate, rel=1e-6)
