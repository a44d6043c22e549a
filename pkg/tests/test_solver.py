import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memcrit.circuits import crs_system, single_device_system
from memcrit.devices import make_model
from memcrit.errors import StepSizeError
from memcrit.linear import analytic_set_time
from memcrit.signals import custom, pulse, triangular_sweep
from memcrit.solver import SolverConfig, find_crossing, integrate, run_to_saturation

LINEAR = ["linear-benderli", "linear-joglekar", "linear-biolek", "linear-shin"]


def shin_state(m, v, t):
    """x(t) under constant v: R_HRS x + (R_LRS - R_HRS) x^2 / 2 = K1 v t (until x = 1)."""
    p = m.params
    a, b = p.R_HRS, p.R_LRS - p.R_HRS
    c = p.K1 * v * t
    return (-a + math.sqrt(a * a + 2 * b * c)) / b


def test_constant_drive_matches_closed_form():
    m = make_model("linear-shin")
    v = 1.0
    wf = custom([(0.0, v), (0.7, v)])
    tr = integrate(single_device_system(m), wf)
    expect = np.array([shin_state(m, v, t) for t in tr.t])
    assert np.max(np.abs(tr.x[:, 0] - expect)) < 1e-7


def test_trace_shapes_and_metadata():
    m = make_model("linear-joglekar")
    wf = triangular_sweep(1.0, -1.0, 10.0)
    tr = integrate(single_device_system(m), wf, output_dt=wf.period / 100)
    assert tr.x.shape == (len(tr), 1)
    assert tr.v_device.shape == (len(tr), 1)
    assert np.all(np.diff(tr.t) > 0)
    assert tr.t[-1] == pytest.approx(wf.period)
    assert tr.metadata["models"] == ["linear-joglekar"]
    assert set(tr.columns()) == {"t", "v_applied", "v_device_a", "i", "x_a"}


def test_uniform_grid_is_included():
    m = make_model("linear-biolek")
    wf = triangular_sweep(2.0, -2.0, 10.0)
    tr = integrate(single_device_system(m), wf, output_dt=wf.period / 50)
    grid = wf.period / 50 * np.arange(1, 50)
    assert all(np.min(np.abs(tr.t - g)) < 1e-12 for g in grid)


@settings(max_examples=15)
@given(st.sampled_from(LINEAR), st.floats(0.3, 3.0))
def test_crossing_time_matches_quadrature(mid, v):
    m = make_model(mid)
    wf = pulse(v, 1e3, rise=1e-9)
    t = find_crossing(single_device_system(m), wf, 0.5, cfg=SolverConfig(rel_tol=1e-9, abs_tol=1e-11))
    ref = analytic_set_time(m.params, m.window, v, m.x0) + 0.5e-9
    assert t == pytest.approx(ref, rel=1e-4)


def test_no_crossing_returns_none():
    m = make_model("linear-shin")
    wf = pulse(0.01, 1.0)
    assert find_crossing(single_device_system(m), wf, 0.5) is None


def test_threshold_outside_bounds():
    m = make_model("linear-shin")
    with pytest.raises(ValueError):
        find_crossing(single_device_system(m), pulse(1.0, 1.0), 1.5)


@settings(max_examples=6)
@given(st.sampled_from(LINEAR), st.floats(0.01, 0.99), st.floats(2.0, 10.0))
def test_linear_pair_conserves_total_state(mid, x0, amp):
    # own-frame states that sum to one keep summing to one: R_total is constant
    m = make_model(mid)
    s = crs_system(m, m, x0, 1.0 - x0)
    cfg = SolverConfig()
    tr = integrate(s, triangular_sweep(amp, -amp, 50.0), cfg=cfg)
    total = tr.x.sum(axis=1)
    assert np.max(np.abs(total - 1.0)) < 10 * cfg.abs_tol
    mask = np.abs(tr.v_applied) > 1e-3
    r = tr.v_applied[mask] / tr.i[mask]
    assert np.ptp(r) / r.min() < 1e-6


@settings(max_examples=6)
@given(st.sampled_from(["laiho", "chang", "yakopcic", "linear-biolek"]), st.floats(0.5, 4.0),
       st.floats(1.0, 100.0))
def test_states_stay_in_bounds(mid, amp, rate):
    m = make_model(mid)
    tr = integrate(single_device_system(m), triangular_sweep(amp, -amp, rate))
    assert np.all(tr.x >= 0.0) and np.all(tr.x <= 1.0)


def test_pickett_state_stays_in_gap_bounds():
    m = make_model("pickett")
    tr = integrate(single_device_system(m, 2400.0), triangular_sweep(4.0, -1.5, 100.0,
                                                                      start="negative"))
    lo, hi = m.bounds
    assert np.all(tr.x >= lo) and np.all(tr.x <= hi)


def test_step_budget_exhaustion_raises():
    m = make_model("linear-joglekar")
    with pytest.raises(StepSizeError):
        integrate(single_device_system(m), triangular_sweep(1.0, -1.0, 1.0),
                  cfg=SolverConfig(max_steps=5))


def test_saturation_reaches_bound():
    m = make_model("linear-shin")
    t, x = run_to_saturation(single_device_system(m), pulse(2.0, 100.0))
    assert x == pytest.approx(1.0, abs=1e-6)
    assert t < 100.0


@pytest.mark.parametrize("bad", [dict(rel_tol=0.0), dict(min_step=1.0, max_step=0.5),
                                 dict(min_step=0.0)])
def test_solver_config_validation(bad):
    with pytest.raises(ValueError):
        SolverConfig(**bad)


def test_tightened_divides_tolerances():
    cfg = SolverConfig().tightened(10)
    assert cfg.rel_tol == pytest.approx(1e-8) and cfg.abs_tol == pytest.approx(1e-10)
    assert cfg.digest() != SolverConfig().digest()


@pytest.mark.parametrize("mid,amp", [("linear-biolek", 5.0), ("laiho", 3.0), ("yakopcic", 3.0)])
def test_error_norm_and_clamping_stay_small(mid, amp):
    cfg = SolverConfig()
    m = make_model(mid)
    tr = integrate(single_device_system(m), triangular_sweep(amp, -amp, 10.0), cfg=cfg)
    assert tr.metadata["max_error_norm"] <= 1.0
    assert tr.metadata["max_clamp"] <= 10 * cfg.abs_tol


def test_reversed_device_equals_negated_drive():
    # device B of a pair whose partner is a near-short sees the negated waveform
    m = make_model("linear-biolek")
    short = make_model("linear-biolek", {"R_HRS": 2e-9, "R_LRS": 1e-9, "K1": 1e-12})
    from memcrit.circuits import CircuitSystem
    pair = CircuitSystem((short, m), (1, -1), 0.0, "crs")
    wf = triangular_sweep(3.0, -3.0, 10.0)
    cfg = SolverConfig(rel_tol=1e-10, abs_tol=1e-12)
    a = integrate(pair, wf, cfg=cfg, output_dt=wf.period / 200)
    b = integrate(single_device_system(m), wf.negated(), cfg=cfg, output_dt=wf.period / 200)
    grid = wf.period / 200 * np.arange(1, 200)
    xa = np.interp(grid, a.t, a.x[:, 1])
    xb = np.interp(grid, b.t, b.x[:, 0])
    assert np.max(np.abs(xa - xb)) < 1e-8


@pytest.mark.slow
def test_max_step_refinement_leaves_metrics_unchanged():
    from memcrit.config import canned_config_path, load_config
    from memcrit.experiments import compare_headlines, headline_metrics, run_experiment
    cfg = load_config(canned_config_path("fig5b"))
    base = run_experiment(cfg)
    period = triangular_sweep(10.0, -10.0, 10.0).period
    import dataclasses
    fine = run_experiment(cfg.with_solver(dataclasses.replace(cfg.solver,
                                                             max_step=period / 1e5)))
    assert compare_headlines(cfg, headline_metrics(base), headline_metrics(fine)) == []
