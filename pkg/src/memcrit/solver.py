"""Adaptive Dormand-Prince 5(4) time stepping with per-step algebraic solves.

Steps never straddle waveform breakpoints. After each accepted step the
states are clamped to their bounds; threshold crossings are located on the
cubic Hermite interpolant of the bracketing step.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np
from scipy import integrate as _quad

from .circuits import CircuitSystem, OperatingPoint
from .errors import BracketError, ConvergenceError, NonPhysicalError, StepSizeError
from .signals import Waveform, sample

__all__ = ["SolverConfig", "Trace", "Step", "integrate", "find_crossing", "run_to_saturation",
           "steps", "hermite"]


@dataclass(frozen=True)
class SolverConfig:
    """Integrator settings.

    ``abs_tol`` applies to states normalised by their bound range (so it is
    dimensionless for every model); ``rel_tol`` is relative to the state
    magnitude. ``max_step=None`` means one ten-thousandth of the integration
    span.
    """

    rel_tol: float = 1e-7
    abs_tol: float = 1e-9
    max_step: float | None = None
    min_step: float = 1e-18
    max_newton_iters: int = 200
    newton_tol: float = 1e-12
    clamp_states: bool = True
    first_step: float | None = None
    max_steps: int = 5_000_000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.newton_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_step is not None and not self.min_step < self.max_step:
            raise ValueError("need min_step < max_step")
        if not self.min_step > 0:
            raise ValueError("min_step must be positive")

    def tightened(self, factor: float = 10.0) -> "SolverConfig":
        """Copy with integration tolerances divided by ``factor``."""
        return dataclasses.replace(self, rel_tol=self.rel_tol / factor,
                                   abs_tol=self.abs_tol / factor)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class Trace:
    """Time-sampled simulation record.

    ``v_device`` and ``x`` have one column per device; ``v_device`` holds
    branch-frame voltage drops, so ``v_device.sum(1) + i * r_ext == v_applied``.
    """

    t: np.ndarray
    v_applied: np.ndarray
    v_device: np.ndarray
    i: np.ndarray
    x: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def n_devices(self) -> int:
        return self.x.shape[1]

    def __len__(self):
        return len(self.t)

    def columns(self) -> dict[str, np.ndarray]:
        cols = {"t": self.t, "v_applied": self.v_applied}
        names = "ab"
        for k in range(self.n_devices):
            cols[f"v_device_{names[k]}"] = self.v_device[:, k]
        cols["i"] = self.i
        for k in range(self.n_devices):
            cols[f"x_{names[k]}"] = self.x[:, k]
        return cols

    def window(self, t_start: float, t_stop: float) -> "Trace":
        m = (self.t >= t_start) & (self.t <= t_stop)
        return Trace(self.t[m], self.v_applied[m], self.v_device[m], self.i[m], self.x[m],
                     dict(self.metadata))


# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# fifth-order weights minus embedded fourth-order weights
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_STEP_FAILURES = (NonPhysicalError, ConvergenceError, BracketError, OverflowError)


@dataclass
class Step:
    """One accepted step, with enough data for Hermite interpolation."""

    t0: float
    y0: list
    f0: list
    t1: float
    y1: list
    f1: list
    op1: OperatingPoint
    error: float
    clamp: float


def hermite(step: Step, t: float) -> list[float]:
    """Cubic Hermite interpolant of the state inside an accepted step."""
    h = step.t1 - step.t0
    th = (t - step.t0) / h
    th2, th3 = th * th, th * th * th
    h00 = 2 * th3 - 3 * th2 + 1
    h10 = th3 - 2 * th2 + th
    h01 = -2 * th3 + 3 * th2
    h11 = th3 - th2
    return [h00 * a + h10 * h * fa + h01 * b + h11 * h * fb
            for a, fa, b, fb in zip(step.y0, step.f0, step.y1, step.f1)]


class _Evaluator:
    """Right-hand side with bound handling and warm-started algebraic solves."""

    def __init__(self, system: CircuitSystem, waveform: Waveform, cfg: SolverConfig):
        self.system = system
        self.waveform = waveform
        self.cfg = cfg
        self.bounds = system.bounds
        self.guess = None
        self.t_last = waveform.duration

    def voltage(self, t):
        if not self.waveform.periodic and t > self.t_last:
            # rounding at the final breakpoint
            t = self.t_last
        return sample(self.waveform, t)

    def clip(self, y):
        return [min(max(v, lo), hi) for v, (lo, hi) in zip(y, self.bounds)]

    def __call__(self, t, y):
        yc = self.clip(y)
        v = self.voltage(t)
        op = self.system.operating_point(yc, v, tol=self.cfg.newton_tol,
                                         max_iters=self.cfg.max_newton_iters, guess=self.guess)
        if not op.degenerate:
            self.guess = op.v_core[0]
        rates = self.system.rates(yc, op)
        for k, ((lo, hi), r) in enumerate(zip(self.bounds, rates)):
            if (yc[k] <= lo and r < 0) or (yc[k] >= hi and r > 0):
                rates[k] = 0.0
            elif not math.isfinite(r):
                raise OverflowError(f"non-finite state rate {r} at t = {t}")
        return rates, op


def steps(system: CircuitSystem, waveform: Waveform, t_end: float, cfg: SolverConfig,
          t0: float = 0.0, y0=None) -> Iterator[Step]:
    """Generate accepted integration steps from ``t0`` to ``t_end``."""
    if not t_end > t0:
        raise ValueError("t_end must exceed the start time")
    if not waveform.periodic and t_end > waveform.duration * (1 + 1e-12):
        raise ValueError(f"t_end = {t_end} s exceeds the waveform duration {waveform.duration} s")
    ev = _Evaluator(system, waveform, cfg)
    span = t_end - t0
    max_step = cfg.max_step if cfg.max_step is not None else span / 1e4
    scales = system.scales
    y = ev.clip(list(system.initial_state() if y0 is None else y0))
    f, _ = ev(t0, y)
    t = t0
    merge = 1e-12 * span
    breaks = []
    for b in waveform.breakpoints_between(t0, t_end) + [t_end]:
        if b - (breaks[-1] if breaks else t0) > merge:
            breaks.append(b)
        elif breaks:
            breaks[-1] = max(breaks[-1], b)
    if not breaks:
        breaks = [t_end]
    breaks[-1] = t_end
    bi = 0
    h_prop = cfg.first_step if cfg.first_step else min(max_step, span * 1e-6)
    n_steps = 0
    rejected_last = False
    while t < t_end:
        while bi < len(breaks) and breaks[bi] <= t:
            bi += 1
        t_stop = breaks[bi] if bi < len(breaks) else t_end
        h = min(h_prop, max_step)
        hit_break = False
        if t + h >= t_stop - 1e-12 * max(abs(t_stop), span):
            h = t_stop - t
            hit_break = True
        if h < cfg.min_step or h <= 4 * math.ulp(t):
            raise StepSizeError(f"step size {h:.3g} s fell below the minimum at t = {t:.9g} s",
                                t=t, state=list(y))
        try:
            k = [f]
            for s in range(1, 7):
                ys = [yi + h * sum(a * kk[j] for a, kk in zip(_A[s], k))
                      for j, yi in enumerate(y)]
                if s == 6:
                    y_new = ys
                ks, op = ev(t + _C[s] * h, ys)
                k.append(ks)
        except _STEP_FAILURES:
            h_prop = 0.25 * h
            rejected_last = True
            continue
        err = 0.0
        for j in range(len(y)):
            e = h * sum(ec * kk[j] for ec, kk in zip(_E, k))
            sc = cfg.abs_tol * scales[j] + cfg.rel_tol * max(abs(y[j]), abs(y_new[j]))
            err += (e / sc) ** 2
        err = math.sqrt(err / len(y))
        if not math.isfinite(err):
            h_prop = 0.25 * h
            rejected_last = True
            continue
        if err > 1.0:
            h_prop = h * max(0.2, 0.9 * err ** -0.2)
            rejected_last = True
            continue
        t_new = t_stop if hit_break else t + h
        f_new = k[6]
        clamp = 0.0
        if cfg.clamp_states:
            y_cl = ev.clip(y_new)
            if y_cl != y_new:
                clamp = max(abs(a - b) / sc_ for a, b, sc_ in zip(y_cl, y_new, scales))
                y_new = y_cl
                f_new, op = ev(t_new, y_new)
        step = Step(t, y, f, t_new, y_new, f_new, op, err, clamp)
        yield step
        n_steps += 1
        if n_steps > cfg.max_steps:
            raise StepSizeError(f"exceeded {cfg.max_steps} steps at t = {t_new:.9g} s",
                                t=t_new, state=list(y_new))
        fac = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        if rejected_last:
            fac = min(fac, 1.0)
        rejected_last = False
        # a step shortened to land on a breakpoint says little about the next one
        h_prop = max(h_prop, h * fac) if hit_break else h * fac
        t, y, f = t_new, y_new, f_new


def integrate(system: CircuitSystem, waveform: Waveform, t_end: float | None = None,
              cfg: SolverConfig | None = None, output_dt: float | None = None,
              stop: Callable | None = None) -> Trace:
    """Simulate ``system`` driven by ``waveform`` and record a :class:`Trace`.

    Rows are written at every accepted step endpoint and, if ``output_dt`` is
    given, additionally on a uniform grid using the Hermite interpolant.
    ``stop(t, y, dy)`` may end the run early after any accepted step.
    """
    cfg = cfg or SolverConfig()
    t_end = waveform.duration if t_end is None else float(t_end)
    nd = system.n_devices
    rows_t, rows_v, rows_vd, rows_i, rows_x = [], [], [], [], []

    def record(t, y, op):
        rows_t.append(t)
        rows_v.append(sample(waveform, min(t, waveform.duration) if not waveform.periodic else t))
        rows_vd.append(op.v_drop)
        rows_i.append(op.i)
        rows_x.append(list(y))

    y0 = [min(max(v, lo), hi) for v, (lo, hi) in zip(system.initial_state(), system.bounds)]
    op0 = system.operating_point(y0, sample(waveform, 0.0), tol=cfg.newton_tol,
                                 max_iters=cfg.max_newton_iters)
    record(0.0, y0, op0)
    next_grid = output_dt if output_dt else math.inf
    max_err = 0.0
    max_clamp = 0.0
    n = 0
    for st in steps(system, waveform, t_end, cfg):
        n += 1
        max_err = max(max_err, st.error)
        max_clamp = max(max_clamp, st.clamp)
        while next_grid < st.t1:
            if next_grid > st.t0:
                yg = [min(max(v, lo), hi) for v, (lo, hi) in zip(hermite(st, next_grid),
                                                                  system.bounds)]
                opg = system.operating_point(yg, sample(waveform, next_grid),
                                             tol=cfg.newton_tol,
                                             max_iters=cfg.max_newton_iters,
                                             guess=st.op1.v_core[0])
                record(next_grid, yg, opg)
            next_grid += output_dt
        record(st.t1, st.y1, st.op1)
        if stop is not None and stop(st.t1, st.y1, st.f1):
            break
    meta = {
        "models": [d.model_id for d in system.devices],
        "circuit": system.describe(),
        "waveform": waveform.label,
        "period": waveform.period,
        "solver": cfg.to_dict(),
        "solver_hash": cfg.digest(),
        "steps": n,
        "max_error_norm": max_err,
        "max_clamp": max_clamp,
    }
    return Trace(
        t=np.array(rows_t),
        v_applied=np.array(rows_v),
        v_device=np.array(rows_vd, dtype=float).reshape(-1, nd),
        i=np.array(rows_i),
        x=np.array(rows_x, dtype=float).reshape(-1, nd),
        metadata=meta,
    )


def find_crossing(system: CircuitSystem, waveform: Waveform, threshold: float,
                  direction: str = "rising", cfg: SolverConfig | None = None,
                  t_end: float | None = None, device: int = 0,
                  rel_precision: float = 1e-10) -> float | None:
    """Time at which the state of ``device`` first crosses ``threshold``.

    Returns ``None`` when no crossing in the requested direction occurs
    before ``t_end`` (default: the waveform duration).

    A single-device run whose step size collapses while the drive is constant
    (a state runaway faster than the time axis can resolve) is finished in the
    state variable instead: the remaining time is the quadrature of
    ``1 / dx/dt`` from the current state to the threshold.
    """
    if direction not in ("rising", "falling"):
        raise ValueError("direction must be 'rising' or 'falling'")
    lo, hi = system.bounds[device]
    if not lo <= threshold <= hi:
        raise ValueError(f"threshold {threshold} outside the state bounds [{lo}, {hi}]")
    cfg = cfg or SolverConfig()
    t_end = waveform.duration if t_end is None else float(t_end)
    sgn = 1.0 if direction == "rising" else -1.0
    x0 = system.initial_state()[device]
    if sgn * (x0 - threshold) >= 0:
        return 0.0
    try:
        for st in steps(system, waveform, t_end, cfg):
            g0 = sgn * (st.y0[device] - threshold)
            g1 = sgn * (st.y1[device] - threshold)
            if g0 < 0 <= g1:
                a, b = st.t0, st.t1
                tol = rel_precision * max(b, abs(b - a))
                while b - a > tol:
                    m = 0.5 * (a + b)
                    if sgn * (hermite(st, m)[device] - threshold) >= 0:
                        b = m
                    else:
                        a = m
                return 0.5 * (a + b)
    except StepSizeError as exc:
        v = _constant_drive(system, waveform, exc.t, t_end)
        if v is None:
            raise
        rate = _frozen_rate(system, v, cfg)
        remaining = _traverse_time(rate, exc.state[0], threshold)
        if remaining is None or exc.t + remaining > t_end:
            return None
        return exc.t + remaining
    return None


def run_to_saturation(system: CircuitSystem, waveform: Waveform, rel_rate: float = 1e-6,
                      cfg: SolverConfig | None = None, device: int = 0) -> tuple[float, float]:
    """Drive ``system`` until the state rate falls below ``rel_rate`` of its initial value.

    The reference rate is the one at the start of the final constant segment
    of ``waveform`` (the flat top of a held pulse). Returns ``(t, x)`` of the
    saturated state; if the rate never decays the state at the end of the
    waveform is returned. Runaways are followed in the state variable as in
    :func:`find_crossing`.
    """
    cfg = cfg or SolverConfig()
    t_end = waveform.duration
    t_flat = float(waveform.times[-2]) if not waveform.periodic else 0.0
    ref = {}

    def stop(t, y, dy):
        if t >= t_flat and "rate" not in ref:
            ref["rate"] = abs(dy[device])
            return False
        return "rate" in ref and abs(dy[device]) < rel_rate * ref["rate"]

    try:
        tr = integrate(system, waveform, cfg=cfg, stop=stop)
        return float(tr.t[-1]), float(tr.x[-1, device])
    except StepSizeError as exc:
        v = _constant_drive(system, waveform, exc.t, t_end)
        if v is None:
            raise
        rate = _frozen_rate(system, v, cfg)
        x_f = exc.state[0]
        ref_rate = ref.get("rate", abs(rate(system.initial_state()[0])))
        lo, hi = system.bounds[0]
        x_sat = _decay_point(rate, x_f, lo if rate(x_f) < 0 else hi, rel_rate * ref_rate)
        remaining = _traverse_time(rate, x_f, x_sat) or 0.0
        return min(exc.t + remaining, t_end), x_sat


def _constant_drive(system, waveform, t, t_end):
    """Applied voltage if it is constant on [t, t_end] for a single device, else None."""
    if system.n_devices != 1 or waveform.periodic:
        return None
    v = sample(waveform, t)
    later = [sample(waveform, b) for b in waveform.breakpoints_between(t, t_end)]
    if any(u != v for u in later) or sample(waveform, t_end) != v:
        return None
    return v


def _frozen_rate(system, v, cfg):
    """Autonomous state rate x -> dx/dt of a single device at fixed drive ``v``."""
    lo, hi = system.bounds[0]

    def rate(x):
        x = min(max(x, lo), hi)
        op = system.operating_point([x], v, tol=cfg.newton_tol, max_iters=cfg.max_newton_iters)
        return system.rates([x], op)[0]

    return rate


def _traverse_time(rate, x_from, x_to):
    """Time for the autonomous flow to carry the state from ``x_from`` to ``x_to``.

    ``None`` if the flow stalls or points away from ``x_to`` on the way.
    """
    if x_from == x_to:
        return 0.0
    direction = 1.0 if x_to > x_from else -1.0

    def inv(x):
        r = direction * rate(x)
        return 1.0 / r if r > 0 else math.inf

    if not math.isfinite(inv(x_from)) or not math.isfinite(inv(x_to)):
        return None
    with warnings.catch_warnings():
        warnings.simplefilter("error", _quad.IntegrationWarning)
        try:
            val, _ = _quad.quad(inv, min(x_from, x_to), max(x_from, x_to),
                                epsabs=0.0, epsrel=1e-10, limit=500)
        except (_quad.IntegrationWarning, ZeroDivisionError):
            return None
    return val if math.isfinite(val) else None


def _decay_point(rate, x_from, bound, target, n_grid=2000):
    """First state past the rate maximum where |rate| drops below ``target``."""
    xs = np.linspace(x_from, bound, n_grid)
    mags = [abs(rate(x)) for x in xs]
    k_peak = int(np.argmax(mags))
    for k in range(k_peak, n_grid):
        if mags[k] < target:
            a, b = xs[k - 1], xs[k]
            for _ in range(200):
                m = 0.5 * (a + b)
                if abs(rate(m)) < target:
                    b = m
                else:
                    a = m
                if abs(b - a) <= 1e-15 * abs(bound - x_from):
                    break
            return float(b)
    return float(bound)
