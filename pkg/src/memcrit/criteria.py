"""Evaluation harness: switching voltages, loop symmetry, kinetics curves, CRS analysis.

Every function here is a pure function of its inputs. Traces carry enough
metadata (models, orientations, parameters) for the analyses to find state
bounds and switching directions without extra arguments.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .circuits import CircuitSystem, single_device_system
from .devices import ModelInstance
from .signals import pulse
from .solver import SolverConfig, Trace, find_crossing, run_to_saturation

__all__ = [
    "KineticsCurve",
    "KineticsClass",
    "CrsReport",
    "CriteriaReport",
    "device_traits",
    "extract_switching_voltages",
    "loop_symmetry_error",
    "kinetics_curve",
    "normalize_kinetics",
    "classify_kinetics",
    "crs_analysis",
    "snapback_depth",
    "MIN_CHORD_VOLTAGE",
]

#: Samples with |v_applied| below this are excluded from chordal quantities (V).
MIN_CHORD_VOLTAGE = 0.01

THRESHOLD_RULES = ("fixed_half", "half_range")


# ---------------------------------------------------------------------------
# trace metadata helpers


@dataclass(frozen=True)
class DeviceTraits:
    """Switching geometry of one device inside a traced circuit."""

    model: str
    orientation: int
    lrs_direction: int
    set_polarity: int
    lo: float
    hi: float

    @property
    def half_range(self) -> float:
        return 0.5 * (self.lo + self.hi)


def device_traits(trace: Trace, device: int = 0) -> DeviceTraits:
    """Read model id, orientation and state bounds of ``device`` from trace metadata."""
    try:
        circ = trace.metadata["circuit"]
        dev = circ["devices"][device]
        model = dev["model"]
        orientation = int(circ["orientations"][device])
    except (KeyError, IndexError) as exc:
        raise ValueError(f"trace metadata lacks circuit information for device {device}") from exc
    if model == "pickett":
        p = dev["params"]
        return DeviceTraits(model, orientation, -1, -1, float(p["w_min"]), float(p["w_max"]))
    return DeviceTraits(model, orientation, 1, 1, 0.0, 1.0)


def _first_crossing(t, x, threshold, sgn):
    """Interpolated time where ``sgn * (x - threshold)`` first becomes >= 0 from below."""
    g = sgn * (np.asarray(x) - threshold)
    below = g < 0
    hits = np.nonzero(below[:-1] & ~below[1:])[0]
    if len(hits) == 0:
        return None
    k = int(hits[0])
    g0, g1 = g[k], g[k + 1]
    if g1 == 0:
        return float(t[k + 1])
    return float(t[k] + (t[k + 1] - t[k]) * (-g0) / (g1 - g0))


# ---------------------------------------------------------------------------
# criterion 1: sweeps


def extract_switching_voltages(trace: Trace, threshold: float | None = None,
                               device: int = 0) -> tuple[float | None, float | None]:
    """Applied voltages at the first SET and first RESET crossing of ``threshold``.

    SET is the crossing toward the low resistive state, RESET the crossing
    back. ``threshold`` defaults to the middle of the state range. Crossing
    times are interpolated linearly between samples and the applied voltage
    is interpolated at that time. A missing crossing gives ``None``.

    Returns
    -------
    (v_set, v_reset) : signed applied voltages, or None
    """
    traits = device_traits(trace, device)
    thr = traits.half_range if threshold is None else float(threshold)
    x = trace.x[:, device]
    out = []
    for sgn in (traits.lrs_direction, -traits.lrs_direction):
        tc = _first_crossing(trace.t, x, thr, sgn)
        out.append(None if tc is None else float(np.interp(tc, trace.t, trace.v_applied)))
    return out[0], out[1]


def loop_symmetry_error(trace: Trace, mode: str = "mirror", cycle: int | None = None) -> float:
    """Point-symmetry defect of a steady-state I-V loop, normalised by max |I|.

    A triangular drive satisfies V(T - s) = -V(s) within each period. For a
    loop that is point symmetric about the origin the current obeys the same
    relation, so the default ``mode="mirror"`` reports
    ``max |I(kT + s) + I(kT + T - s)| / max |I|`` over one cycle.
    ``mode="half_period"`` compares I(t) with -I(t + T/2) instead; that
    pairing is only symmetric for drives that are odd under a half-period
    shift, which the 0 -> +A -> -A -> 0 sweep is not in flux.

    The first cycle is treated as a transient; by default the last complete
    cycle is analysed, so the trace must span at least two periods.
    """
    period = float(trace.metadata.get("period") or 0.0)
    if not period > 0:
        raise ValueError("loop symmetry needs a trace from a periodic drive")
    if mode not in ("mirror", "half_period"):
        raise ValueError(f"unknown symmetry mode {mode!r}")
    t, cur = trace.t, trace.i
    n_cycles = int(math.floor(t[-1] / period + 1e-9))
    if n_cycles < 2:
        raise ValueError("loop symmetry needs at least two full periods (the first is discarded)")
    k = n_cycles - 1 if cycle is None else int(cycle)
    if not 1 <= k < n_cycles:
        raise ValueError(f"cycle {k} is not a complete steady-state cycle")
    t0 = k * period
    if mode == "mirror":
        m = (t >= t0) & (t <= t0 + period)
        ts = t[m]
        partner = 2.0 * t0 + period - ts
        other = np.interp(partner, t, cur)
        scale = np.max(np.abs(cur[m]))
        return float(np.max(np.abs(cur[m] + other)) / scale) if scale > 0 else 0.0
    m = (t >= t0) & (t <= t0 + 0.5 * period)
    ts = t[m]
    other = np.interp(ts + 0.5 * period, t, cur)
    scale = np.max(np.abs(cur[(t >= t0) & (t <= t0 + period)]))
    return float(np.max(np.abs(cur[m] + other)) / scale) if scale > 0 else 0.0


def snapback_depth(trace: Trace, device: int = 0) -> float:
    """Largest drop of |v_device| while |v_applied| keeps growing, relative to max |v_device|.

    Only legs of the SET polarity are searched. A positive result means the
    device voltage snaps back during SET although the drive is still rising.
    """
    traits = device_traits(trace, device)
    pol = traits.orientation * traits.set_polarity
    va = pol * trace.v_applied
    vd = pol * trace.v_device[:, device]
    scale = np.max(np.abs(vd))
    if scale == 0:
        return 0.0
    rising = np.diff(va) > 0
    depth = 0.0
    peak = None
    for k in range(len(va) - 1):
        if rising[k] and va[k] > 0:
            peak = vd[k] if peak is None else max(peak, vd[k])
            depth = max(depth, peak - vd[k + 1])
        else:
            peak = None
    return float(depth / scale)


# ---------------------------------------------------------------------------
# criterion 2: kinetics


@dataclass(frozen=True)
class KineticsCurve:
    """SET time versus pulse height.

    ``points`` holds ``(v_p, t_set)`` with ``t_set=None`` for heights that
    never switch within the pulse. ``threshold`` is the state value whose
    crossing defines t_SET.
    """

    points: tuple[tuple[float, float | None], ...]
    threshold_rule: str
    threshold: float | None = None
    v_p1: float | None = None
    model: str = ""
    state_range: tuple[float, float] | None = None

    def __post_init__(self):
        pts = tuple((float(v), None if t is None else float(t)) for v, t in self.points)
        if self.threshold_rule not in THRESHOLD_RULES:
            raise ValueError(f"threshold_rule must be one of {THRESHOLD_RULES}")
        vs = [v for v, _ in pts]
        if any(b <= a for a, b in zip(vs, vs[1:])):
            raise ValueError("pulse heights must be strictly increasing")
        if any(t is not None and not t > 0 for _, t in pts):
            raise ValueError("switching times must be positive")
        object.__setattr__(self, "points", pts)

    @property
    def heights(self) -> np.ndarray:
        return np.array([v for v, _ in self.points])

    @property
    def times(self) -> np.ndarray:
        """SET times with NaN for points without a crossing."""
        return np.array([math.nan if t is None else t for _, t in self.points])

    def defined(self) -> list[tuple[float, float]]:
        return [(v, t) for v, t in self.points if t is not None]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["points"] = [list(p) for p in self.points]
        return d


def kinetics_curve(model: ModelInstance, heights, threshold_rule: str = "fixed_half",
                   duration: float = 1e4, r_series: float = 0.0,
                   cfg: SolverConfig | None = None, rise: float = 1e-9,
                   saturation_rel_rate: float = 1e-6) -> KineticsCurve:
    """Simulate one held pulse per height and record the SET time.

    The device starts from its initial state (the high resistive state).
    Heights are magnitudes; the pulse polarity is the model's SET polarity.

    ``fixed_half`` uses x = 0.5 as threshold. ``half_range`` uses the midpoint
    between the initial state and the state reached under a long pulse at the
    largest height, run until the state rate falls below
    ``saturation_rel_rate`` of its initial value.

    Each point is integrated twice: a first pass estimates t_SET, the second
    caps the step at one hundredth of that estimate.
    """
    heights = [float(h) for h in heights]
    if not heights:
        raise ValueError("at least one pulse height is required")
    if any(h <= 0 for h in heights):
        raise ValueError("pulse heights must be positive magnitudes")
    if threshold_rule not in THRESHOLD_RULES:
        raise ValueError(f"threshold_rule must be one of {THRESHOLD_RULES}")
    cfg = cfg or SolverConfig()
    system = single_device_system(model, r_series)
    lo, hi = model.bounds
    x0 = model.x0
    pol = model.set_polarity
    state_range = None
    if threshold_rule == "fixed_half":
        threshold = 0.5
    else:
        wf = pulse(pol * heights[-1], duration, rise=rise)
        _, x_sat = run_to_saturation(system, wf, saturation_rel_rate, cfg)
        state_range = (min(x0, x_sat), max(x0, x_sat))
        threshold = 0.5 * (x0 + x_sat)
        if threshold == x0:
            raise ValueError("the saturating pulse did not move the state; no threshold")
    direction = "rising" if model.lrs_direction > 0 else "falling"
    points = []
    for h in heights:
        points.append((h, set_time(system, pol * h, threshold, direction, duration, cfg, rise)))
    return KineticsCurve(tuple(points), threshold_rule, threshold, None, model.model_id,
                         state_range)


def set_time(system: CircuitSystem, v_p: float, threshold: float, direction: str,
             duration: float, cfg: SolverConfig, rise: float = 1e-9) -> float | None:
    """Two-pass threshold crossing time under a held pulse of height ``v_p``."""
    wf = pulse(v_p, duration, rise=rise)
    t_est = find_crossing(system, wf, threshold, direction, cfg)
    if t_est is None or t_est == 0.0:
        return t_est
    cap = 1e-2 * t_est
    if cfg.max_step is not None and cfg.max_step <= cap:
        return t_est
    fine = SolverConfig(**{**cfg.to_dict(), "max_step": max(cap, 2.0 * cfg.min_step)})
    return find_crossing(system, wf, threshold, direction, fine)


def normalize_kinetics(curve: KineticsCurve, v_p1: float) -> KineticsCurve:
    """Divide every SET time by the SET time at the anchor height ``v_p1``."""
    anchor = None
    for v, t in curve.points:
        if math.isclose(v, v_p1, rel_tol=1e-12, abs_tol=0.0):
            anchor = t
            break
    else:
        raise ValueError(f"curve has no point at the anchor height {v_p1} V")
    if anchor is None:
        raise ValueError(f"the anchor point at {v_p1} V did not switch")
    pts = tuple((v, None if t is None else t / anchor) for v, t in curve.points)
    return KineticsCurve(pts, curve.threshold_rule, curve.threshold, float(v_p1), curve.model,
                         curve.state_range)


@dataclass(frozen=True)
class KineticsClass:
    """Outcome of :func:`classify_kinetics`.

    ``kind`` is ``"power_law"`` or ``"exponential_like"`` by the smaller RMS
    residual in log10(t); ``"threshold"`` marks curves whose lowest heights
    never switched. Both fits are always reported.
    """

    kind: str
    exponent: float
    semilog_slope: float
    power_residual: float
    exp_residual: float
    decades_per_doubling: float | None
    n_points: int

    def to_dict(self) -> dict:
        return asdict(self)


def classify_kinetics(curve: KineticsCurve, min_points: int = 4) -> KineticsClass:
    """Fit power-law and exponential laws to the defined points of ``curve``.

    The power law is log t = a + p log v (``exponent`` = p); the exponential
    law is log t = a + s v (``semilog_slope`` = s, per volt, natural log).
    ``decades_per_doubling`` is log10(t(v) / t(2v)) at the lowest defined
    height, with t(2v) interpolated log-log; None if 2v is out of range.
    """
    pts = curve.defined()
    if len(pts) < min_points:
        raise ValueError(f"need at least {min_points} switching points, got {len(pts)}")
    v = np.array([p[0] for p in pts])
    lt = np.log(np.array([p[1] for p in pts]))
    a_pow = np.polyfit(np.log(v), lt, 1)
    a_exp = np.polyfit(v, lt, 1)
    ln10 = math.log(10.0)
    res_pow = float(np.sqrt(np.mean((np.polyval(a_pow, np.log(v)) - lt) ** 2)) / ln10)
    res_exp = float(np.sqrt(np.mean((np.polyval(a_exp, v) - lt) ** 2)) / ln10)
    dpd = None
    if 2.0 * v[0] <= v[-1] * (1 + 1e-12):
        lt2 = np.interp(math.log(2.0 * v[0]), np.log(v), lt)
        dpd = float((lt[0] - lt2) / ln10)
    first_defined = v[0]
    sub = any(t is None and vv < first_defined for vv, t in curve.points)
    if sub:
        kind = "threshold"
    else:
        kind = "power_law" if res_pow <= res_exp else "exponential_like"
    return KineticsClass(kind, float(a_pow[0]), float(a_exp[0]), res_pow, res_exp, dpd, len(pts))


# ---------------------------------------------------------------------------
# criterion 3: anti-serial pairs


@dataclass(frozen=True)
class CrsReport:
    """Chordal-resistance statistics of an anti-serial sweep.

    Resistances in ohms, voltages are applied voltages, times in seconds.
    ``peak_lag`` maps ``"positive"``/``"negative"`` to the time of the
    conductance peak minus the time of the applied-voltage extremum in the
    first cycle. ``set_onset`` maps the branch to the |V| at which the
    switching device first leaves its initial state.
    """

    r_total_min: float
    r_total_max: float
    r_initial: float
    on_threshold: float
    on_window: tuple[float, float] | None
    on_windows: tuple[tuple[float, float], ...]
    self_crossing: bool
    increased_r_interval: tuple[float, float] | None
    peak_lag: dict = field(default_factory=dict)
    set_onset: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["on_windows"] = [list(w) for w in self.on_windows]
        return d


def chordal_resistance(trace: Trace, min_voltage: float = MIN_CHORD_VOLTAGE):
    """Mask of usable samples and R_total = |v_applied / i| on them (inf at i = 0)."""
    v, cur = trace.v_applied, trace.i
    mask = np.abs(v) >= min_voltage
    with np.errstate(divide="ignore"):
        r = np.where(cur[mask] != 0, np.abs(v[mask] / np.where(cur[mask] != 0, cur[mask], 1.0)),
                     np.inf)
    return mask, r


def crs_analysis(trace: Trace, min_voltage: float = MIN_CHORD_VOLTAGE,
                 on_threshold: float | None = None, rel_increase: float = 1e-6,
                 onset_rel: float = 1e-6, min_contrast: float = 2.0,
                 on_decade: float = 10.0) -> CrsReport:
    """Analyse a two-device sweep trace.

    - R_total = v_applied / i per sample with |v_applied| >= ``min_voltage``.
    - ON-window: the run of consecutive samples with R_total below
      ``on_threshold`` spanning the widest applied-voltage interval. The
      default threshold is the geometric mean of the minimum and the initial
      R_total (the largest finite value when the initial one is infinite),
      capped at ``on_decade`` times the minimum so that it never hinges on
      how close a blocking state gets to its bound. A sweep whose reference
      level exceeds the minimum by less than ``min_contrast`` has no
      ON-window.
    - Self-crossing: two monotone legs of the I-V curve inside an ON run
      cross each other away from their shared turning point.
    - Increased-R interval: samples where R_total exceeds its first usable
      value by more than ``rel_increase``, reported as (t_first, t_last).
    """
    if trace.n_devices != 2:
        raise ValueError("crs_analysis needs a two-device trace")
    mask, r = chordal_resistance(trace, min_voltage)
    if not mask.any():
        raise ValueError("no samples above the minimum chord voltage")
    t = trace.t[mask]
    v = trace.v_applied[mask]
    cur = trace.i[mask]
    finite = r[np.isfinite(r)]
    r_min = float(r.min())
    r_max = float(r.max())
    r0 = float(r[0])
    if on_threshold is None:
        r_ref = r0 if math.isfinite(r0) else float(finite.max()) if len(finite) else math.inf
        if r_ref >= min_contrast * r_min:
            on_threshold = min(math.sqrt(r_min * r_ref), on_decade * r_min)
        else:
            on_threshold = r_min
    # ON runs: consecutive usable samples (no gap across the excluded |v| band)
    idx = np.nonzero(mask)[0]
    below = r < on_threshold
    runs = []
    start = None
    for k in range(len(r)):
        contiguous = k > 0 and idx[k] == idx[k - 1] + 1
        if below[k] and (start is None or not contiguous):
            if start is not None:
                runs.append((start, k - 1))
            start = k
        elif not below[k] and start is not None:
            runs.append((start, k - 1))
            start = None
    if start is not None:
        runs.append((start, len(r) - 1))
    windows = [_window_span(v, r, idx, a, b, on_threshold, min_voltage) for a, b in runs]
    on_window = max(windows, key=lambda w: w[1] - w[0]) if windows else None
    crossing = any(_self_crosses(v[a:b + 1], cur[a:b + 1]) for a, b in runs if b - a >= 3)

    inc = np.nonzero(np.isfinite(r) & (r > r0 * (1.0 + rel_increase)))[0] if math.isfinite(r0) \
        else np.array([], dtype=int)
    increased = (float(t[inc[0]]), float(t[inc[-1]])) if len(inc) else None

    return CrsReport(r_min, r_max, r0, on_threshold, on_window, tuple(windows), bool(crossing),
                     increased, _peak_lags(trace, min_voltage), _set_onsets(trace, onset_rel))


def _window_span(v, r, idx, a, b, thr, min_voltage):
    """Applied-voltage extent of ON run [a, b], with interpolated threshold crossings.

    An end that borders the excluded low-voltage band is reported at
    +-``min_voltage`` exactly.
    """
    ends = []
    for k, nb in ((a, a - 1), (b, b + 1)):
        if 0 <= nb < len(r) and abs(idx[nb] - idx[k]) == 1:
            r0, r1 = r[nb], r[k]
            if math.isfinite(r0) and r0 != r1:
                w = (r0 - thr) / (r0 - r1)
                ends.append(float(v[nb] + w * (v[k] - v[nb])))
            else:
                ends.append(float(v[k]))
        elif abs(v[k]) < 2.0 * min_voltage:
            ends.append(math.copysign(min_voltage, v[k]))
        else:
            ends.append(float(v[k]))
    inner = v[a:b + 1]
    return (min(min(ends), float(inner.min())), max(max(ends), float(inner.max())))


def _refine_peak(t, y, k):
    """Vertex time of the parabola through the samples around index ``k``."""
    if k == 0 or k == len(y) - 1:
        return float(t[k])
    t0, t1, t2 = t[k - 1], t[k], t[k + 1]
    y0, y1, y2 = y[k - 1], y[k], y[k + 1]
    d1 = (y1 - y0) / (t1 - t0)
    d2 = (y2 - y1) / (t2 - t1)
    curv = (d2 - d1) / (t2 - t0)
    if curv >= 0:
        return float(t1)
    tv = 0.5 * (t0 + t1) - d1 / (2.0 * curv)
    return float(min(max(tv, t0), t2))


def _self_crosses(v, cur, guard=0.02):
    """Whether two monotone-in-v legs of a polyline cross away from their ends."""
    dv = np.diff(v)
    sgn = np.sign(dv)
    # split into legs of constant sweep direction
    legs, s = [], 0
    for k in range(1, len(sgn)):
        if sgn[k] != sgn[k - 1] and sgn[k] != 0:
            legs.append((s, k))
            s = k
    legs.append((s, len(v) - 1))
    legs = [(a, b) for a, b in legs if b - a >= 2]
    scale = np.max(np.abs(cur)) if len(cur) else 0.0
    if scale == 0:
        return False
    for p in range(len(legs)):
        for q in range(p + 1, len(legs)):
            a0, a1 = legs[p]
            b0, b1 = legs[q]
            va, ia = v[a0:a1 + 1], cur[a0:a1 + 1]
            vb, ib = v[b0:b1 + 1], cur[b0:b1 + 1]
            lo = max(va.min(), vb.min())
            hi = min(va.max(), vb.max())
            if hi <= lo:
                continue
            span = hi - lo
            # stay clear of the turning points where adjacent legs meet
            grid = np.linspace(lo + guard * span, hi - guard * span, 400)
            fa = np.interp(grid, *_ascending(va, ia))
            fb = np.interp(grid, *_ascending(vb, ib))
            d = fa - fb
            big = np.abs(d) > 1e-6 * scale
            if big.any():
                signs = np.sign(d[big])
                if signs.min() < 0 < signs.max():
                    return True
    return False


def _ascending(v, y):
    order = np.argsort(v, kind="stable")
    return v[order], y[order]


def _peak_lags(trace, min_voltage):
    period = float(trace.metadata.get("period") or 0.0)
    t, v, cur = trace.t, trace.v_applied, trace.i
    if period > 0:
        m = t <= period * (1 + 1e-12)
        t, v, cur = t[m], v[m], cur[m]
    out = {}
    for name, sgn in (("positive", 1.0), ("negative", -1.0)):
        m = sgn * v >= min_voltage
        if not m.any():
            continue
        g = cur[m] / v[m]
        tb, vb = t[m], v[m]
        t_peak = _refine_peak(tb, g, int(np.argmax(g)))
        out[name] = float(t_peak - tb[int(np.argmax(sgn * vb))])
    return out


def _set_onsets(trace, rel):
    """|V| at which the device that SETs in each branch first leaves its state."""
    out = {}
    try:
        traits = [device_traits(trace, k) for k in range(trace.n_devices)]
    except ValueError:
        return out
    t, v = trace.t, trace.v_applied
    for name, pol in (("positive", 1.0), ("negative", -1.0)):
        m = np.nonzero(pol * v > 0)[0]
        if len(m) == 0:
            continue
        # first contiguous block of this polarity
        end = m[0]
        while end + 1 < len(v) and pol * v[end + 1] > 0:
            end += 1
        block = np.arange(m[0], end + 1)
        for k, tr in enumerate(traits):
            if tr.orientation * pol * tr.set_polarity <= 0:
                continue
            x = trace.x[block, k]
            x_ref = trace.x[max(m[0] - 1, 0), k]
            eps = rel * (tr.hi - tr.lo)
            d = tr.lrs_direction * (x - x_ref)
            moved = np.nonzero(d > eps)[0]
            if len(moved):
                j = moved[0]
                vj = abs(v[block[j]])
                if j > 0:
                    # interpolate the |V| at which the displacement reaches eps
                    w = (eps - d[j - 1]) / (d[j] - d[j - 1])
                    vj = abs(v[block[j - 1]]) + w * (vj - abs(v[block[j - 1]]))
                out[name] = float(vj)
    return out


# ---------------------------------------------------------------------------
# report


@dataclass
class CriteriaReport:
    """Summary of the evaluation criteria for one model.

    ``switching`` and ``crs`` are keyed by sweep rate (V/s); ``snapback``
    holds :func:`snapback_depth` per rate for single-device sweeps.
    """

    model: str
    switching: dict = field(default_factory=dict)
    symmetry_error: float | None = None
    snapback: dict = field(default_factory=dict)
    kinetics: KineticsClass | None = None
    kinetics_curve: KineticsCurve | None = None
    crs: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "switching": {str(k): {"v_set": a, "v_reset": b}
                          for k, (a, b) in self.switching.items()},
            "symmetry_error": self.symmetry_error,
            "snapback": {str(k): v for k, v in self.snapback.items()},
            "kinetics": self.kinetics.to_dict() if self.kinetics else None,
            "kinetics_curve": self.kinetics_curve.to_dict() if self.kinetics_curve else None,
            "crs": {str(k): c.to_dict() for k, c in self.crs.items()},
        }

    def to_table(self) -> str:
        lines = [f"model: {self.model}"]
        for rate, (vs, vr) in self.switching.items():
            lines.append(f"  rate {rate:>8g} V/s   v_set {_fmt(vs):>10}   v_reset {_fmt(vr):>10}")
        for rate, depth in self.snapback.items():
            lines.append(f"  rate {rate:>8g} V/s   snapback depth {depth:.4f}")
        if self.symmetry_error is not None:
            lines.append(f"  loop symmetry error   {self.symmetry_error:.3e}")
        if self.kinetics_curve is not None:
            for vp, ts in self.kinetics_curve.points:
                lines.append(f"  V_p {vp:>8g} V   t_SET {_fmt(ts, 'no crossing'):>14}")
        if self.kinetics is not None:
            k = self.kinetics
            lines.append(f"  kinetics: {k.kind}  exponent {k.exponent:.4f}  "
                         f"semilog slope {k.semilog_slope:.4f} 1/V  "
                         f"decades/doubling {_fmt(k.decades_per_doubling)}")
        for rate, c in self.crs.items():
            win = "none" if c.on_window is None else \
                f"[{c.on_window[0]:.4g}, {c.on_window[1]:.4g}] V"
            lines.append(f"  rate {rate:>8g} V/s   R_total min {c.r_total_min:.4g} ohm  "
                         f"max {c.r_total_max:.4g} ohm")
            lines.append(f"      ON window {win}  self-crossing {c.self_crossing}")
            if c.set_onset:
                onset = ", ".join(f"{k} {v:.4g} V" for k, v in c.set_onset.items())
                lines.append(f"      SET onset {onset}")
        return "\n".join(lines)


def _fmt(x, none="-"):
    return none if x is None else f"{x:.6g}"
