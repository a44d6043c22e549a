"""Piecewise-linear excitation waveforms (triangular sweeps, pulses)."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Waveform",
    "triangular_sweep",
    "pulse",
    "custom",
    "sample",
]

#: Default rise/fall time of pulse edges, seconds.
DEFAULT_EDGE = 1e-9


@dataclass(frozen=True)
class Waveform:
    """Piecewise-linear voltage signal defined by exact breakpoints.

    Parameters
    ----------
    breakpoints : tuple of (time, voltage)
        Strictly increasing times in seconds, voltages in volts.
    period : float
        Repetition period in seconds; 0 marks a non-periodic waveform.
        Periodic waveforms start at t = 0 and repeat every ``period``.
    label : str
        Free-form identifier carried into trace metadata.
    """

    breakpoints: tuple[tuple[float, float], ...]
    period: float = 0.0
    label: str = ""
    _t: np.ndarray = field(init=False, repr=False, compare=False)
    _v: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bps = tuple((float(t), float(v)) for t, v in self.breakpoints)
        if len(bps) < 2:
            raise ValueError("a waveform needs at least two breakpoints")
        times = [t for t, _ in bps]
        if any(not math.isfinite(t) or not math.isfinite(v) for t, v in bps):
            raise ValueError("breakpoints must be finite")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("breakpoint times must be strictly increasing")
        if self.period < 0:
            raise ValueError("period must be >= 0")
        if self.period > 0:
            if times[0] != 0.0:
                raise ValueError("periodic waveforms must start at t = 0")
            if bps[0][1] != bps[-1][1]:
                raise ValueError("periodic waveform must end at its start voltage")
            n_periods = (times[-1] - times[0]) / self.period
            if abs(n_periods - round(n_periods)) > 1e-9 or round(n_periods) < 1:
                raise ValueError("periodic breakpoints must span whole periods")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "_t", np.array(times))
        object.__setattr__(self, "_v", np.array([v for _, v in bps]))

    @property
    def times(self) -> np.ndarray:
        return self._t.copy()

    @property
    def voltages(self) -> np.ndarray:
        return self._v.copy()

    @property
    def duration(self) -> float:
        """Time of the last breakpoint (whole cycles for periodic sweeps)."""
        return float(self._t[-1])

    @property
    def periodic(self) -> bool:
        return self.period > 0

    def __call__(self, t: float) -> float:
        return sample(self, t)

    def breakpoints_between(self, t0: float, t1: float) -> list[float]:
        """Breakpoint times in the open interval (t0, t1], unrolled for periodic signals."""
        times = self._t
        if not self.periodic:
            return [float(t) for t in times if t0 < t <= t1]
        one = [float(t) for t in times if 0 < t <= self.period * (1 + 1e-12)]
        out = []
        k = math.floor(t0 / self.period)
        while k * self.period <= t1:
            base = k * self.period
            for t in one:
                tt = base + t
                if t0 < tt <= t1 and (not out or tt > out[-1]):
                    out.append(tt)
            k += 1
        return out

    def negated(self) -> "Waveform":
        return Waveform(tuple((t, -v) for t, v in self.breakpoints), self.period,
                        f"-{self.label}" if self.label else "")

    def to_dict(self) -> dict:
        return {"breakpoints": [list(bp) for bp in self.breakpoints],
                "period": self.period, "label": self.label}


def sample(w: Waveform, t: float) -> float:
    """Voltage of ``w`` at time ``t`` by exact linear interpolation.

    Periodic waveforms are evaluated at ``t mod period``. Raises ``ValueError``
    for negative times and for times past the end of a non-periodic waveform.
    """
    t = float(t)
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    times = w._t
    if w.periodic:
        t = math.fmod(t, w.period)
    elif t > times[-1]:
        raise ValueError(f"t = {t} s is past the last breakpoint ({times[-1]} s)")
    k = bisect.bisect_right(times, t) - 1
    if k >= len(times) - 1:
        return float(w._v[-1])
    t0, t1 = times[k], times[k + 1]
    v0, v1 = w._v[k], w._v[k + 1]
    if t == t0:
        return float(v0)
    return float(v0 + (v1 - v0) * (t - t0) / (t1 - t0))


def triangular_sweep(amplitude_pos: float, amplitude_neg: float, rate: float,
                     cycles: int = 1, start: str = "positive") -> Waveform:
    """Triangular voltage sweep with constant slope magnitude ``rate``.

    One cycle runs 0 -> ``amplitude_pos`` -> ``amplitude_neg`` -> 0 for
    ``start="positive"`` and 0 -> ``amplitude_neg`` -> ``amplitude_pos`` -> 0
    for ``start="negative"``.

    Examples
    --------
    >>> triangular_sweep(1.0, -1.0, 10.0).breakpoints
    ((0.0, 0.0), (0.1, 1.0), (0.3, -1.0), (0.4, 0.0))
    """
    if not rate > 0:
        raise ValueError(f"sweep rate must be positive, got {rate}")
    if not amplitude_pos > 0:
        raise ValueError(f"positive amplitude must be > 0, got {amplitude_pos}")
    if not amplitude_neg < 0:
        raise ValueError(f"negative amplitude must be < 0, got {amplitude_neg}")
    if int(cycles) != cycles or cycles < 1:
        raise ValueError(f"cycles must be a positive integer, got {cycles}")
    if start not in ("positive", "negative"):
        raise ValueError(f"start must be 'positive' or 'negative', got {start!r}")

    first, second = ((amplitude_pos, amplitude_neg) if start == "positive"
                     else (amplitude_neg, amplitude_pos))
    legs = [abs(first), abs(first - second), abs(second)]
    levels = [first, second, 0.0]
    period = sum(legs) / rate
    bps = [(0.0, 0.0)]
    for c in range(int(cycles)):
        t = c * period
        acc = 0.0
        for leg, level in zip(legs, levels):
            acc += leg
            bps.append((t + acc / rate, level))
    label = f"tri({amplitude_pos:g},{amplitude_neg:g},{rate:g}V/s,{start})"
    return Waveform(tuple(bps), period=period, label=label)


def pulse(height: float, duration: float, rise: float = DEFAULT_EDGE,
          fall: float | None = None, delay: float = 0.0) -> Waveform:
    """Rectangular pulse with linear edges.

    The flat top lasts ``duration`` seconds. With ``fall=None`` the pulse ends
    at the top level (a held step), which is what switching-time measurements use.
    """
    if not rise > 0:
        raise ValueError("rise time must be > 0 (ideal steps are not representable)")
    if not duration > 0:
        raise ValueError("pulse duration must be > 0")
    if height == 0:
        raise ValueError("pulse height must be nonzero")
    if delay < 0:
        raise ValueError("delay must be >= 0")
    bps = [(0.0, 0.0)]
    if delay > 0:
        bps.append((delay, 0.0))
    bps.append((delay + rise, height))
    bps.append((delay + rise + duration, height))
    if fall is not None:
        if not fall > 0:
            raise ValueError("fall time must be > 0")
        bps.append((delay + rise + duration + fall, 0.0))
    return Waveform(tuple(bps), period=0.0, label=f"pulse({height:g}V,{duration:g}s)")


def custom(breakpoints, period: float = 0.0, label: str = "custom") -> Waveform:
    """Waveform from an explicit breakpoint list."""
    return Waveform(tuple(tuple(bp) for bp in breakpoints), period=period, label=label)
