"""Single-device and anti-serial (CRS) circuits and their per-step algebraic solve.

Voltages returned by the solve are branch-frame drops: for every circuit
``sum(v_drop) + i * r_series_external == v_applied``. A device mounted with
orientation ``s`` sees ``v_dev = s * v_drop`` and ``i_dev = s * i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .devices import ModelInstance
from .errors import BracketError, NonPhysicalError
from .rootfind import solve_scalar

__all__ = [
    "OperatingPoint",
    "CircuitSystem",
    "single_device_system",
    "crs_system",
    "partition_voltage",
    "ZERO_CURRENT_FLOOR",
]

#: Below this attainable current (A) a CRS pair is treated as non-conducting.
ZERO_CURRENT_FLOOR = 1e-15


@dataclass(frozen=True)
class OperatingPoint:
    i: float
    v_drop: tuple[float, ...]
    v_core: tuple[float, ...]
    degenerate: bool = False


def _branch_current(dev: ModelInstance, s: int, x: float, c: float) -> tuple[float, float]:
    """Branch-frame current through the junction of ``dev`` at core drop ``c``."""
    try:
        i, di = dev.current(x, s * c)
    except NonPhysicalError:
        # beyond the validity edge the current is unbounded in the drive direction
        return math.copysign(math.inf, c), math.nan
    return s * i, di


@dataclass(frozen=True)
class CircuitSystem:
    """One device with optional series resistor, or two devices anti-serially."""

    devices: tuple[ModelInstance, ...]
    orientations: tuple[int, ...]
    r_series_external: float = 0.0
    topology: str = "single"

    def __post_init__(self):
        if self.topology not in ("single", "crs"):
            raise ValueError(f"unknown topology {self.topology!r}")
        if len(self.devices) != len(self.orientations):
            raise ValueError("one orientation per device is required")
        if any(s not in (1, -1) for s in self.orientations):
            raise ValueError("orientations must be +1 or -1")
        if self.topology == "single" and len(self.devices) != 1:
            raise ValueError("a single-device system holds exactly one device")
        if self.topology == "crs":
            if len(self.devices) != 2:
                raise ValueError("an anti-serial system holds exactly two devices")
            if self.orientations[0] == self.orientations[1]:
                raise ValueError("anti-serial devices need opposite orientations")
        if self.r_series_external < 0:
            raise ValueError("series resistance must be >= 0")

    @property
    def n_devices(self) -> int:
        return len(self.devices)

    def initial_state(self) -> list[float]:
        return [d.x0 for d in self.devices]

    @property
    def bounds(self) -> list[tuple[float, float]]:
        return [d.bounds for d in self.devices]

    @property
    def scales(self) -> list[float]:
        return [d.scale for d in self.devices]

    @property
    def r_total(self) -> float:
        return self.r_series_external + sum(d.r_internal for d in self.devices)

    def operating_point(self, states, v_applied: float, tol: float = 1e-12,
                        max_iters: int = 200, guess: float | None = None,
                        method: str = "newton") -> OperatingPoint:
        """Solve the algebraic constraint for the given device states."""
        if len(states) != self.n_devices:
            raise ValueError("one state per device is required")
        if self.n_devices == 1:
            return self._solve_single(states[0], v_applied, tol, max_iters, guess, method)
        return self._solve_pair(states, v_applied, tol, max_iters, guess, method)

    def _solve_single(self, x, v, tol, max_iters, guess, method):
        dev, s = self.devices[0], self.orientations[0]
        r_int = dev.r_internal
        R = self.r_series_external + r_int
        if dev.current_controlled:
            i = v / (dev.resistance(x) + R)
            c = v - i * R
        elif R == 0 or v == 0:
            c = v
            i = _branch_current(dev, s, x, c)[0]
            if not math.isfinite(i):
                raise NonPhysicalError(f"device driven outside its validity at {v} V")
        else:
            def residual(c):
                i, di = _branch_current(dev, s, x, c)
                if not math.isfinite(i):
                    return i, math.nan
                return c + R * i - v, 1.0 + R * di

            # for a passive device residual(0) = -v and residual(v) = R i(v)
            c = solve_scalar(residual, sorted((0.0, v)), tol=tol, max_iters=max_iters,
                             fprime=True, guess=guess, method=method,
                             signs=(-1, 1) if dev.passive else None)
            c = _polish(residual, c, tol * max(1.0, abs(v)))
            i = _branch_current(dev, s, x, c)[0]
            if not math.isfinite(i):
                raise NonPhysicalError(f"no operating point inside the validity region at {v} V")
        return OperatingPoint(i=i, v_drop=(c + i * r_int,), v_core=(c,))

    def _solve_pair(self, states, v, tol, max_iters, guess, method):
        (da, db), (sa, sb) = self.devices, self.orientations
        xa, xb = states
        r_ext = self.r_series_external
        if da.current_controlled and db.current_controlled:
            ra, rb = da.resistance(xa), db.resistance(xb)
            i = v / (ra + rb + r_ext)
            return OperatingPoint(i=i, v_drop=(i * ra, i * rb), v_core=(i * ra, i * rb))
        R = self.r_total
        if v == 0:
            return OperatingPoint(i=0.0, v_drop=(0.0, 0.0), v_core=(0.0, 0.0))

        ia_max = abs(_branch_current(da, sa, xa, v)[0])
        ib_max = abs(_branch_current(db, sb, xb, v)[0])
        if min(ia_max, ib_max) < ZERO_CURRENT_FLOOR:
            # non-conducting pair: the blocking device takes the voltage,
            # or both share it equally when both block
            if ia_max < ZERO_CURRENT_FLOOR and ib_max < ZERO_CURRENT_FLOOR:
                ca = 0.5 * v
            elif ia_max < ib_max:
                ca = v
            else:
                ca = 0.0
            return OperatingPoint(i=0.0, v_drop=(ca, v - ca), v_core=(ca, v - ca), degenerate=True)

        def residual(ca):
            ia, dia = _branch_current(da, sa, xa, ca)
            if not math.isfinite(ia):
                return ia, math.nan
            cb = v - ca - ia * R
            ib, dib = _branch_current(db, sb, xb, cb)
            if not math.isfinite(ib):
                return -ib, math.nan
            return ia - ib, dia + dib * (1.0 + dia * R)

        # for passive devices residual(0) = -i_B(v) and residual(v) = i_A(v) - i_B(-i_A R)
        # carry the signs of -v and +v
        passive = da.passive and db.passive
        bracket = sorted((0.0, v)) if passive else _outward_bracket(residual, v)
        ca = solve_scalar(residual, bracket, tol=tol, max_iters=max_iters,
                          fprime=True, guess=guess, method=method,
                          signs=(-1, 1) if passive else None)
        i = _branch_current(da, sa, xa, ca)[0]
        if not math.isfinite(i):
            raise NonPhysicalError(f"no operating point inside the validity region at {v} V")
        cb = v - ca - i * R
        if not math.isfinite(_branch_current(db, sb, xb, cb)[0]):
            raise NonPhysicalError(f"no operating point inside the validity region at {v} V")
        return OperatingPoint(
            i=i,
            v_drop=(ca + i * da.r_internal, cb + i * db.r_internal),
            v_core=(ca, cb))

    def rates(self, states, op: OperatingPoint) -> list[float]:
        """Device-frame state rates at an operating point."""
        out = []
        for dev, s, x, c in zip(self.devices, self.orientations, states, op.v_core):
            out.append(dev.rate(x, s * c, s * op.i))
        return out

    def port_residuals(self, states, op: OperatingPoint) -> list[float]:
        """Per-device |i_model(x, v) - i| using the stored terminal voltages."""
        out = []
        for dev, s, x, c in zip(self.devices, self.orientations, states, op.v_core):
            i_model = s * dev.current(x, s * c)[0]
            out.append(abs(i_model - op.i))
        return out

    def describe(self) -> dict:
        return {
            "topology": self.topology,
            "r_series_external": self.r_series_external,
            "orientations": list(self.orientations),
            "devices": [d.describe() for d in self.devices],
        }


def _polish(residual, c, bound, steps=4):
    """Newton steps on a converged root until the residual itself is below ``bound``.

    The root finder stops on the step size; with a large series resistance the
    loop residual is that step times 1 + R di/dv.
    """
    for _ in range(steps):
        r, dr = residual(c)
        if not math.isfinite(r) or abs(r) <= bound or not dr > 0:
            break
        c -= r / dr
    return c


def _outward_bracket(residual, v, max_doublings=12):
    """Sign-changing bracket for a pair with an active (non-passive) device.

    Starts from [0, v] and doubles the search distance beyond either end;
    the junction voltage of an active device may exceed the applied voltage.
    """
    def value(c):
        r = residual(c)[0]
        return r if math.isfinite(r) else math.nan

    lo, hi = sorted((0.0, v))
    r_lo, r_hi = value(lo), value(hi)
    if r_lo == 0 or r_hi == 0 or r_lo * r_hi < 0:
        return [lo, hi]
    d = max(abs(v), 1e-3)
    for _ in range(max_doublings):
        for a, b in ((hi, hi + d), (lo - d, lo)):
            ra, rb = value(a), value(b)
            if ra * rb <= 0:
                return [a, b]
        lo, hi = lo - d, hi + d
        d *= 2.0
    raise BracketError(f"no operating point found within {d:.3g} V of the applied {v} V")


def single_device_system(model: ModelInstance, r_series: float = 0.0) -> CircuitSystem:
    """Device in series with an external resistor ``r_series`` (ohms)."""
    return CircuitSystem((model,), (1,), float(r_series), "single")


def crs_system(model_a: ModelInstance, model_b: ModelInstance, x0a: float | None = None,
               x0b: float | None = None, r_series: float = 0.0) -> CircuitSystem:
    """Anti-serial pair; device B is mounted reversed.

    Initial states are given in each device's own frame (x near 1 is the low
    resistive state for both).
    """
    if model_a.model_id != model_b.model_id:
        raise ValueError(
            f"mixed-model pairs are not supported: {model_a.model_id} / {model_b.model_id}")
    if x0a is not None:
        model_a = model_a.with_state(x0a)
    if x0b is not None:
        model_b = model_b.with_state(x0b)
    return CircuitSystem((model_a, model_b), (1, -1), float(r_series), "crs")


def partition_voltage(system: CircuitSystem, states, v_applied: float,
                      tol: float = 1e-12) -> tuple[float, float, float]:
    """Voltage split ``(v_a, v_b, i)`` of an anti-serial pair (branch frame)."""
    if system.n_devices != 2:
        raise ValueError("partition_voltage needs a two-device system")
    op = system.operating_point(states, v_applied, tol=tol)
    return op.v_drop[0], op.v_drop[1], op.i
