"""Generalised hyperbolic-sine memristor models: Laiho, Chang and Yakopcic.

All three are voltage controlled: the current and the state rate are
functions of (x, V) with the state x normalised to [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .windows import WindowSpec, eval_window

__all__ = [
    "LaihoParams",
    "ChangParams",
    "YakopcicParams",
    "SINH_KINDS",
    "sinh_current",
    "sinh_current_slope",
    "sinh_rate",
    "yakopcic_window",
    "yakopcic_drive",
]

SINH_KINDS = ("laiho", "chang", "yakopcic")


def _check_x0(x0):
    if not 0.0 <= x0 <= 1.0:
        raise ValueError(f"x0 must lie in [0, 1], got {x0}")


@dataclass(frozen=True)
class LaihoParams:
    A1: float
    A2: float
    B1: float
    B2: float
    C1: float
    C2: float
    D1: float
    D2: float
    window: WindowSpec = field(default_factory=lambda: WindowSpec("biolek", 1))
    x0: float = 0.0

    def __post_init__(self):
        for name in ("A1", "A2", "B1", "B2", "C1", "C2", "D1", "D2"):
            if not getattr(self, name) > 0:
                raise ValueError(f"Laiho parameter {name} must be positive")
        if self.window.kind != "biolek":
            raise ValueError("the Laiho model uses the Biolek window")
        _check_x0(self.x0)


@dataclass(frozen=True)
class ChangParams:
    """``sign_corrected`` switches the rectifying term to 1 - exp(-beta V)."""

    alpha: float
    beta: float
    gamma: float
    delta: float
    lambda_rate: float
    eta1: float
    eta2: float
    x0: float = 0.0
    sign_corrected: bool = False

    def __post_init__(self):
        _check_x0(self.x0)


@dataclass(frozen=True)
class YakopcicParams:
    a1: float
    a2: float
    b: float
    A_pos: float
    A_neg: float
    V_th_pos: float = 1.2
    V_th_neg: float = 1.2
    x_p: float = 0.3
    x_n: float = 0.5
    alpha_p: float = 1.0
    alpha_n: float = 5.0
    eta: int = 1
    x0: float = 0.0

    def __post_init__(self):
        if self.eta not in (1, -1):
            raise ValueError("eta must be +1 or -1")
        if not (0 < self.x_p < 1 and 0 < self.x_n < 1):
            raise ValueError("x_p and x_n must lie in (0, 1)")
        if self.V_th_pos < 0 or self.V_th_neg < 0:
            raise ValueError("threshold voltages must be >= 0")
        if not (self.A_pos > 0 and self.A_neg > 0):
            raise ValueError("A_pos and A_neg must be positive")
        _check_x0(self.x0)


def _check_state(x):
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"state outside [0, 1]: {x!r}")


def sinh_current_slope(kind: str, params, x: float, v: float) -> tuple[float, float]:
    """Current and d(current)/dV of the port relation."""
    _check_state(x)
    if kind == "laiho":
        A, B = (params.A1, params.B1) if v >= 0 else (params.A2, params.B2)
        return A * x * math.sinh(B * v), A * x * B * math.cosh(B * v)
    if kind == "yakopcic":
        a = params.a1 if v >= 0 else params.a2
        b = params.b
        return a * x * math.sinh(b * v), a * x * b * math.cosh(b * v)
    if kind == "chang":
        beta = -params.beta if params.sign_corrected else params.beta
        e = math.exp(beta * v)
        i = (1.0 - x) * params.alpha * (1.0 - e) + x * params.gamma * math.sinh(params.delta * v)
        di = (-(1.0 - x) * params.alpha * beta * e
              + x * params.gamma * params.delta * math.cosh(params.delta * v))
        return i, di
    raise ValueError(f"unknown sinh model kind {kind!r}")


def sinh_current(kind: str, params, x: float, v: float) -> float:
    """Device current in amperes at state ``x`` and device voltage ``v``."""
    return sinh_current_slope(kind, params, x, v)[0]


def yakopcic_drive(params: YakopcicParams, v: float) -> float:
    """Threshold function g(V) in 1/s; zero between the thresholds."""
    if v > params.V_th_pos:
        return params.A_pos * (math.exp(v) - math.exp(params.V_th_pos))
    if v < -params.V_th_neg:
        return -params.A_neg * (math.exp(-v) - math.exp(params.V_th_neg))
    return 0.0


def yakopcic_window(params: YakopcicParams, x: float, direction: int) -> float:
    """State-motion limiter f(x).

    ``direction`` is the sign of the state motion. Growth is damped above
    ``x_p`` and decay below ``1 - x_n``; everywhere else f = 1.
    """
    _check_state(x)
    if direction >= 0:
        if x >= params.x_p:
            return math.exp(-params.alpha_p * (x - params.x_p)) * (
                (params.x_p - x) / (1.0 - params.x_p) + 1.0)
        return 1.0
    if x <= 1.0 - params.x_n:
        return math.exp(params.alpha_n * (x + params.x_n - 1.0)) * (x / (1.0 - params.x_n))
    return 1.0


def sinh_rate(kind: str, params, x: float, v: float) -> float:
    """State rate dx/dt in 1/s at state ``x`` and device voltage ``v``."""
    _check_state(x)
    if kind == "laiho":
        if v >= 0:
            drive = params.C1 * math.sinh(params.D1 * v)
        else:
            drive = params.C2 * math.sinh(params.D2 * v)
        if drive == 0:
            return 0.0
        return drive * eval_window(params.window, x, 1 if v >= 0 else -1)
    if kind == "chang":
        return params.lambda_rate * params.eta1 * math.sinh(params.eta2 * v)
    if kind == "yakopcic":
        g = yakopcic_drive(params, v)
        if g == 0:
            return 0.0
        direction = 1 if params.eta * g > 0 else -1
        return params.eta * g * yakopcic_window(params, x, direction)
    raise ValueError(f"unknown sinh model kind {kind!r}")
