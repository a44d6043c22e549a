"""Linear drift memristor with a pluggable window, and its switching-time quadrature."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from .errors import ConvergenceError
from .windows import WindowSpec, eval_window

__all__ = ["LinearParams", "resistance", "state_rate", "analytic_set_time", "set_constant"]


@dataclass(frozen=True)
class LinearParams:
    """Parameters of the linear drift model.

    K1 in 1/(A s), resistances in ohms, D (switching layer thickness) in metres.
    The state x is already normalised by D, so D is informative only.
    """

    K1: float = 1e4
    R_LRS: float = 100.0
    R_HRS: float = 16e3
    D: float = 10e-9
    x0: float = 0.0

    def __post_init__(self):
        if not self.K1 > 0:
            raise ValueError("K1 must be positive")
        if not self.R_HRS > self.R_LRS > 0:
            raise ValueError("need R_HRS > R_LRS > 0")
        if not 0.0 <= self.x0 <= 1.0:
            raise ValueError("x0 must lie in [0, 1]")


def resistance(params: LinearParams, x: float) -> float:
    """R(x) = (R_LRS - R_HRS) x + R_HRS: R_HRS at x = 0, R_LRS at x = 1."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"state outside [0, 1]: {x!r}")
    return (params.R_LRS - params.R_HRS) * x + params.R_HRS


def state_rate(params: LinearParams, spec: WindowSpec, x: float, i: float) -> float:
    """dx/dt = K1 * i * f(x, sign(i)), in 1/s."""
    if i == 0:
        return 0.0
    return params.K1 * i * eval_window(spec, x, 1 if i > 0 else -1)


def set_constant(params: LinearParams, spec: WindowSpec, x_start: float, x_end: float,
                 rel_tol: float = 1e-10) -> float:
    """Volt-seconds needed to drive the state from ``x_start`` to ``x_end``.

    Integral of R(x) / (K1 f(x)) over [x_start, x_end] under positive drive,
    evaluated by adaptive quadrature. For x_start > 0 the integral is taken in
    log(x) so windows vanishing like x near zero stay well resolved.
    """
    if not 0.0 <= x_start < x_end <= 1.0:
        raise ValueError("need 0 <= x_start < x_end <= 1")

    def integrand(x):
        f = eval_window(spec, x, 1)
        if f <= 0.0:
            return math.inf
        return resistance(params, x) / (params.K1 * f)

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            if x_start > 0.0:
                value, err = integrate.quad(
                    lambda u: integrand(math.exp(u)) * math.exp(u),
                    math.log(x_start), math.log(x_end),
                    epsabs=0.0, epsrel=rel_tol, limit=500)
            else:
                value, err = integrate.quad(integrand, x_start, x_end,
                                            epsabs=0.0, epsrel=rel_tol, limit=500)
        except (integrate.IntegrationWarning, ZeroDivisionError) as exc:
            raise ConvergenceError(f"switching-time integral does not converge: {exc}") from exc
    if not math.isfinite(value) or not math.isfinite(err) or err > 1e3 * rel_tol * abs(value):
        raise ConvergenceError(
            f"switching-time integral does not converge (value {value}, error {err})")
    return value


def analytic_set_time(params: LinearParams, spec: WindowSpec, v_p: float,
                      x_start: float, x_end: float = 0.5, rel_tol: float = 1e-10) -> float:
    """SET time under a constant device voltage ``v_p``, from quadrature.

    The result is ``set_constant(...) / v_p``; it serves as the independent
    reference for simulated switching times.
    """
    if not v_p > 0:
        raise ValueError("pulse height must be positive")
    return set_constant(params, spec, x_start, x_end, rel_tol) / v_p
