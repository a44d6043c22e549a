"""Tunnel-gap TiO2 memristor: Simmons barrier current and double-exponential gap dynamics.

The state is the tunnel gap width ``w`` in metres. Positive current opens the
gap (RESET), negative current closes it (SET).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants as _c

from .errors import ConvergenceError, NonPhysicalError
from .rootfind import solve_scalar

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "PickettParams",
    "BarrierGeometry",
    "barrier_geometry",
    "tunnel_current",
    "tunnel_current_slope",
    "junction_current",
    "state_rate",
    "solve_device_current",
]

# exp() underflows to exactly 0 below this exponent in double precision
_EXP_FLOOR = -745.0
# cap on the rate exponent; anything larger is numerically "instantaneous"
_EXP_CEIL = 700.0


@dataclass(frozen=True)
class PhysicalConstants:
    e: float = _c.e
    m: float = _c.m_e
    h: float = _c.h
    eps0: float = _c.epsilon_0

    @property
    def J0(self) -> float:
        """e / (2 pi h)."""
        return self.e / (2.0 * math.pi * self.h)


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class PickettParams:
    """Device parameters (SI units except ``phi0`` in eV).

    ``phi_divisor`` scales the bias term of the barrier height as
    ``e|Vg| (w1 + w2) / (phi_divisor * w)``. The default 1 keeps the form used
    throughout this package; Simmons' original image-force expression has 2.
    """

    phi0: float = 0.95
    A_area: float = 1e-14
    R_s: float = 215.0
    f_off: float = 3.5e-6
    f_on: float = 40e-6
    i_off: float = 115e-6
    i_on: float = 8.9e-6
    a_off: float = 1.2e-9
    a_on: float = 1.8e-9
    w_c: float = 107e-12
    b: float = 500e-6
    w0: float = 1.8e-9
    w_min: float = 0.8e-9
    w_max: float = 2.0e-9
    kappa: float = 5.0
    phi_divisor: float = 1.0

    def __post_init__(self):
        for name in ("phi0", "A_area", "f_off", "f_on", "i_off", "i_on",
                     "a_off", "a_on", "w_c", "b", "kappa", "phi_divisor"):
            if not getattr(self, name) > 0:
                raise ValueError(f"Pickett parameter {name} must be positive")
        if self.R_s < 0:
            raise ValueError("R_s must be >= 0")
        if not 0 < self.w_min < self.w_max:
            raise ValueError("need 0 < w_min < w_max")
        if not self.w_min <= self.w0 <= self.w_max:
            raise ValueError("initial gap w0 must lie in [w_min, w_max]")


@dataclass(frozen=True)
class BarrierGeometry:
    """Barrier quantities; lengths in metres, energies in eV, B in 1/sqrt(eV)."""

    w1: float
    w2: float
    dw: float
    lam: float
    phi_I: float
    B: float


def barrier_geometry(params: PickettParams, w: float, v_g: float,
                     k: PhysicalConstants = CONSTANTS) -> BarrierGeometry:
    """Image-force-lowered barrier for gap ``w`` at junction voltage ``v_g``.

    Raises ``NonPhysicalError`` when the expressions leave their domain
    (vanishing denominator, w2 <= w1, w2 >= w, or phi_I <= 0). ``v_g`` enters
    through its magnitude only.
    """
    if not w > 0:
        raise NonPhysicalError(f"gap width must be positive, got {w}", "w", w)
    av = abs(v_g)
    phi0 = params.phi0
    # e^2 ln2 / (8 pi kappa eps0 w), converted from J to eV by one factor of e
    lam = k.e * math.log(2.0) / (8.0 * math.pi * params.kappa * k.eps0 * w)
    w1 = 1.2 * lam * w / phi0
    den = 3.0 * phi0 + 4.0 * lam - 2.0 * av
    if not den > 0:
        raise NonPhysicalError(f"w2 denominator {den:.4g} eV is not positive", "w2_denominator", den)
    w2 = w1 + w * (1.0 - 9.2 * lam / den)
    dw = w2 - w1
    if not dw > 0:
        raise NonPhysicalError(f"barrier width w2 - w1 = {dw:.4g} m is not positive", "dw", dw)
    if not w2 < w:
        raise NonPhysicalError(f"w2 = {w2:.4g} m exceeds the gap {w:.4g} m", "w2", w2)
    arg = w2 * (w - w1) / (w1 * (w - w2))
    phi_I = (phi0 - av * (w1 + w2) / (params.phi_divisor * w)
             - (1.15 * lam * w / dw) * math.log(arg))
    if not phi_I > 0:
        raise NonPhysicalError(f"barrier height phi_I = {phi_I:.4g} eV is not positive",
                               "phi_I", phi_I)
    B = 4.0 * math.pi * dw * math.sqrt(2.0 * k.m * k.e) / k.h
    return BarrierGeometry(w1=w1, w2=w2, dw=dw, lam=lam, phi_I=phi_I, B=B)


def tunnel_current(params: PickettParams, w: float, v_g: float,
                   k: PhysicalConstants = CONSTANTS) -> float:
    """Signed tunnel current through the gap, in amperes.

    The barrier expression depends on |v_g| only and yields a magnitude; the
    sign follows v_g. A negative magnitude (far beyond the current maximum)
    raises ``NonPhysicalError``.
    """
    if v_g == 0:
        return 0.0
    mag = _magnitude(params, w, abs(v_g), k, False)[0]
    return mag if v_g > 0 else -mag


def tunnel_current_slope(params: PickettParams, w: float, v_g: float,
                         k: PhysicalConstants = CONSTANTS) -> tuple[float, float]:
    """Tunnel current and its analytic derivative d i / d v_g."""
    if v_g == 0:
        # the magnitude is odd-symmetric through the origin; take the slope from the right
        return 0.0, _magnitude(params, w, 0.0, k, True)[1]
    mag, dmag = _magnitude(params, w, abs(v_g), k, True)
    return (mag if v_g > 0 else -mag), dmag


def _magnitude(params, w, u, k, slope):
    """Current magnitude at bias ``u = |v_g|`` and optionally d/du."""
    g = barrier_geometry(params, w, u, k)
    phi, B, dw = g.phi_I, g.B, g.dw
    c = k.J0 * k.e * params.A_area
    r1, r2 = math.sqrt(phi), math.sqrt(phi + u)
    e1, e2 = math.exp(-B * r1), math.exp(-B * r2)
    T = phi * e1 - (phi + u) * e2
    if T < 0:
        raise NonPhysicalError(f"tunnel current magnitude is negative at |Vg| = {u:.6g} V",
                               "current", T)
    mag = c * T / dw ** 2
    if not slope:
        return mag, math.nan
    den = 3.0 * params.phi0 + 4.0 * g.lam - 2.0 * u
    dw2 = -18.4 * g.lam * w / den ** 2
    L = math.log(g.w2 * (w - g.w1) / (g.w1 * (w - g.w2)))
    dL = dw2 / g.w2 + dw2 / (w - g.w2)
    cl = 1.15 * g.lam * w
    dphi = (-(g.w1 + g.w2) / (params.phi_divisor * w) - u * dw2 / (params.phi_divisor * w)
            - cl * (dL / dw - L * dw2 / dw ** 2))
    dB = B * dw2 / dw
    # d/dpsi and d/dB of psi * exp(-B sqrt(psi))
    gp1, gp2 = e1 * (1.0 - 0.5 * B * r1), e2 * (1.0 - 0.5 * B * r2)
    gb1, gb2 = -phi * r1 * e1, -(phi + u) * r2 * e2
    dT = gp1 * dphi + gb1 * dB - gp2 * (dphi + 1.0) - gb2 * dB
    return mag, c * (dT / dw ** 2 - 2.0 * T * dw2 / dw ** 3)


def junction_current(params: PickettParams, w: float, v_g: float,
                     k: PhysicalConstants = CONSTANTS) -> tuple[float, float]:
    """Tunnel current and slope restricted to the branch connected to zero bias.

    The barrier expression reaches a current maximum before its validity edge
    and falls beyond it. Points past that maximum (non-positive slope) are
    rejected with ``NonPhysicalError`` so that series-resistor equations keep a
    unique root.
    """
    i, di = tunnel_current_slope(params, w, v_g, k)
    if v_g != 0 and not di > 0:
        raise NonPhysicalError(
            f"junction voltage {v_g:.6g} V lies past the current maximum at w = {w:.4g} m",
            "dI/dV", di)
    return i, di


def _log_sinh(a: float) -> float:
    if a < 20.0:
        return math.log(math.sinh(a))
    return a - math.log(2.0) + math.log1p(-math.exp(-2.0 * a))


def state_rate(params: PickettParams, w: float, i: float) -> float:
    """Gap velocity dw/dt in m/s for current ``i``.

    Positive current opens the gap, negative current closes it. The nested
    exponentials are combined in log space; an exponent below the double
    underflow limit gives exactly zero.
    """
    if i == 0:
        return 0.0
    ai = abs(i)
    if i > 0:
        inner = (w - params.a_off) / params.w_c - ai / params.b
        prefactor, scale = params.f_off, params.i_off
    else:
        inner = (params.a_on - w) / params.w_c - ai / params.b
        prefactor, scale = params.f_on, params.i_on
    if inner > 709.0:
        return 0.0
    expo = -math.exp(inner) - w / params.w_c
    if expo < _EXP_FLOOR:
        return 0.0
    total = math.log(prefactor) + _log_sinh(ai / scale) + expo
    if total < _EXP_FLOOR:
        return 0.0
    rate = math.exp(min(total, _EXP_CEIL))
    return rate if i > 0 else -rate


def solve_device_current(params: PickettParams, v_device: float, w: float,
                         tol: float = 1e-12, max_iters: int = 200,
                         method: str = "newton") -> tuple[float, float]:
    """Current and junction voltage for a terminal voltage across junction + R_s.

    Solves v_g + i(w, v_g) R_s = v_device on the bracket between 0 and
    ``v_device``. Returns ``(i, v_g)``.
    """
    if v_device == 0:
        return 0.0, 0.0
    R = params.R_s
    if R == 0:
        return tunnel_current(params, w, v_device), v_device

    def residual(v):
        try:
            i, di = junction_current(params, w, v)
            if method == "newton":
                return v + R * i - v_device, 1.0 + R * di
            return v + R * i - v_device, math.nan
        except NonPhysicalError:
            # past the validity edge the junction is effectively a short
            return math.copysign(math.inf, v), math.nan

    # the residual is increasing with value -v_device at 0 and R i(v_device) at v_device
    v_g = solve_scalar(residual, sorted((0.0, v_device)), tol=tol, max_iters=max_iters,
                       fprime=True, method=method, signs=(-1, 1))
    bound = tol * max(1.0, abs(v_device))
    try:
        for _ in range(4):
            i, di = junction_current(params, w, v_g)
            res = v_g + R * i - v_device
            if abs(res) <= bound:
                return i, v_g
            v_g -= res / (1.0 + R * di)
    except NonPhysicalError as exc:
        raise NonPhysicalError(
            f"junction voltage solution {v_g:.6g} V at w = {w:.4g} m lies outside "
            f"the barrier model's validity: {exc}", exc.quantity, exc.value) from exc
    raise ConvergenceError(f"series-resistance solve residual {res:.3g} V", residual=res)
