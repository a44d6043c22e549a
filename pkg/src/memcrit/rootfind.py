"""Bracketed scalar root finding (safeguarded Newton with bisection fallback)."""

from __future__ import annotations

import math
from typing import Callable

from .errors import BracketError, ConvergenceError

__all__ = ["solve_scalar"]


def _sign(r: float) -> int:
    return (r > 0) - (r < 0)


def solve_scalar(residual: Callable, bracket: tuple[float, float], tol: float = 1e-12,
                 max_iters: int = 200, fprime: bool = False, guess: float | None = None,
                 method: str = "newton", signs: tuple[int, int] | None = None) -> float:
    """Find a root of ``residual`` inside ``bracket``.

    Parameters
    ----------
    residual : callable
        ``residual(x)`` returns the residual, or ``(residual, derivative)``
        when ``fprime`` is true. Infinite residuals are allowed and only their
        sign is used.
    bracket : (lo, hi)
        Interval whose endpoints have residuals of opposite sign (or zero).
    tol : float
        Relative tolerance on the root: iteration stops once the step or the
        bracket width drops below ``tol * max(1, |x|)``.
    max_iters : int
        Iteration cap; exceeding it raises ``ConvergenceError``.
    fprime : bool
        Whether ``residual`` also returns the derivative. Without it, Newton
        steps are replaced by secant steps on the bracket.
    guess : float, optional
        Starting point; used if it lies strictly inside the bracket.
    method : {"newton", "bisect"}
        ``"bisect"`` disables the Newton/secant acceleration entirely.
    signs : (int, int), optional
        Residual signs at ``(lo, hi)`` when the caller knows them; the two
        endpoint evaluations are then skipped.

    Returns
    -------
    float
        The root.
    """
    if method not in ("newton", "bisect"):
        raise ValueError(f"unknown method {method!r}")
    lo, hi = float(bracket[0]), float(bracket[1])
    if lo > hi:
        lo, hi = hi, lo

    def ev(x):
        out = residual(x)
        if fprime:
            return float(out[0]), float(out[1])
        return float(out), math.nan

    if lo == hi:
        r, _ = ev(lo)
        if r == 0:
            return lo
        raise BracketError(f"degenerate bracket [{lo}, {hi}] with residual {r}")

    if signs is not None:
        if sorted(signs) != [-1, 1]:
            raise BracketError(f"declared endpoint signs {signs} do not bracket a root")
        # only the signs matter to the bracketing logic
        r_lo, r_hi = signs[0] * math.inf, signs[1] * math.inf
    else:
        r_lo, _ = ev(lo)
        if r_lo == 0:
            return lo
        r_hi, _ = ev(hi)
        if r_hi == 0:
            return hi
    if math.isnan(r_lo) or math.isnan(r_hi):
        raise BracketError("residual is NaN at a bracket endpoint")
    if _sign(r_lo) == _sign(r_hi):
        raise BracketError(
            f"residual has the same sign at both ends of [{lo}, {hi}]: {r_lo}, {r_hi}")
    # orient so that residual(a) < 0 < residual(b)
    if r_lo < 0:
        a, b, ra, rb = lo, hi, r_lo, r_hi
    else:
        a, b, ra, rb = hi, lo, r_hi, r_lo

    if guess is not None and min(a, b) < guess < max(a, b):
        x = float(guess)
    else:
        x = 0.5 * (a + b)
    dx_old = abs(b - a)
    dx = dx_old
    r = math.nan
    for _ in range(max_iters):
        r, dr = ev(x)
        if r == 0:
            return x
        if math.isnan(r):
            raise ConvergenceError(f"residual is NaN at x = {x}")
        if r < 0:
            a, ra = x, r
        else:
            b, rb = x, r
        width = abs(b - a)
        scale = max(1.0, abs(x))
        if width <= tol * scale:
            return x
        x_new = math.nan
        if method == "newton" and math.isfinite(r):
            if not fprime:
                if math.isfinite(ra) and math.isfinite(rb) and rb != ra:
                    dr = (rb - ra) / (b - a)
            if math.isfinite(dr) and dr != 0:
                x_new = x - r / dr
                lo_, hi_ = min(a, b), max(a, b)
                # reject steps leaving the bracket or shrinking too slowly
                if not (lo_ < x_new < hi_) or abs(2.0 * (x_new - x)) > dx_old:
                    x_new = math.nan
        if math.isnan(x_new):
            x_new = 0.5 * (a + b)
        dx_old, dx = dx, abs(x_new - x)
        x = x_new
        if dx <= tol * scale:
            r_final, _ = ev(x)
            if r_final == 0 or math.isfinite(r_final):
                return x
    raise ConvergenceError(
        f"no convergence after {max_iters} iterations; last x = {x}, residual = {r}", residual=r)
