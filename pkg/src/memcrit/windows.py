"""State-bounding window functions f(x, sign(I)) for the linear drift model."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["WINDOW_KINDS", "WindowSpec", "eval_window", "step"]

WINDOW_KINDS = ("benderli", "joglekar", "biolek", "shin")


def step(u: float) -> float:
    """Heaviside step with step(0) = 0."""
    return 1.0 if u > 0 else 0.0


@dataclass(frozen=True)
class WindowSpec:
    """Window selection.

    ``p`` is the exponent of the Joglekar and Biolek windows. ``literal`` only
    affects Shin's window: when set, the RESET branch is the printed
    ``step(x - 1)``, which is zero everywhere below x = 1 and freezes RESET.
    The default uses ``step(x)``, bounding the state at 0 instead.
    """

    kind: str
    p: int = 1
    literal: bool = False

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind not in WINDOW_KINDS:
            raise ValueError(f"unknown window kind {self.kind!r}; expected one of {WINDOW_KINDS}")
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"window exponent p must be an integer >= 1, got {self.p}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "p", int(self.p))

    def __call__(self, x: float, current_sign: float = 1) -> float:
        return eval_window(self, x, current_sign)


def eval_window(spec: WindowSpec, x: float, current_sign: float = 1) -> float:
    """Evaluate the window at state ``x`` in [0, 1].

    ``current_sign`` is the sign of the device current; zero counts as
    positive. Only Biolek and Shin depend on it.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"window evaluated outside [0, 1]: x = {x!r}")
    kind = spec.kind
    if kind == "benderli":
        return x * (1.0 - x)
    if kind == "joglekar":
        # 1 - (2x-1)^(2p) factored as (1 - y^2) * sum(y^(2k)) to avoid cancellation
        return 4.0 * x * (1.0 - x) * _geometric((2.0 * x - 1.0) ** 2, spec.p)
    positive = current_sign >= 0
    if kind == "biolek":
        if positive:
            return (1.0 - x) * (1.0 + x) * _geometric(x * x, spec.p)
        return x * (2.0 - x) * _geometric((1.0 - x) ** 2, spec.p)
    # shin
    if positive:
        return step(1.0 - x)
    return step(x - 1.0) if spec.literal else step(x)


def _geometric(r: float, n: int) -> float:
    """1 + r + ... + r^(n-1)."""
    total, term = 0.0, 1.0
    for _ in range(n):
        total += term
        term *= r
    return total
