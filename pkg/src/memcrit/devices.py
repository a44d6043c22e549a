"""Uniform device interface over the eight models, and the model registry."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from . import defaults, linear, pickett, sinh
from .windows import WindowSpec

__all__ = [
    "MODEL_IDS",
    "ModelInstance",
    "LinearDevice",
    "PickettDevice",
    "SinhDevice",
    "make_model",
]

MODEL_IDS = (
    "linear-benderli",
    "linear-joglekar",
    "linear-biolek",
    "linear-shin",
    "pickett",
    "laiho",
    "chang",
    "yakopcic",
)


@dataclass(frozen=True)
class ModelInstance:
    """A device model: parameter set, state bounds, port relation and rate law.

    Subclasses implement ``current`` (port relation at the internal junction,
    returning the current and its voltage derivative) and ``rate``. The
    running state is owned by the integrator, not by the instance; ``x0`` is
    the initial state.

    Attributes common to all models:

    - ``r_internal``: series resistance inside the device terminals (ohms).
    - ``lrs_direction``: sign of the state change during SET.
    - ``set_polarity``: sign of the device voltage that causes SET.
    - ``passive``: whether the current always has the sign of the voltage.
    """

    model_id: str
    params: object

    r_internal = 0.0
    lrs_direction = 1
    set_polarity = 1
    current_controlled = False

    @property
    def passive(self) -> bool:
        return True

    @property
    def kind(self) -> str:
        return self.model_id.split("-")[0]

    @property
    def x0(self) -> float:
        return self.params.x0

    @property
    def bounds(self) -> tuple[float, float]:
        return 0.0, 1.0

    @property
    def scale(self) -> float:
        lo, hi = self.bounds
        return hi - lo

    def with_state(self, x0: float) -> "ModelInstance":
        return dataclasses.replace(self, params=dataclasses.replace(self.params, x0=x0))

    def current(self, x: float, v: float) -> tuple[float, float]:
        raise NotImplementedError

    def rate(self, x: float, v: float, i: float) -> float:
        raise NotImplementedError

    def describe(self) -> dict:
        d = dataclasses.asdict(self.params)
        return {"model": self.model_id, "params": d}


@dataclass(frozen=True)
class LinearDevice(ModelInstance):
    window: WindowSpec = WindowSpec("joglekar")

    current_controlled = True

    @property
    def kind(self) -> str:
        return "linear"

    def resistance(self, x: float) -> float:
        return linear.resistance(self.params, x)

    def current(self, x, v):
        g = 1.0 / linear.resistance(self.params, x)
        return v * g, g

    def rate(self, x, v, i):
        return linear.state_rate(self.params, self.window, x, i)

    def describe(self):
        d = super().describe()
        d["window"] = dataclasses.asdict(self.window)
        return d


@dataclass(frozen=True)
class PickettDevice(ModelInstance):
    lrs_direction = -1
    set_polarity = -1

    @property
    def r_internal(self):
        return self.params.R_s

    @property
    def x0(self):
        return self.params.w0

    @property
    def bounds(self):
        return self.params.w_min, self.params.w_max

    def with_state(self, x0):
        return dataclasses.replace(self, params=dataclasses.replace(self.params, w0=x0))

    def current(self, x, v):
        return pickett.junction_current(self.params, x, v)

    def rate(self, x, v, i):
        return pickett.state_rate(self.params, x, i)


@dataclass(frozen=True)
class SinhDevice(ModelInstance):
    @property
    def passive(self):
        # the printed Chang rectifying term drives current against the voltage
        return not (self.model_id == "chang" and not self.params.sign_corrected)

    def current(self, x, v):
        return sinh.sinh_current_slope(self.model_id, self.params, x, v)

    def rate(self, x, v, i):
        return sinh.sinh_rate(self.model_id, self.params, x, v)


_PARAM_TYPES = {
    "linear": linear.LinearParams,
    "pickett": pickett.PickettParams,
    "laiho": sinh.LaihoParams,
    "chang": sinh.ChangParams,
    "yakopcic": sinh.YakopcicParams,
}


def _build_params(kind: str, overrides: dict | None):
    base = dict(defaults.PARAMS[kind])
    if overrides:
        unknown = set(overrides) - {f.name for f in dataclasses.fields(_PARAM_TYPES[kind])}
        if unknown:
            raise ValueError(f"unknown {kind} parameter(s): {sorted(unknown)}")
        base.update(overrides)
    if kind == "laiho" and not isinstance(base.get("window"), WindowSpec):
        w = base.get("window") or {}
        base["window"] = WindowSpec("biolek", **({"p": w} if isinstance(w, int) else w))
    return _PARAM_TYPES[kind](**base)


def make_model(model_id: str, params: dict | None = None, x0: float | None = None,
               window: WindowSpec | dict | None = None) -> ModelInstance:
    """Instantiate a registered model with default parameters plus overrides.

    ``model_id`` is one of :data:`MODEL_IDS`; ``"linear"`` is accepted together
    with an explicit ``window``. ``x0`` overrides the initial state (the gap
    width in metres for ``pickett``).
    """
    if isinstance(window, dict):
        window = WindowSpec(**window)
    if model_id == "linear":
        if window is None:
            raise ValueError("model 'linear' needs a window selection")
        model_id = f"linear-{window.kind}"
    if model_id not in MODEL_IDS:
        raise ValueError(f"unknown model {model_id!r}; known models: {', '.join(MODEL_IDS)}")
    if model_id.startswith("linear-"):
        kind = model_id.split("-", 1)[1]
        if window is None:
            window = WindowSpec(kind, defaults.WINDOW_P.get(kind, 1))
        elif window.kind != kind:
            raise ValueError(f"window {window.kind!r} does not match model {model_id!r}")
        overrides = dict(params or {})
        overrides.setdefault("x0", defaults.LINEAR_X0[kind])
        dev = LinearDevice(model_id, _build_params("linear", overrides), window)
    elif model_id == "pickett":
        dev = PickettDevice(model_id, _build_params("pickett", params))
    else:
        dev = SinhDevice(model_id, _build_params(model_id, params))
    if x0 is not None:
        dev = dev.with_state(x0)
    return dev
