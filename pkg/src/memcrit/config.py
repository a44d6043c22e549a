"""Experiment configuration: strict JSON parsing and validation.

A config fully describes one experiment (a sweep family, a kinetics curve
set or an anti-serial sweep family). Parsing validates everything, including
model parameters, before any simulation starts; unknown keys are errors.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

from .devices import MODEL_IDS, ModelInstance, make_model
from .errors import ConfigError
from .solver import SolverConfig
from .windows import WindowSpec

__all__ = [
    "EXPERIMENT_KINDS",
    "ModelSpec",
    "SweepSpec",
    "PulseSpec",
    "CircuitSpec",
    "AnalysisSpec",
    "OutputSpec",
    "ExperimentConfig",
    "parse_config",
    "load_config",
    "canned_config_path",
    "canned_ids",
]

EXPERIMENT_KINDS = ("sweep", "kinetics", "crs")
_CONFIG_DIR = Path(__file__).with_name("configs")


def _obj(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{where}: expected an object, got {type(value).__name__}")
    return value


def _keys(d: dict, allowed, where: str, required=()):
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")
    missing = [k for k in required if k not in d]
    if missing:
        raise ConfigError(f"{where}: missing key(s) {', '.join(missing)}")


def _num(value, where: str, positive=False, allow_none=False) -> float | None:
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite")
    if positive and not value > 0:
        raise ConfigError(f"{where}: must be > 0, got {value}")
    return value


def _num_list(value, where: str, positive=False) -> tuple[float, ...]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where}: expected a non-empty list of numbers")
    return tuple(_num(v, f"{where}[{k}]", positive) for k, v in enumerate(value))


@dataclass(frozen=True)
class ModelSpec:
    """Model id, parameter overrides and (for linear models) the window.

    ``heights`` overrides the experiment's pulse heights for this model.
    """

    model: str
    params: dict = field(default_factory=dict)
    window: dict | None = None
    label: str = ""
    heights: tuple[float, ...] | None = None

    def build(self) -> ModelInstance:
        return make_model(self.model, dict(self.params) or None,
                          window=WindowSpec(**self.window) if self.window else None)

    @property
    def name(self) -> str:
        return self.label or self.model

    @classmethod
    def parse(cls, d, where: str) -> "ModelSpec":
        d = _obj(d, where)
        _keys(d, ("model", "params", "window", "label", "heights"), where, ("model",))
        model = d["model"]
        if not isinstance(model, str):
            raise ConfigError(f"{where}.model: expected a string")
        if model not in MODEL_IDS and model != "linear":
            raise ConfigError(f"{where}.model: unknown model {model!r}; "
                              f"known models: {', '.join(MODEL_IDS)}")
        params = _obj(d.get("params", {}), f"{where}.params")
        window = d.get("window")
        if window is not None:
            window = _obj(window, f"{where}.window")
            _keys(window, ("kind", "p", "literal"), f"{where}.window", ("kind",))
        label = d.get("label", "")
        if not isinstance(label, str):
            raise ConfigError(f"{where}.label: expected a string")
        heights = None
        if "heights" in d:
            heights = _num_list(d["heights"], f"{where}.heights", positive=True)
            if any(b <= a for a, b in zip(heights, heights[1:])):
                raise ConfigError(f"{where}.heights: must be strictly increasing")
        spec = cls(model, dict(params), dict(window) if window else None, label, heights)
        try:
            inst = spec.build()
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: {exc}") from exc
        if model == "linear":
            spec = cls(inst.model_id, spec.params, spec.window, label, heights)
        return spec


@dataclass(frozen=True)
class SweepSpec:
    """Triangular sweep family: one run per rate."""

    amplitude_pos: float
    amplitude_neg: float
    rates: tuple[float, ...]
    cycles: int = 1
    start: str = "positive"

    @classmethod
    def parse(cls, d, where: str) -> "SweepSpec":
        d = _obj(d, where)
        _keys(d, ("type", "amplitude_pos", "amplitude_neg", "rates", "cycles", "start"), where,
              ("amplitude_pos", "rates"))
        if d.get("type", "triangular") != "triangular":
            raise ConfigError(f"{where}.type: sweeps use 'triangular'")
        amp = _num(d["amplitude_pos"], f"{where}.amplitude_pos", positive=True)
        neg = _num(d.get("amplitude_neg", -amp), f"{where}.amplitude_neg")
        if not neg < 0:
            raise ConfigError(f"{where}.amplitude_neg: must be < 0")
        cycles = d.get("cycles", 1)
        if isinstance(cycles, bool) or not isinstance(cycles, int) or cycles < 1:
            raise ConfigError(f"{where}.cycles: expected a positive integer")
        start = d.get("start", "positive")
        if start not in ("positive", "negative"):
            raise ConfigError(f"{where}.start: 'positive' or 'negative'")
        rates = _num_list(d["rates"], f"{where}.rates", positive=True)
        return cls(amp, neg, rates, cycles, start)


@dataclass(frozen=True)
class PulseSpec:
    """Held pulses of the given heights (magnitudes, volts)."""

    heights: tuple[float, ...]
    duration: float = 1e4
    rise: float = 1e-9

    @classmethod
    def parse(cls, d, where: str) -> "PulseSpec":
        d = _obj(d, where)
        _keys(d, ("type", "heights", "duration", "rise"), where, ("heights",))
        if d.get("type", "pulse") != "pulse":
            raise ConfigError(f"{where}.type: kinetics use 'pulse'")
        heights = _num_list(d["heights"], f"{where}.heights", positive=True)
        if any(b <= a for a, b in zip(heights, heights[1:])):
            raise ConfigError(f"{where}.heights: must be strictly increasing")
        return cls(heights,
                   _num(d.get("duration", 1e4), f"{where}.duration", positive=True),
                   _num(d.get("rise", 1e-9), f"{where}.rise", positive=True))


@dataclass(frozen=True)
class CircuitSpec:
    """Topology, external series resistance and initial states (device frames)."""

    topology: str = "single"
    r_ext: float = 0.0
    x0a: float | None = None
    x0b: float | None = None

    @classmethod
    def parse(cls, d, where: str) -> "CircuitSpec":
        d = _obj(d, where)
        _keys(d, ("topology", "r_ext", "x0a", "x0b"), where)
        topo = d.get("topology", "single")
        if topo not in ("single", "crs"):
            raise ConfigError(f"{where}.topology: 'single' or 'crs'")
        r_ext = _num(d.get("r_ext", 0.0), f"{where}.r_ext")
        if r_ext < 0:
            raise ConfigError(f"{where}.r_ext: must be >= 0")
        x0a = _num(d.get("x0a"), f"{where}.x0a", allow_none=True)
        x0b = _num(d.get("x0b"), f"{where}.x0b", allow_none=True)
        if topo == "single" and x0b is not None:
            raise ConfigError(f"{where}.x0b: only meaningful for topology 'crs'")
        return cls(topo, r_ext, x0a, x0b)


@dataclass(frozen=True)
class AnalysisSpec:
    """Evaluation options.

    ``output_points`` adds a uniform output grid of that many points per
    sweep period (needed for the loop symmetry metric); ``on_threshold``
    overrides the geometric-mean ON rule.
    """

    threshold_rule: str | None = None
    v_p1: float | None = None
    on_threshold: float | None = None
    output_points: int | None = None

    @classmethod
    def parse(cls, d, where: str) -> "AnalysisSpec":
        d = _obj(d, where)
        _keys(d, ("threshold_rule", "v_p1", "on_threshold", "output_points"), where)
        rule = d.get("threshold_rule")
        if rule not in (None, "fixed_half", "half_range"):
            raise ConfigError(f"{where}.threshold_rule: 'fixed_half' or 'half_range'")
        n = d.get("output_points")
        if n is not None and (isinstance(n, bool) or not isinstance(n, int) or n < 4):
            raise ConfigError(f"{where}.output_points: integer >= 4")
        return cls(rule,
                   _num(d.get("v_p1"), f"{where}.v_p1", positive=True, allow_none=True),
                   _num(d.get("on_threshold"), f"{where}.on_threshold", positive=True,
                        allow_none=True),
                   n)


@dataclass(frozen=True)
class OutputSpec:
    formats: tuple[str, ...] = ("csv",)
    plots: bool = True
    dir: str | None = None

    @classmethod
    def parse(cls, d, where: str) -> "OutputSpec":
        d = _obj(d, where)
        _keys(d, ("formats", "plots", "dir"), where)
        formats = d.get("formats", ["csv"])
        if not isinstance(formats, list) or any(f not in ("csv", "json") for f in formats):
            raise ConfigError(f"{where}.formats: list drawn from 'csv', 'json'")
        plots = d.get("plots", True)
        if not isinstance(plots, bool):
            raise ConfigError(f"{where}.plots: expected true or false")
        out_dir = d.get("dir")
        if out_dir is not None and not isinstance(out_dir, str):
            raise ConfigError(f"{where}.dir: expected a string")
        return cls(tuple(formats), plots, out_dir)


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully validated experiment."""

    id: str
    experiment: str
    models: tuple[ModelSpec, ...]
    waveform: SweepSpec | PulseSpec
    circuit: CircuitSpec = CircuitSpec()
    analysis: AnalysisSpec = AnalysisSpec()
    solver: SolverConfig = SolverConfig()
    output: OutputSpec = OutputSpec()
    description: str = ""
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def config_hash(self) -> str:
        """Digest of the canonical config (output settings excluded)."""
        doc = {k: v for k, v in self.raw.items() if k != "output"}
        doc["solver"] = self.solver.to_dict()
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def with_solver(self, solver: SolverConfig) -> "ExperimentConfig":
        return ExperimentConfig(self.id, self.experiment, self.models, self.waveform,
                                self.circuit, self.analysis, solver, self.output,
                                self.description, self.raw)


_TOP_KEYS = ("id", "description", "experiment", "models", "waveform", "circuit", "analysis",
             "solver", "output")


def parse_config(doc: dict, source: str = "config") -> ExperimentConfig:
    """Validate a config document and return an :class:`ExperimentConfig`.

    Raises
    ------
    ConfigError
        On any unknown key, wrong type, inconsistent setting or invalid
        model parameter.
    """
    doc = _obj(copy.deepcopy(doc), source)
    _keys(doc, _TOP_KEYS, source, ("id", "experiment", "models", "waveform"))
    cid = doc["id"]
    if not isinstance(cid, str) or not cid or any(c in cid for c in "/\\ "):
        raise ConfigError(f"{source}.id: non-empty string without spaces or slashes")
    kind = doc["experiment"]
    if kind not in EXPERIMENT_KINDS:
        raise ConfigError(f"{source}.experiment: one of {', '.join(EXPERIMENT_KINDS)}")
    models_doc = doc["models"]
    if not isinstance(models_doc, list) or not models_doc:
        raise ConfigError(f"{source}.models: expected a non-empty list")
    models = tuple(ModelSpec.parse(m, f"{source}.models[{k}]") for k, m in enumerate(models_doc))
    names = [m.name for m in models]
    if len(set(names)) != len(names):
        raise ConfigError(f"{source}.models: duplicate model labels {names}")
    circuit = CircuitSpec.parse(doc.get("circuit", {}), f"{source}.circuit")
    analysis = AnalysisSpec.parse(doc.get("analysis", {}), f"{source}.analysis")
    if kind == "kinetics":
        waveform = PulseSpec.parse(doc["waveform"], f"{source}.waveform")
        if circuit.topology != "single":
            raise ConfigError(f"{source}.circuit.topology: kinetics runs use a single device")
        for m in models:
            hs = m.heights or waveform.heights
            if analysis.v_p1 is not None and not any(
                    math.isclose(h, analysis.v_p1, rel_tol=1e-12) for h in hs):
                raise ConfigError(f"{source}.analysis.v_p1: must be one of the pulse heights "
                                  f"of {m.name}")
    elif any(m.heights for m in models):
        raise ConfigError(f"{source}.models: per-model heights only apply to kinetics")
    if kind != "kinetics":
        waveform = SweepSpec.parse(doc["waveform"], f"{source}.waveform")
        want = "crs" if kind == "crs" else "single"
        if circuit.topology != want:
            raise ConfigError(f"{source}.circuit.topology: {kind} experiments need {want!r}")
    solver_doc = _obj(doc.get("solver", {}), f"{source}.solver")
    allowed = {f.name for f in fields(SolverConfig)}
    _keys(solver_doc, allowed, f"{source}.solver")
    try:
        solver = SolverConfig(**solver_doc)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}.solver: {exc}") from exc
    output = OutputSpec.parse(doc.get("output", {}), f"{source}.output")
    desc = doc.get("description", "")
    if not isinstance(desc, str):
        raise ConfigError(f"{source}.description: expected a string")
    # initial states must lie inside every model's bounds
    for m in models:
        inst = m.build()
        lo, hi = inst.bounds
        for key in ("x0a", "x0b"):
            x0 = getattr(circuit, key)
            if x0 is not None and not lo <= x0 <= hi:
                raise ConfigError(f"{source}.circuit.{key}: {x0} outside [{lo}, {hi}] "
                                  f"for {m.model}")
    return ExperimentConfig(cid, kind, models, waveform, circuit, analysis, solver, output,
                            desc, doc)


def load_config(path) -> ExperimentConfig:
    """Read and validate a JSON config file."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return parse_config(doc, path.name)


def canned_ids() -> list[str]:
    """Ids of the configs shipped with the package."""
    return sorted(p.stem for p in _CONFIG_DIR.glob("*.json"))


def canned_config_path(fig_id: str) -> Path:
    path = _CONFIG_DIR / f"{fig_id}.json"
    if not path.is_file():
        raise ConfigError(f"unknown config id {fig_id!r}; available: {', '.join(canned_ids())}")
    return path
