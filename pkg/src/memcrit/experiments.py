"""Run validated experiment configs and write their outputs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .circuits import crs_system, single_device_system
from .config import ExperimentConfig, PulseSpec, SweepSpec
from .criteria import (CriteriaReport, classify_kinetics, crs_analysis,
                       extract_switching_voltages, kinetics_curve, loop_symmetry_error,
                       normalize_kinetics, snapback_depth)
from .defaults import PARAMS_VERSION
from .signals import triangular_sweep
from .solver import integrate
from .svgplot import render_plot
from .traceio import read_table, write_table, write_trace

__all__ = ["ExperimentResult", "run_experiment", "write_outputs", "headline_metrics",
           "compare_headlines", "load_measured_kinetics", "HYGIENE_REL"]

#: Relative change allowed in a headline metric when tolerances tighten 10x.
HYGIENE_REL = 1e-3


@dataclass
class ExperimentResult:
    """Traces, curves and reports of one experiment.

    ``traces`` and ``systems`` are keyed by ``(model label, rate)``;
    ``curves`` and ``normalized`` by model label.
    """

    config: ExperimentConfig
    traces: dict = field(default_factory=dict)
    systems: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)
    normalized: dict = field(default_factory=dict)
    reports: dict = field(default_factory=dict)

    def report_dict(self) -> dict:
        return {
            "id": self.config.id,
            "experiment": self.config.experiment,
            "config_hash": self.config.config_hash,
            "params_version": PARAMS_VERSION,
            "reports": {k: r.to_dict() for k, r in self.reports.items()},
            "headline": headline_metrics(self),
        }

    def table(self) -> str:
        head = f"{self.config.id} ({self.config.experiment}), config {self.config.config_hash}"
        return "\n".join([head] + [r.to_table() for r in self.reports.values()])


def _sweep(cfg: ExperimentConfig, rate: float):
    w: SweepSpec = cfg.waveform
    return triangular_sweep(w.amplitude_pos, w.amplitude_neg, rate, w.cycles, w.start)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Simulate every model/rate (or model/height) combination of ``cfg`` and evaluate it."""
    res = ExperimentResult(cfg)
    solver = cfg.solver
    circ = cfg.circuit
    for spec in cfg.models:
        model = spec.build()
        report = CriteriaReport(spec.name)
        if cfg.experiment == "kinetics":
            pulses: PulseSpec = cfg.waveform
            if circ.x0a is not None:
                model = model.with_state(circ.x0a)
            rule = cfg.analysis.threshold_rule or (
                "fixed_half" if model.kind == "linear" else "half_range")
            curve = kinetics_curve(model, spec.heights or pulses.heights, rule,
                                   pulses.duration, circ.r_ext, solver, pulses.rise)
            res.curves[spec.name] = curve
            report.kinetics_curve = curve
            if cfg.analysis.v_p1 is not None:
                res.normalized[spec.name] = normalize_kinetics(curve, cfg.analysis.v_p1)
            if len(curve.defined()) >= 4:
                report.kinetics = classify_kinetics(curve)
        else:
            for rate in cfg.waveform.rates:
                wf = _sweep(cfg, rate)
                if cfg.experiment == "crs":
                    system = crs_system(model, model, circ.x0a, circ.x0b, circ.r_ext)
                else:
                    m = model if circ.x0a is None else model.with_state(circ.x0a)
                    system = single_device_system(m, circ.r_ext)
                n = cfg.analysis.output_points
                tr = integrate(system, wf, cfg=solver, output_dt=wf.period / n if n else None)
                tr.metadata["config_hash"] = cfg.config_hash
                tr.metadata["params_version"] = PARAMS_VERSION
                res.traces[(spec.name, rate)] = tr
                res.systems[(spec.name, rate)] = system
                if cfg.experiment == "crs":
                    report.crs[rate] = crs_analysis(tr, on_threshold=cfg.analysis.on_threshold)
                else:
                    report.switching[rate] = extract_switching_voltages(tr)
                    if circ.r_ext > 0:
                        report.snapback[rate] = snapback_depth(tr)
            if cfg.experiment == "sweep" and cfg.waveform.cycles >= 2:
                # symmetry is judged on the slowest sweep
                slow = min(cfg.waveform.rates)
                report.symmetry_error = loop_symmetry_error(res.traces[(spec.name, slow)])
        res.reports[spec.name] = report
    return res


def headline_metrics(res: ExperimentResult) -> dict[str, float]:
    """Scalar summary values of an experiment, keyed ``model/rate-or-height/metric``."""
    out = {}
    for name, rep in res.reports.items():
        for rate, (vs, vr) in rep.switching.items():
            if vs is not None:
                out[f"{name}/{rate:g}/v_set"] = vs
            if vr is not None:
                out[f"{name}/{rate:g}/v_reset"] = vr
        if rep.symmetry_error is not None:
            out[f"{name}/symmetry_error"] = rep.symmetry_error
        for rate, c in rep.crs.items():
            key = f"{name}/{rate:g}"
            out[f"{key}/r_total_min"] = c.r_total_min
            if math.isfinite(c.r_total_max):
                out[f"{key}/r_total_max"] = c.r_total_max
            if c.on_window is not None:
                out[f"{key}/on_window_lo"], out[f"{key}/on_window_hi"] = c.on_window
            for branch, v in c.set_onset.items():
                out[f"{key}/set_onset_{branch}"] = v
            for branch, lag in c.peak_lag.items():
                out[f"{key}/peak_lag_{branch}"] = lag
    for name, curve in res.curves.items():
        for vp, ts in curve.points:
            if ts is not None:
                out[f"{name}/{vp:g}/t_set"] = ts
    return out


def _floor(key: str, cfg: ExperimentConfig) -> float:
    # absolute resolution below which differences are noise, per metric type
    if key.endswith("symmetry_error"):
        return 1e-9
    if "peak_lag" in key:
        rate = float(key.split("/")[-2])
        return HYGIENE_REL * _sweep(cfg, rate).period
    return 0.0


def compare_headlines(cfg: ExperimentConfig, a: dict, b: dict,
                      rel: float = HYGIENE_REL) -> list[str]:
    """Differences between two headline dicts beyond ``rel``; empty when they agree."""
    problems = []
    for key in sorted(set(a) | set(b)):
        if key not in a or key not in b:
            problems.append(f"{key}: present in only one run")
            continue
        x, y = a[key], b[key]
        if abs(x - y) > rel * max(abs(x), abs(y)) + _floor(key, cfg):
            problems.append(f"{key}: {x:.9g} vs {y:.9g}")
    return problems


def _slug(s: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in s)


def write_outputs(res: ExperimentResult, out_dir) -> list[Path]:
    """Write traces, tables, report and plots of ``res`` into ``out_dir``."""
    cfg = res.config
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    h = cfg.config_hash
    written = []
    for (name, rate), tr in res.traces.items():
        for fmt in cfg.output.formats:
            p = out / f"{cfg.id}_{_slug(name)}_{rate:g}Vps.{fmt}"
            written.append(write_trace(tr, p, fmt, h))
    if res.curves:
        rows = []
        for name, curve in res.curves.items():
            norm = res.normalized.get(name)
            for k, (vp, ts) in enumerate(curve.points):
                tn = norm.points[k][1] if norm is not None else None
                rows.append([name, vp, "no crossing" if ts is None else ts, tn])
        written.append(write_table(out / f"{cfg.id}_kinetics.csv",
                                   ["model", "v_p", "t_set", "t_set_norm"], rows, h))
    report = out / f"{cfg.id}_report.json"
    report.write_text(json.dumps(res.report_dict(), indent=1, default=float) + "\n")
    written.append(report)
    if cfg.output.plots:
        written.extend(_plots(res, out))
    return written


def _plots(res: ExperimentResult, out: Path) -> list[Path]:
    cfg = res.config
    h = cfg.config_hash
    files = []
    if res.traces:
        data = [(f"{name} {rate:g} V/s", tr) for (name, rate), tr in res.traces.items()]
        files.append(render_plot(data, "iv_loop", out / f"{cfg.id}_iv.svg", cfg.id,
                                 config_hash=h))
        if cfg.experiment == "crs":
            files.append(render_plot(data, "resistance_vs_t", out / f"{cfg.id}_resistance.svg",
                                     cfg.id, config_hash=h))
    if res.curves:
        curves = res.normalized or res.curves
        data = [(name, c) for name, c in curves.items() if c.defined()]
        if data:
            title = f"{cfg.id} (normalized at {cfg.analysis.v_p1:g} V)" if res.normalized \
                else cfg.id
            files.append(render_plot(data, "kinetics_loglog", out / f"{cfg.id}_kinetics.svg",
                                     title, config_hash=h))
    return files


def load_measured_kinetics(path) -> tuple[list[float], list[float]]:
    """Read a measured kinetics CSV with columns ``v_p`` and ``t_set``."""
    header, rows = read_table(path)
    try:
        iv, it = header.index("v_p"), header.index("t_set")
    except ValueError as exc:
        raise ValueError(f"{path}: needs columns v_p and t_set") from exc
    return [float(r[iv]) for r in rows], [float(r[it]) for r in rows]
