"""Command-line front end.

Subcommands ``sweep``, ``kinetics`` and ``crs`` build an experiment config
from flags (optionally on top of ``--config FILE``; flags win), run it and
write traces, tables, a JSON report and SVG plots. ``reproduce ID`` runs a
shipped config, ``check`` runs the acceptance suite, ``list-models`` prints
the model ids.

Exit status: 0 success, 1 invalid input or usage, 2 numerical failure (or a
failed acceptance criterion).
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
from pathlib import Path

from .config import canned_config_path, canned_ids, load_config, parse_config
from .devices import MODEL_IDS
from .errors import ConfigError, MemcritError

__all__ = ["main", "build_parser", "OUTPUT_ENV"]

#: Environment variable naming the default output directory.
OUTPUT_ENV = "MEMCRIT_OUTPUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _key_value(text: str):
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        return key, json.loads(value)
    except json.JSONDecodeError:
        return key, value


def _common(p: argparse.ArgumentParser, experiment: str | None):
    g = p.add_argument_group("output")
    g.add_argument("--out", help=f"output directory (default: config, then ${OUTPUT_ENV}, "
                                 "then the working directory)")
    g.add_argument("--format", action="append", choices=("csv", "json"), dest="formats",
                   help="trace format; repeat for both")
    g.add_argument("--no-plots", action="store_true", help="skip SVG plots")
    g.add_argument("--quiet", action="store_true", help="do not print the report table")
    s = p.add_argument_group("solver")
    s.add_argument("--rel-tol", type=float)
    s.add_argument("--abs-tol", type=float)
    s.add_argument("--max-step", type=float)
    s.add_argument("--newton-tol", type=float)
    if experiment is None:
        return
    p.add_argument("--config", help="JSON config to start from")
    p.add_argument("--id", help="experiment id used in file names")
    m = p.add_argument_group("model")
    m.add_argument("--model", action="append", dest="models",
                   help="model id (repeatable); 'linear' needs --window")
    m.add_argument("--window", choices=("benderli", "joglekar", "biolek", "shin"))
    m.add_argument("--window-p", type=int, help="window exponent p")
    m.add_argument("--param", action="append", type=_key_value, default=[],
                   metavar="KEY=VALUE", help="model parameter override (repeatable)")
    c = p.add_argument_group("circuit")
    c.add_argument("--r-ext", type=float, help="external series resistance (ohm)")
    c.add_argument("--x0a", type=float, help="initial state of device A")
    if experiment == "crs":
        c.add_argument("--x0b", type=float, help="initial state of device B (own frame)")
    w = p.add_argument_group("waveform")
    a = p.add_argument_group("analysis")
    if experiment == "kinetics":
        w.add_argument("--height", action="append", type=float, dest="heights",
                       help="pulse height in V (repeatable)")
        w.add_argument("--duration", type=float, help="pulse hold time (s)")
        w.add_argument("--rise", type=float, help="pulse rise time (s)")
        a.add_argument("--threshold-rule", choices=("fixed_half", "half_range"))
        a.add_argument("--v-p1", type=float, help="normalization height (V)")
        a.add_argument("--measured", help="CSV with v_p,t_set columns to overlay")
    else:
        w.add_argument("--amp", type=float, help="positive sweep amplitude (V)")
        w.add_argument("--amp-neg", type=float, help="negative amplitude (default -amp)")
        w.add_argument("--rate", action="append", type=float, dest="rates",
                       help="sweep rate in V/s (repeatable)")
        w.add_argument("--cycles", type=int)
        w.add_argument("--start", choices=("positive", "negative"))
        a.add_argument("--output-points", type=int, help="uniform samples per period")
        if experiment == "crs":
            a.add_argument("--on-threshold", type=float, help="ON-state R_total bound (ohm)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="memcrit", description="Memristive device simulation and criteria.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for name, text in (("sweep", "triangular sweeps of a single device"),
                       ("kinetics", "SET time versus pulse height"),
                       ("crs", "triangular sweeps of an anti-serial pair")):
        _common(sub.add_parser(name, help=text, description=text), name)
    rp = sub.add_parser("reproduce", help="run a shipped experiment config")
    rp.add_argument("fig_id", metavar="FIG_ID", help=f"one of: {', '.join(canned_ids())}")
    _common(rp, None)
    cp = sub.add_parser("check", help="run the acceptance suite")
    cp.add_argument("--criterion", action="append", type=int, dest="criteria",
                    help="run only this criterion (repeatable)")
    cp.add_argument("--quiet", action="store_true", help="one line per criterion")
    sub.add_parser("list-models", help="print the model ids")
    return parser


def _set(doc: dict, section: str, key: str, value):
    if value is not None:
        doc.setdefault(section, {})[key] = value


def _apply_common(doc: dict, args):
    _set(doc, "solver", "rel_tol", args.rel_tol)
    _set(doc, "solver", "abs_tol", args.abs_tol)
    _set(doc, "solver", "max_step", args.max_step)
    _set(doc, "solver", "newton_tol", args.newton_tol)
    if args.formats:
        _set(doc, "output", "formats", sorted(set(args.formats)))
    if args.no_plots:
        _set(doc, "output", "plots", False)


def config_from_args(args):
    """Config document for a ``sweep``/``kinetics``/``crs`` invocation."""
    kind = args.command
    if args.config:
        cfg = load_config(args.config)
        doc = copy.deepcopy(cfg.raw)
        if doc["experiment"] != kind:
            raise ConfigError(f"{args.config}: is a {doc['experiment']!r} config, "
                              f"not {kind!r}")
    else:
        doc = {"id": kind, "experiment": kind, "models": [], "waveform": {}}
        if kind == "crs":
            doc["circuit"] = {"topology": "crs"}
    if args.id:
        doc["id"] = args.id
    if args.models:
        doc["models"] = [{"model": m} for m in args.models]
    if not doc["models"]:
        raise ConfigError("no model given (use --model or --config)")
    for m in doc["models"]:
        if args.window or args.window_p is not None:
            win = dict(m.get("window") or {})
            if args.window:
                win["kind"] = args.window
            elif "kind" not in win and m["model"].startswith("linear-"):
                win["kind"] = m["model"].split("-", 1)[1]
            if args.window_p is not None:
                win["p"] = args.window_p
            m["window"] = win
        if args.param:
            m.setdefault("params", {}).update(dict(args.param))
    wf = doc.setdefault("waveform", {})
    if kind == "kinetics":
        if args.heights:
            wf["heights"] = sorted(args.heights)
        wf.setdefault("heights", [0.5, 0.7, 1.0, 1.4, 2.0])
        _set(doc, "waveform", "duration", args.duration)
        _set(doc, "waveform", "rise", args.rise)
        _set(doc, "analysis", "threshold_rule", args.threshold_rule)
        _set(doc, "analysis", "v_p1", args.v_p1)
    else:
        _set(doc, "waveform", "amplitude_pos", args.amp)
        _set(doc, "waveform", "amplitude_neg", args.amp_neg)
        wf.setdefault("amplitude_pos", 1.0)
        if args.amp is not None and args.amp_neg is None:
            wf["amplitude_neg"] = -args.amp
        if args.rates:
            wf["rates"] = args.rates
        wf.setdefault("rates", [1.0])
        _set(doc, "waveform", "cycles", args.cycles)
        _set(doc, "waveform", "start", args.start)
        _set(doc, "analysis", "output_points", args.output_points)
        if kind == "crs":
            _set(doc, "analysis", "on_threshold", args.on_threshold)
            _set(doc, "circuit", "x0b", args.x0b)
    _set(doc, "circuit", "r_ext", args.r_ext)
    _set(doc, "circuit", "x0a", args.x0a)
    _apply_common(doc, args)
    return parse_config(doc, "command line")


def output_dir(cli_value, cfg) -> Path:
    return Path(cli_value or cfg.output.dir or os.environ.get(OUTPUT_ENV) or ".")


def _run(cfg, args, measured=None) -> int:
    from .experiments import load_measured_kinetics, run_experiment, write_outputs
    from .svgplot import render_plot

    out = output_dir(args.out, cfg)
    overlay = load_measured_kinetics(measured) if measured else None
    res = run_experiment(cfg)
    files = write_outputs(res, out)
    if overlay is not None:
        data = [(name, c) for name, c in (res.normalized or res.curves).items() if c.defined()]
        if data:
            path = out / f"{cfg.id}_kinetics.svg"
            render_plot(data, "kinetics_loglog", path, cfg.id,
                        measured=overlay, config_hash=cfg.config_hash)
            if path not in files:
                files.append(path)
    if not args.quiet:
        print(res.table())
    for f in files:
        print(f"wrote {f}")
    return 0


def _reproduce(args) -> int:
    cfg = load_config(canned_config_path(args.fig_id))
    doc = copy.deepcopy(cfg.raw)
    _apply_common(doc, args)
    return _run(parse_config(doc, f"{args.fig_id}.json"), args)


def _check(args) -> int:
    from .acceptance import CRITERIA, format_result, run_all

    numbers = args.criteria or sorted(CRITERIA)
    bad = [n for n in numbers if n not in CRITERIA]
    if bad:
        raise ConfigError(f"unknown criterion {bad[0]}; valid: 1-{len(CRITERIA)}")
    results = run_all(numbers, echo=lambda line: print(line, flush=True)) if not args.quiet \
        else run_all(numbers, echo=lambda _: None)
    if args.quiet:
        for r in results:
            print(format_result(r, verbose=False))
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return 0 if passed == len(results) else 2


def main(argv=None) -> int:
    """Run the CLI and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "list-models":
            print("\n".join(MODEL_IDS))
            return 0
        if args.command == "check":
            return _check(args)
        if args.command == "reproduce":
            return _reproduce(args)
        cfg = config_from_args(args)
        return _run(cfg, args, getattr(args, "measured", None))
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:
        # --help exits 0 through argparse
        return int(exc.code or 0)
    except MemcritError as exc:
        print(f"memcrit: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError, OSError) as exc:
        print(f"memcrit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
