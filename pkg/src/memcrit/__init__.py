"""Memristive device models and a three-criteria evaluation harness."""

from .circuits import crs_system, single_device_system
from .config import ExperimentConfig, canned_config_path, load_config, parse_config
from .criteria import (classify_kinetics, crs_analysis, extract_switching_voltages,
                       kinetics_curve, loop_symmetry_error, normalize_kinetics, snapback_depth)
from .devices import MODEL_IDS, make_model
from .errors import ConfigError, MemcritError
from .experiments import run_experiment, write_outputs
from .signals import pulse, triangular_sweep
from .solver import SolverConfig, Trace, integrate
from .windows import WindowSpec

__version__ = "0.1.0"

__all__ = [
    "MODEL_IDS", "make_model", "WindowSpec",
    "triangular_sweep", "pulse",
    "single_device_system", "crs_system",
    "SolverConfig", "Trace", "integrate",
    "extract_switching_voltages", "loop_symmetry_error", "kinetics_curve",
    "normalize_kinetics", "classify_kinetics", "crs_analysis", "snapback_depth",
    "ExperimentConfig", "load_config", "parse_config", "canned_config_path",
    "run_experiment", "write_outputs",
    "MemcritError", "ConfigError",
]
