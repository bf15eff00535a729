from .config import ExperimentConfig, config_from_dict, load_config
from .experiments import (
    run_coupling_experiment,
    run_experiment,
    run_flux_experiment,
    run_front_experiment,
    run_hydro_experiment,
    run_simulation,
    run_stationarity_experiment,
)
from .report import ConvergenceReport, emit_report, mean_ci

__all__ = [
    "ExperimentConfig",
    "config_from_dict",
    "load_config",
    "run_experiment",
    "run_hydro_experiment",
    "run_front_experiment",
    "run_flux_experiment",
    "run_coupling_experiment",
    "run_stationarity_experiment",
    "run_simulation",
    "ConvergenceReport",
    "emit_report",
    "mean_ci",
]
