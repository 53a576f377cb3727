from .cli import main
from .config import CONFIG_SCHEMA, SCHEMA_VERSION, ExperimentSpec, RunConfig, load_config, parse_config
from .experiments import ExperimentReport, run_experiment

__all__ = [
    "main",
    "CONFIG_SCHEMA",
    "SCHEMA_VERSION",
    "ExperimentSpec",
    "RunConfig",
    "load_config",
    "parse_config",
    "ExperimentReport",
    "run_experiment",
]
