"""Scenario files, the built-in library, the runner and its text outputs."""

from .library import BUILTIN_SCENARIOS, builtin, resolve
from .output import emit_plot_data, write_outputs, write_report, write_series
from .parsing import config_from_mapping, parse_config
from .runner import run_scenario
from .schemas import CheckResult, RunReport, ScenarioConfig

__all__ = [
    "BUILTIN_SCENARIOS",
    "CheckResult",
    "RunReport",
    "ScenarioConfig",
    "builtin",
    "config_from_mapping",
    "emit_plot_data",
    "parse_config",
    "resolve",
    "run_scenario",
    "write_outputs",
    "write_report",
    "write_series",
]
