"""Scenario configuration, closed-loop driver and output writers."""

from .config import ConfigError, ScenarioConfig, dump_config, load_config
from .io import read_trace, write_summary, write_sweep, write_trace, write_workspace
from .simulation import (
    ScenarioSummary,
    SimulationTrace,
    energy,
    run_scenario,
    settling_time,
)

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "ScenarioSummary",
    "SimulationTrace",
    "dump_config",
    "energy",
    "load_config",
    "read_trace",
    "run_scenario",
    "settling_time",
    "write_summary",
    "write_sweep",
    "write_trace",
    "write_workspace",
]
