"""Scenario-file front end."""

from .runner import Report, exit_code, run
from .scenario import Scenario, parse_scenario

__all__ = ["Report", "Scenario", "exit_code", "parse_scenario", "run"]
