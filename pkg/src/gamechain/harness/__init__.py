"""Deterministic load harness: scripted agents over either port."""

from .runner import (
    RunResult,
    compute_metrics,
    run_in_process,
    run_via_api,
    run_with_port,
    validate_scenario,
    write_export,
)
from .scenario import (
    Scenario,
    build_cast,
    derive_keypair,
    genesis_for_scenario,
    load_scenario,
    scenario_from_json,
)

__all__ = [
    "RunResult",
    "Scenario",
    "build_cast",
    "compute_metrics",
    "derive_keypair",
    "genesis_for_scenario",
    "load_scenario",
    "run_in_process",
    "run_via_api",
    "run_with_port",
    "scenario_from_json",
    "validate_scenario",
    "write_export",
]
