"""Scenario orchestration, baseline comparison and run artifacts."""

from bcfl.harness.baselines import METHODS, BaselineSuite, ComparisonRow, compare_baselines
from bcfl.harness.compliance import compliance_score, update_compliance
from bcfl.harness.engine import ScenarioRunner, run_scenario
from bcfl.harness.export import (
    CSV_COLUMNS,
    ChainReport,
    read_qtable,
    verify_ledger_file,
    write_run_artifacts,
)
from bcfl.harness.results import RunResult, RunSummary, mean_delay

__all__ = [
    "CSV_COLUMNS",
    "METHODS",
    "BaselineSuite",
    "ChainReport",
    "ComparisonRow",
    "RunResult",
    "RunSummary",
    "ScenarioRunner",
    "compare_baselines",
    "compliance_score",
    "mean_delay",
    "read_qtable",
    "run_scenario",
    "update_compliance",
    "verify_ledger_file",
    "write_run_artifacts",
]
