"""Run artifacts: metrics CSV, ledger file, summary and Q-table JSON."""

import csv
import io
import json
import logging
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path

from bcfl.core.types import RoundMetrics
from bcfl.errors import ConfigurationError
from bcfl.harness.results import RunResult
from bcfl.ledger import ChainValidation, read_ledger, validate_chain, write_ledger
from bcfl.scheduler import QTable

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "method",
    "round",
    "accuracy",
    "cve",
    "bve",
    "kve",
    "total_delay",
    "messages_root",
    "messages_total",
    "blocks",
    "rejected",
    "reward",
)

METRICS_FILE = "metrics.csv"
LEDGER_FILE = "ledger.bcfl"
SUMMARY_FILE = "summary.json"
QTABLE_FILE = "qtable.json"


def _num(value: float) -> str:
    return format(value, ".9g")


def metrics_rows(method: str, metrics: Iterable[RoundMetrics]) -> list[list[str]]:
    return [
        [
            method,
            str(m.round),
            _num(m.global_accuracy),
            _num(m.delay.cve),
            _num(m.delay.bve),
            _num(m.delay.kve),
            _num(m.delay.total),
            str(m.messages_root),
            str(m.messages_total),
            str(m.blocks_mined),
            str(m.updates_rejected),
            _num(m.reward),
        ]
        for m in metrics
    ]


def metrics_csv(rows: Iterable[list[str]]) -> str:
    """CSV text with header; LF line endings so output is byte-stable."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(rows)
    return buffer.getvalue()


def write_metrics_csv(path: str | Path, method: str, metrics: Iterable[RoundMetrics]) -> Path:
    path = Path(path)
    path.write_text(metrics_csv(metrics_rows(method, metrics)), encoding="utf-8", newline="")
    return path


def write_run_artifacts(result: RunResult, out_dir: str | Path) -> dict[str, Path]:
    """Write every artifact of a run into ``out_dir``; returns name -> path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = {
        "metrics": write_metrics_csv(out / METRICS_FILE, result.config.name, result.metrics)
    }

    if result.chain is not None:
        written["ledger"] = write_ledger(result.chain, out / LEDGER_FILE)

    summary = result.summary.to_dict()
    summary["scenario"] = result.config.model_dump(mode="json")
    summary_path = out / SUMMARY_FILE
    summary_path.write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    written["summary"] = summary_path

    if result.qtable is not None:
        qtable_path = out / QTABLE_FILE
        qtable_path.write_text(result.qtable.dumps(), encoding="utf-8")
        written["qtable"] = qtable_path

    logger.info("wrote %s artifacts to %s", ", ".join(sorted(written)), out)
    return written


def read_qtable(run_dir: str | Path) -> QTable:
    """Load the Q-table a run directory holds.

    Raises:
        ConfigurationError: If the file is missing or malformed
    """
    path = Path(run_dir) / QTABLE_FILE
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigurationError(f"no Q-table in {run_dir}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"malformed {path}: {exc}") from exc
    try:
        return QTable.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"malformed {path}: {exc}") from exc


@dataclass(frozen=True)
class ChainReport:
    path: Path
    blocks: int
    validation: ChainValidation

    def describe(self) -> str:
        if self.validation.ok:
            return f"ok: {self.blocks} blocks"
        return (
            f"invalid: block {self.validation.first_invalid_index}: {self.validation.reason}"
        )


def verify_ledger_file(path: str | Path, expected_tip: str | None = None) -> ChainReport:
    """Decode and validate a ledger file.

    Raises:
        LedgerFormatError: If the file cannot be decoded
        ConfigurationError: If ``expected_tip`` is not a 32-byte hex digest
    """
    anchor = None
    if expected_tip is not None:
        try:
            anchor = bytes.fromhex(expected_tip)
        except ValueError as exc:
            raise ConfigurationError(f"tip must be hex: {expected_tip!r}") from exc
        if len(anchor) != 32:
            raise ConfigurationError("tip must be a 32-byte SHA-256 digest")
    try:
        chain = read_ledger(path)
    except OSError as exc:
        raise ConfigurationError(f"cannot read ledger {path}: {exc}") from exc
    return ChainReport(Path(path), len(chain), validate_chain(chain, expected_tip=anchor))
