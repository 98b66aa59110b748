"""Provenance checklist over accepted updates."""

import math

from bcfl.core.runlog import RunLog, UpdateLogEntry

CHECKLIST_ITEMS = 4


def update_compliance(entry: UpdateLogEntry, ledger_valid: bool) -> float:
    """Fraction of checklist items one update satisfies.

    Items: recorded on a validated ledger, admitted credential, DP applied,
    validation accuracy recorded.
    """
    items = (
        entry.on_ledger and ledger_valid,
        entry.admitted,
        entry.dp_applied,
        entry.validation_recorded,
    )
    return sum(items) / CHECKLIST_ITEMS


def compliance_score(run_log: RunLog) -> float:
    """Percentage of checklist credit earned by accepted updates; 0 if none."""
    accepted = run_log.accepted()
    if not accepted:
        return 0.0
    credit = math.fsum(update_compliance(e, run_log.ledger_valid) for e in accepted)
    return 100.0 * credit / len(accepted)
