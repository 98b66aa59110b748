"""Per-update audit trail of a run.

The run log is the ground truth consumed by defense metrics and the
compliance checklist: one entry per submitted update per round.
"""

from dataclasses import dataclass, field


@dataclass
class UpdateLogEntry:
    """Fate of one submitted update."""

    round: int
    client_id: int
    synthetic: bool = False
    malicious: bool = False
    poisoned: bool = False
    admitted: bool = False
    accepted: bool = False
    aggregation_weight: float = 0.0
    dp_applied: bool = False
    validation_recorded: bool = False
    on_ledger: bool = False
    reason: str = ""


@dataclass
class RunLog:
    """Entries of all rounds plus run-level facts needed after the fact."""

    entries: list[UpdateLogEntry] = field(default_factory=list)
    attack_enabled: bool = False
    sybil_attack: bool = False
    defense_enabled: bool = False
    ledger_valid: bool = False

    def add(self, entry: UpdateLogEntry) -> None:
        self.entries.append(entry)

    def for_round(self, round_index: int) -> list[UpdateLogEntry]:
        return [e for e in self.entries if e.round == round_index]

    @property
    def rounds(self) -> list[int]:
        return sorted({e.round for e in self.entries})

    def accepted(self) -> list[UpdateLogEntry]:
        return [e for e in self.entries if e.accepted]
