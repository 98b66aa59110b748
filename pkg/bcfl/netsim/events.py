"""Virtual-time event queue and the delay event log."""

import heapq
import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

from bcfl.core.types import DelayBreakdown
from bcfl.errors import ContractError
from bcfl.netsim.model import Tier


@dataclass(frozen=True)
class ScheduledEvent:
    """Queue entry; ``seq`` keeps insertion order among equal times."""

    time: float
    seq: int
    payload: Any


class EventQueue:
    """Single-threaded discrete-event queue over a virtual clock.

    A binary heap keyed on (time, insertion order), so events scheduled for
    the same instant are processed first-in first-out.
    """

    def __init__(self, start: float = 0.0) -> None:
        self._pending: list[tuple[float, int, ScheduledEvent]] = []
        self._seq = 0
        self.clock = start

    def schedule(self, event: Any, at: float) -> ScheduledEvent:
        """Queue ``event`` for virtual time ``at``.

        Raises:
            ContractError: If ``at`` lies before the current clock
        """
        if not math.isfinite(at) or at < self.clock:
            raise ContractError(
                f"cannot schedule an event in the past (at {at} < clock {self.clock})"
            )
        entry = ScheduledEvent(at, self._seq, event)
        self._seq += 1
        heapq.heappush(self._pending, (at, entry.seq, entry))
        return entry

    def run_until(self, t: float) -> list[ScheduledEvent]:
        """Process every event with time <= t, in order, and move the clock to t.

        Raises:
            ContractError: If t lies before the current clock
        """
        if t < self.clock:
            raise ContractError(f"cannot run backwards to {t} from clock {self.clock}")
        due = []
        while self._pending and self._pending[0][0] <= t:
            due.append(heapq.heappop(self._pending)[2])
        self.clock = t
        return due

    def drain(self) -> list[ScheduledEvent]:
        """Process all pending events; the clock stops at the last one."""
        if not self._pending:
            return []
        return self.run_until(max(time for time, _, _ in self._pending))

    @property
    def pending_count(self) -> int:
        return len(self._pending)


@dataclass(frozen=True)
class DelayEvent:
    """One accounted piece of round delay.

    ``share`` is the event's weight in its tier: per-client events carry
    1/n so that a tier value is a mean over clients.
    """

    round: int
    kind: str
    tier: Tier
    node: str
    seconds: float
    share: float = 1.0

    def __post_init__(self) -> None:
        if self.seconds < 0 or self.share < 0:
            raise ContractError(f"negative delay event {self.kind} at {self.node}")


def breakdown_from_events(events: Iterable[DelayEvent]) -> DelayBreakdown:
    """Re-derive a round's DelayBreakdown by summing its events per tier."""
    parts: dict[Tier, list[float]] = {tier: [] for tier in Tier}
    for event in events:
        parts[event.tier].append(event.seconds * event.share)
    return DelayBreakdown(
        cve=math.fsum(parts[Tier.CLIENT]),
        bve=math.fsum(parts[Tier.FOG]),
        kve=math.fsum(parts[Tier.CLOUD]),
    )
