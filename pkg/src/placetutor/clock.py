"""Injected clocks. All timestamps flow through a Clock so the 14-day
retention gate and the event log are deterministic under test and in
simulation."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

SIM_EPOCH = datetime(2026, 1, 1, 8, 0, 0, tzinfo=timezone.utc)


class RealClock:
    def now(self) -> datetime:
        return datetime.now(timezone.utc)


class SimulatedClock:
    """Starts at a fixed epoch and moves only when told to."""

    def __init__(self, start: datetime = SIM_EPOCH):
        self._now = start

    def now(self) -> datetime:
        return self._now

    def advance(self, *, days: float = 0, seconds: float = 0) -> datetime:
        self._now += timedelta(days=days, seconds=seconds)
        return self._now

    def set(self, moment: datetime) -> None:
        self._now = moment
