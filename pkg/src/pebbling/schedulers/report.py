from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from pebbling.graph import Dag
from pebbling.schedule import PebbleMetrics, Schedule, simulate


@dataclass
class SchedulerReport:
    """A schedule together with the space/time bounds its construction claims.

    ``move_bound`` is ``None`` when no time bound is claimed.
    """

    schedule: Schedule
    space_bound: int
    move_bound: int | None
    strategy: str
    params: dict[str, Any] = field(default_factory=dict)

    def measure(self, dag: Dag) -> PebbleMetrics:
        return simulate(dag, self.schedule)

    def check(self, dag: Dag) -> PebbleMetrics:
        """Simulate and raise ``AssertionError`` if a claimed bound or
        fullness fails."""
        metrics = simulate(dag, self.schedule)
        if len(metrics.covered) != dag.n:
            raise AssertionError(f"{self.strategy}: schedule is not full")
        if metrics.peak > self.space_bound:
            raise AssertionError(
                f"{self.strategy}: peak {metrics.peak} exceeds bound {self.space_bound}"
            )
        if self.move_bound is not None and metrics.moves > self.move_bound:
            raise AssertionError(
                f"{self.strategy}: {metrics.moves} moves exceed bound {self.move_bound}"
            )
        return metrics

    def to_json(self, metrics: PebbleMetrics | None = None) -> dict:
        return {
            "strategy": self.strategy,
            "params": {k: _plain(v) for k, v in self.params.items()},
            "S_bound": self.space_bound,
            "T_bound": self.move_bound,
            "peak": metrics.peak if metrics else None,
            "moves": metrics.moves if metrics else None,
        }

    def dumps(self, metrics: PebbleMetrics | None = None) -> str:
        return json.dumps(self.to_json(metrics))


def _plain(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    return str(value)
