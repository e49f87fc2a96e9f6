import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from app.core.errors import InvariantViolationError, StreamOrderError
from app.models.interval import Interval, IntervalSet, SplitRule
from app.services.cp_engine import CabelloPerezEngine

if TYPE_CHECKING:
    from app.services.improved_window import AssociatedRunSet

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class Run:
    start_index: int
    engine: CabelloPerezEngine
    associated: "AssociatedRunSet | None" = None
    # (predecessor size, own size) when this run became adjacent to its current predecessor.
    linked_sizes: tuple[int, int] | None = None

    def size(self) -> int:
        return self.engine.solution_size()

    def stored_count(self) -> int:
        stored = self.engine.stored_count()
        if self.associated is not None:
            stored += self.associated.stored_count()
        return stored


@dataclass(frozen=True)
class AdjacencyEvent:
    predecessor: Run
    successor: Run


def run_count_bound(window: int, beta: float) -> int:
    return 2 * math.ceil(math.log(window) / math.log1p(beta)) + 4


@dataclass
class RunStack:
    """Smooth histogram over CP runs with staggered starts, oldest first."""

    window: int
    beta: float
    split_rule: SplitRule = SplitRule.witness
    time: int = 0
    runs: list[Run] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.window < 2:
            raise ValueError("window must be at least 2")
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    @property
    def run_count(self) -> int:
        return len(self.runs)

    def _absorbs(self, older: Run, newer: Run) -> bool:
        return older.size() <= (1 + self.beta) * newer.size()

    def _adjacent_pairs(self) -> set[tuple[int, int]]:
        return {
            (self.runs[index].start_index, self.runs[index + 1].start_index)
            for index in range(len(self.runs) - 1)
        }

    def _new_adjacencies(self, before: set[tuple[int, int]]) -> list[AdjacencyEvent]:
        events: list[AdjacencyEvent] = []
        for index in range(len(self.runs) - 1):
            predecessor, successor = self.runs[index], self.runs[index + 1]
            if (predecessor.start_index, successor.start_index) in before:
                continue
            successor.linked_sizes = (predecessor.size(), successor.size())
            events.append(AdjacencyEvent(predecessor=predecessor, successor=successor))
        return events

    def observe(self, interval: Interval) -> list[AdjacencyEvent]:
        """Feed one arrival; returns the run pairs that became adjacent during this step."""
        if interval.arrival_index != self.time:
            raise StreamOrderError(self.time, interval.arrival_index)

        before = self._adjacent_pairs()
        self.runs.append(Run(start_index=self.time, engine=CabelloPerezEngine(split_rule=self.split_rule)))
        for run in self.runs:
            run.engine.process(interval)

        window_start = self.time + 1 - self.window
        if self.runs[0].start_index < window_start:
            expired = self.runs.pop(0)
            logger.debug("run started at %s expired at t=%s", expired.start_index, self.time)
            if self.runs and self.runs[0].start_index < window_start:
                raise InvariantViolationError("smooth_histogram", f"more than one run expired at t={self.time}")

        self._cleanup()
        self.time += 1
        return self._new_adjacencies(before)

    def _cleanup(self) -> None:
        index = 0
        while index < len(self.runs) - 1:
            anchor = self.runs[index]
            target = None
            for candidate in range(len(self.runs) - 1, index, -1):
                if self._absorbs(anchor, self.runs[candidate]):
                    target = candidate
                    break
            if target is not None and target > index + 1:
                logger.debug(
                    "clean-up drops %s runs between starts %s and %s",
                    target - index - 1,
                    anchor.start_index,
                    self.runs[target].start_index,
                )
                del self.runs[index + 1:target]
            index += 1

    def cleanup(self) -> list[AdjacencyEvent]:
        before = self._adjacent_pairs()
        self._cleanup()
        return self._new_adjacencies(before)

    def oldest(self) -> Run | None:
        return self.runs[0] if self.runs else None

    def output(self) -> IntervalSet:
        oldest = self.oldest()
        return oldest.engine.solution() if oldest is not None else []

    def stored_count(self) -> int:
        return sum(run.stored_count() for run in self.runs)

    def check_invariants(self, deep: bool = False) -> None:
        runs = self.runs
        starts = [run.start_index for run in runs]
        if any(later <= earlier for earlier, later in zip(starts, starts[1:])):
            raise InvariantViolationError("smooth_histogram", f"run starts not strictly increasing: {starts}")
        if runs and starts[-1] != self.time - 1:
            raise InvariantViolationError("smooth_histogram", f"newest run starts at {starts[-1]}, expected {self.time - 1}")
        if runs and starts[0] < self.time - self.window:
            raise InvariantViolationError("smooth_histogram", f"expired run started at {starts[0]} still stored")

        for index in range(len(runs) - 2):
            if self._absorbs(runs[index], runs[index + 2]):
                raise InvariantViolationError(
                    "smooth_histogram",
                    f"S1 fails for runs {starts[index]} and {starts[index + 2]}: "
                    f"{runs[index].size()} <= (1+{self.beta})*{runs[index + 2].size()}",
                )
        for index in range(len(runs) - 1):
            successor = runs[index + 1]
            if successor.start_index == runs[index].start_index + 1:
                continue
            if successor.linked_sizes is None:
                raise InvariantViolationError("smooth_histogram", f"run {successor.start_index} has no adjacency record")
            older_size, newer_size = successor.linked_sizes
            if older_size > (1 + self.beta) * newer_size:
                raise InvariantViolationError(
                    "smooth_histogram",
                    f"S2 fails for runs {starts[index]} and {successor.start_index}: {older_size} vs {newer_size}",
                )

        bound = run_count_bound(self.window, self.beta)
        if len(runs) > bound:
            raise InvariantViolationError("smooth_histogram", f"{len(runs)} runs exceed the bound {bound}")

        if deep:
            for run in runs:
                run.engine.check_invariants()
