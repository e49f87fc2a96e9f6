import logging
from dataclasses import dataclass, field
from enum import Enum

from app.core.errors import InvariantViolationError
from app.models.interval import BoundaryOwner, Domain, Interval, IntervalSet, RegionView, SplitRule
from app.services.cp_engine import CabelloPerezEngine, locate_point
from app.services.interval_core import is_independent
from app.services.smooth_histogram import Run, RunStack

logger = logging.getLogger(__name__)


class Placement(str, Enum):
    inside = "inside"
    crossing = "crossing"


@dataclass(frozen=True)
class ClassifiedInterval:
    interval: Interval
    placement: Placement
    # Region holding the left endpoint; for ``inside`` also the right one.
    left_region: int
    right_region: int


@dataclass
class AdjacencySnapshot:
    """Predecessor regions and successor solution frozen at adjacency time."""

    regions: list[RegionView]
    solution: list[ClassifiedInterval] = field(default_factory=list)

    def __post_init__(self) -> None:
        self._positions = [view.domain.high for view in self.regions[:-1]]
        self._owners = [
            BoundaryOwner.left_region if view.domain.high_closed else BoundaryOwner.right_region
            for view in self.regions[:-1]
        ]

    @property
    def region_count(self) -> int:
        return len(self.regions)

    def locate(self, point: float) -> int:
        return locate_point(self._positions, self._owners, point)

    def classify(self, interval: Interval) -> ClassifiedInterval:
        left_region = self.locate(interval.left)
        right_region = self.locate(interval.right)
        placement = Placement.inside if left_region == right_region else Placement.crossing
        return ClassifiedInterval(interval, placement, left_region, right_region)

    def inside_fallback(self, region: int) -> Interval | None:
        for item in self.solution:
            if item.placement == Placement.inside and item.left_region == region:
                return item.interval
        return None

    def crossing_fallback(self, left_region: int) -> Interval | None:
        # Only intervals crossing exactly the one shared boundary fit the merged domain.
        for item in self.solution:
            if (
                item.placement == Placement.crossing
                and item.left_region == left_region
                and item.right_region == left_region + 1
            ):
                return item.interval
        return None


class AssociatedRunSet:
    """Domain-restricted CP runs on each snapshot region and each consecutive pair.

    Engines are created on first use; an engine that never saw an interval
    behaves exactly like a fresh one.
    """

    def __init__(self, snapshot: AdjacencySnapshot, split_rule: SplitRule = SplitRule.witness) -> None:
        self.snapshot = snapshot
        self.split_rule = split_rule
        self.singles: dict[int, CabelloPerezEngine] = {}
        self.pairs: dict[int, CabelloPerezEngine] = {}

    @property
    def single_count(self) -> int:
        return self.snapshot.region_count

    @property
    def pair_count(self) -> int:
        return max(self.snapshot.region_count - 1, 0)

    def single_domain(self, region: int) -> Domain:
        return self.snapshot.regions[region].domain

    def pair_domain(self, region: int) -> Domain:
        return self.single_domain(region).merge(self.single_domain(region + 1))

    def _single(self, region: int) -> CabelloPerezEngine:
        engine = self.singles.get(region)
        if engine is None:
            engine = CabelloPerezEngine(split_rule=self.split_rule, domain=self.single_domain(region))
            self.singles[region] = engine
        return engine

    def _pair(self, region: int) -> CabelloPerezEngine:
        engine = self.pairs.get(region)
        if engine is None:
            engine = CabelloPerezEngine(split_rule=self.split_rule, domain=self.pair_domain(region))
            self.pairs[region] = engine
        return engine

    def feed(self, interval: Interval) -> int:
        """Process ``interval`` in every engine whose domain contains it; returns how many."""
        left_region = self.snapshot.locate(interval.left)
        right_region = self.snapshot.locate(interval.right)
        targets: list[CabelloPerezEngine] = []
        if left_region == right_region:
            targets.append(self._single(left_region))
            if left_region > 0:
                targets.append(self._pair(left_region - 1))
            if left_region < self.pair_count:
                targets.append(self._pair(left_region))
        elif right_region == left_region + 1:
            targets.append(self._pair(left_region))

        for engine in targets:
            engine.process(interval)
        return len(targets)

    def single_solution(self, region: int) -> IntervalSet:
        engine = self.singles.get(region)
        return engine.solution() if engine is not None else []

    def pair_solution(self, region: int) -> IntervalSet:
        engine = self.pairs.get(region)
        return engine.solution() if engine is not None else []

    def singles_candidate(self) -> IntervalSet:
        chosen: IntervalSet = []
        for region in range(self.single_count):
            solution = self.single_solution(region)
            if solution:
                chosen.extend(solution)
                continue
            fallback = self.snapshot.inside_fallback(region)
            if fallback is not None:
                chosen.append(fallback)
        return chosen

    def pairs_candidate(self, parity: int) -> IntervalSet:
        chosen: IntervalSet = []
        if parity == 1 and self.single_count > 0:
            chosen.extend(self.single_solution(0))
        region = parity
        while region < self.single_count:
            if region + 1 >= self.single_count:
                chosen.extend(self.single_solution(region))
                break
            solution = self.pair_solution(region)
            if solution:
                chosen.extend(solution)
            else:
                fallback = self.snapshot.crossing_fallback(region)
                if fallback is not None:
                    chosen.append(fallback)
            region += 2
        return chosen

    def candidates(self) -> list[IntervalSet]:
        return [self.singles_candidate(), self.pairs_candidate(0), self.pairs_candidate(1)]

    def stored_count(self) -> int:
        engines = [*self.singles.values(), *self.pairs.values()]
        return sum(engine.stored_count() for engine in engines)

    def check_invariants(self) -> None:
        for region, engine in self.singles.items():
            engine.check_invariants()
            if not all(self.single_domain(region).contains(item) for item in engine.solution()):
                raise InvariantViolationError("improved_window", f"single run {region} escaped its domain")
        for region, engine in self.pairs.items():
            engine.check_invariants()
            if not all(self.pair_domain(region).contains(item) for item in engine.solution()):
                raise InvariantViolationError("improved_window", f"pair run {region} escaped its domain")


def on_adjacency(predecessor: Run, successor: Run, split_rule: SplitRule = SplitRule.witness) -> AssociatedRunSet:
    snapshot = AdjacencySnapshot(regions=predecessor.engine.region_views())
    snapshot.solution = [snapshot.classify(interval) for interval in successor.engine.solution()]
    associated = AssociatedRunSet(snapshot, split_rule=split_rule)
    successor.associated = associated
    logger.debug(
        "run %s now follows run %s: %s regions, %s snapshot intervals",
        successor.start_index,
        predecessor.start_index,
        snapshot.region_count,
        len(snapshot.solution),
    )
    return associated


def feed_associated(associated: AssociatedRunSet, interval: Interval) -> int:
    return associated.feed(interval)


def assemble_output(oldest: Run) -> IntervalSet:
    best = oldest.engine.solution()
    if oldest.associated is None:
        return best
    for candidate in oldest.associated.candidates():
        if len(candidate) > len(best):
            best = candidate
    return best


class ImprovedWindow:
    """Smooth histogram whose runs carry associated runs over their predecessor's regions."""

    def __init__(self, window: int, delta: float, split_rule: SplitRule = SplitRule.witness) -> None:
        if delta <= 0:
            raise ValueError("delta must be positive")
        self.delta = delta
        self.split_rule = split_rule
        self.stack = RunStack(window=window, beta=delta / 2, split_rule=split_rule)

    @property
    def beta(self) -> float:
        return self.stack.beta

    @property
    def run_count(self) -> int:
        return self.stack.run_count

    def observe(self, interval: Interval) -> None:
        for run in self.stack.runs:
            if run.associated is not None:
                run.associated.feed(interval)
        for event in self.stack.observe(interval):
            on_adjacency(event.predecessor, event.successor, split_rule=self.split_rule)

    def output(self) -> IntervalSet:
        oldest = self.stack.oldest()
        return assemble_output(oldest) if oldest is not None else []

    def baseline_output(self) -> IntervalSet:
        return self.stack.output()

    def stored_count(self) -> int:
        return self.stack.stored_count()

    def check_invariants(self, deep: bool = False) -> None:
        self.stack.check_invariants(deep=deep)
        if not deep:
            return
        for run in self.stack.runs:
            if run.associated is not None:
                run.associated.check_invariants()
        if not is_independent(self.output()):
            raise InvariantViolationError("improved_window", "assembled output is not independent")
