import logging
import math
from bisect import bisect_left
from dataclasses import dataclass
from enum import Enum

from sortedcontainers import SortedDict

from app.core.errors import InvariantViolationError
from app.models.interval import BoundaryOwner, Domain, Interval, IntervalSet, RegionView, SplitRule
from app.services.interval_core import intersects

logger = logging.getLogger(__name__)


class ProcessOutcome(str, Enum):
    outside_domain = "outside_domain"
    crossing = "crossing"
    seeded = "seeded"
    updated = "updated"
    split = "split"
    # Interval dropped without a split. It stays disjoint from its region's witness,
    # so observed intervals in that region no longer all pairwise intersect.
    degenerate = "degenerate"


@dataclass(slots=True)
class _Region:
    leftmost: Interval | None = None
    rightmost: Interval | None = None

    @property
    def stored(self) -> int:
        if self.leftmost is None:
            return 0
        return 1 if self.leftmost is self.rightmost else 2


def locate_point(positions: list[float], owners: list[BoundaryOwner], point: float) -> int:
    """Index of the region containing ``point`` given sorted boundary data."""
    index = bisect_left(positions, point)
    if index < len(positions) and positions[index] == point and owners[index] == BoundaryOwner.right_region:
        index += 1
    return index


class CabelloPerezEngine:
    """Streaming 2-approximation over a region partition of the line.

    Each region keeps a leftmost and a rightmost witness. Intervals crossing a
    boundary are ignored; intervals disjoint from a witness split the region.
    With ``domain`` set, intervals not contained in it are ignored entirely.
    """

    def __init__(self, split_rule: SplitRule = SplitRule.witness, domain: Domain | None = None) -> None:
        self.split_rule = split_rule
        self.domain = domain
        self.processed_count = 0
        self._boundaries: SortedDict = SortedDict()
        self._regions: list[_Region] = [_Region()]
        self._solution_size = 0
        self._stored = 0

    def __repr__(self) -> str:
        return (
            f"CabelloPerezEngine(regions={len(self._regions)}, solution={self._solution_size}, "
            f"domain={self.domain})"
        )

    @property
    def region_count(self) -> int:
        return len(self._regions)

    def solution_size(self) -> int:
        return self._solution_size

    def stored_count(self) -> int:
        return self._stored

    def locate(self, point: float) -> int:
        index = self._boundaries.bisect_left(point)
        if index < len(self._boundaries):
            position, owner = self._boundaries.peekitem(index)
            if position == point and owner == BoundaryOwner.right_region:
                index += 1
        return index

    def region_of(self, interval: Interval) -> int | None:
        index = self.locate(interval.left)
        return index if self.locate(interval.right) == index else None

    def process(self, interval: Interval) -> ProcessOutcome:
        if self.domain is not None and not self.domain.contains(interval):
            return ProcessOutcome.outside_domain
        self.processed_count += 1

        index = self.region_of(interval)
        if index is None:
            return ProcessOutcome.crossing

        region = self._regions[index]
        leftmost, rightmost = region.leftmost, region.rightmost
        if leftmost is None or rightmost is None:
            region.leftmost = region.rightmost = interval
            self._solution_size += 1
            self._stored += 1
            return ProcessOutcome.seeded

        if max(interval.left, leftmost.left, rightmost.left) <= min(interval.right, leftmost.right, rightmost.right):
            before = region.stored
            if interval.right <= leftmost.right:
                region.leftmost = interval
            if interval.left >= rightmost.left:
                region.rightmost = interval
            self._stored += region.stored - before
            return ProcessOutcome.updated

        if self._split(index, interval):
            return ProcessOutcome.split
        return ProcessOutcome.degenerate

    def _split(self, index: int, interval: Interval) -> bool:
        region = self._regions[index]
        leftmost, rightmost = region.leftmost, region.rightmost
        assert leftmost is not None and rightmost is not None

        if interval.right < rightmost.left:
            left_part, right_part = _Region(interval, interval), _Region(rightmost, rightmost)
            candidates = {
                SplitRule.witness: (rightmost.left, BoundaryOwner.right_region),
                SplitRule.arriving: (interval.right, BoundaryOwner.left_region),
            }
        else:
            left_part, right_part = _Region(leftmost, leftmost), _Region(interval, interval)
            candidates = {
                SplitRule.witness: (leftmost.right, BoundaryOwner.left_region),
                SplitRule.arriving: (interval.left, BoundaryOwner.right_region),
            }

        # Only zero-length intervals on a closed region end can hit an existing boundary.
        fallback = SplitRule.arriving if self.split_rule == SplitRule.witness else SplitRule.witness
        for rule in (self.split_rule, fallback):
            position, owner = candidates[rule]
            if position not in self._boundaries:
                break
        else:
            logger.warning("cannot split region %s on %s: both boundaries collide", index, interval)
            return False

        self._stored += 2 - region.stored
        self._solution_size += 1
        self._boundaries[position] = owner
        self._regions[index] = left_part
        self._regions.insert(index + 1, right_part)
        logger.debug("split region %s at %s (%s owns it) on %s", index, position, owner.value, interval)
        return True

    def solution(self) -> IntervalSet:
        return [region.leftmost for region in self._regions if region.leftmost is not None]

    def region_domain(self, index: int) -> Domain:
        if index > 0:
            low, low_owner = self._boundaries.peekitem(index - 1)
            low_closed = low_owner == BoundaryOwner.right_region
        else:
            low, low_closed = -math.inf, False
        if index < len(self._boundaries):
            high, high_owner = self._boundaries.peekitem(index)
            high_closed = high_owner == BoundaryOwner.left_region
        else:
            high, high_closed = math.inf, False
        return Domain(low=low, high=high, low_closed=low_closed, high_closed=high_closed)

    def region_views(self) -> list[RegionView]:
        return [
            RegionView(domain=self.region_domain(index), leftmost=region.leftmost, rightmost=region.rightmost)
            for index, region in enumerate(self._regions)
        ]

    def check_invariants(self) -> None:
        if len(self._regions) != len(self._boundaries) + 1:
            raise InvariantViolationError("cp_engine", "region list does not match boundary list")

        non_virgin = 0
        stored = 0
        for index, region in enumerate(self._regions):
            leftmost, rightmost = region.leftmost, region.rightmost
            if (leftmost is None) != (rightmost is None):
                raise InvariantViolationError("cp_engine", f"region {index} has a single missing witness")
            if leftmost is None or rightmost is None:
                continue
            non_virgin += 1
            stored += region.stored
            domain = self.region_domain(index)
            if not (domain.contains(leftmost) and domain.contains(rightmost)):
                raise InvariantViolationError("cp_engine", f"region {index} {domain} does not contain its witnesses")
            if leftmost.right > rightmost.right or leftmost.left > rightmost.left:
                raise InvariantViolationError("cp_engine", f"region {index} witnesses are out of order")
            if not intersects(leftmost, rightmost):
                raise InvariantViolationError("cp_engine", f"region {index} witnesses are disjoint")

        if non_virgin != self._solution_size:
            raise InvariantViolationError("cp_engine", "solution size counter out of sync")
        if stored != self._stored:
            raise InvariantViolationError("cp_engine", "stored interval counter out of sync")
