import logging
import math

from sortedcontainers import SortedDict

from app.core.errors import InvariantViolationError, NonUnitIntervalError, StreamOrderError
from app.models.interval import Interval, IntervalSet
from app.services.interval_core import max_independent_set

logger = logging.getLogger(__name__)

UNIT_LENGTH_TOLERANCE = 1e-9


def is_unit(interval: Interval) -> bool:
    return abs(interval.length - 1.0) <= UNIT_LENGTH_TOLERANCE


class UnitWindow:
    """Sliding-window 2-approximation for unit intervals.

    One slot per integer ``r`` holds the most recent interval whose left
    endpoint floors to ``r``; the answer is the exact optimum over the slots.
    """

    def __init__(self, window: int) -> None:
        if window < 1:
            raise ValueError("window must be positive")
        self.window = window
        self.time = 0
        self._slots: SortedDict = SortedDict()
        self._slot_by_arrival: dict[int, int] = {}

    @property
    def slots(self) -> dict[int, Interval]:
        return dict(self._slots)

    def stored_count(self) -> int:
        return len(self._slots)

    def observe(self, interval: Interval) -> None:
        if interval.arrival_index != self.time:
            raise StreamOrderError(self.time, interval.arrival_index)
        if not is_unit(interval):
            raise NonUnitIntervalError(interval.left, interval.right)

        slot = math.floor(interval.left)
        replaced = self._slots.get(slot)
        if replaced is not None:
            del self._slot_by_arrival[replaced.arrival_index]
        self._slots[slot] = interval
        self._slot_by_arrival[interval.arrival_index] = slot

        expired_index = self.time - self.window
        expired_slot = self._slot_by_arrival.pop(expired_index, None)
        if expired_slot is not None:
            logger.debug("unit slot %s expired (arrival %s)", expired_slot, expired_index)
            del self._slots[expired_slot]

        self.time += 1

    def solution(self) -> IntervalSet:
        return max_independent_set(self._slots.values())

    def check_invariants(self) -> None:
        oldest_active = self.time - self.window
        for slot, interval in self._slots.items():
            if math.floor(interval.left) != slot:
                raise InvariantViolationError("unit_window", f"slot {slot} holds {interval}")
            if interval.arrival_index < oldest_active:
                raise InvariantViolationError("unit_window", f"expired interval {interval} still stored")
        if len(self._slot_by_arrival) != len(self._slots):
            raise InvariantViolationError("unit_window", "arrival index map out of sync with slots")
