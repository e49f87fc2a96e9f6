from collections import deque

from sortedcontainers import SortedKeyList

from app.core.errors import StreamOrderError
from app.models.interval import Interval, IntervalSet
from app.services.interval_core import greedy_from_sorted, sort_key


class WindowBuffer:
    """Full contents of the last ``capacity`` intervals, for exact OPT.

    Keeps arrival order in a deque and the greedy order in a sorted list so a
    query is a single linear scan.
    """

    def __init__(self, capacity: int) -> None:
        if capacity < 1:
            raise ValueError("window capacity must be positive")
        self.capacity = capacity
        self.next_arrival_index = 0
        self._fifo: deque[Interval] = deque()
        self._by_right: SortedKeyList = SortedKeyList(key=sort_key)

    def __len__(self) -> int:
        return len(self._fifo)

    @property
    def contents(self) -> IntervalSet:
        return list(self._fifo)

    def push(self, interval: Interval) -> Interval | None:
        """Append ``interval``; returns the evicted interval if the window overflowed."""
        if interval.arrival_index != self.next_arrival_index:
            raise StreamOrderError(self.next_arrival_index, interval.arrival_index)

        self._fifo.append(interval)
        self._by_right.add(interval)
        self.next_arrival_index += 1

        if len(self._fifo) <= self.capacity:
            return None
        evicted = self._fifo.popleft()
        self._by_right.remove(evicted)
        return evicted

    def window_opt(self) -> IntervalSet:
        return greedy_from_sorted(self._by_right)

    def window_opt_size(self) -> int:
        return len(self.window_opt())

    def oldest_index(self) -> int:
        return self.next_arrival_index - len(self._fifo)
