import math
from collections.abc import Iterable

from app.models.interval import Interval, IntervalSet


def sort_key(interval: Interval) -> tuple[float, float, int]:
    return (interval.right, interval.left, interval.arrival_index)


def intersects(a: Interval, b: Interval) -> bool:
    # Closed intervals: a shared endpoint is an intersection.
    return max(a.left, b.left) <= min(a.right, b.right)


def is_independent(intervals: Iterable[Interval]) -> bool:
    ordered = sorted(intervals, key=lambda item: (item.left, item.right, item.arrival_index))
    last_right = -math.inf
    for interval in ordered:
        if interval.left <= last_right:
            return False
        last_right = interval.right
    return True


def greedy_from_sorted(ordered: Iterable[Interval]) -> IntervalSet:
    """Earliest-right-endpoint greedy over intervals already sorted by ``sort_key``."""
    chosen: IntervalSet = []
    last_right = -math.inf
    for interval in ordered:
        if interval.left > last_right:
            chosen.append(interval)
            last_right = interval.right
    return chosen


def max_independent_set(intervals: Iterable[Interval]) -> IntervalSet:
    return greedy_from_sorted(sorted(intervals, key=sort_key))


def max_independent_size(intervals: Iterable[Interval]) -> int:
    return len(max_independent_set(intervals))
