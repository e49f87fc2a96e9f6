from collections.abc import Sequence
from itertools import combinations

import hypothesis.strategies as st

from app.models.interval import Interval
from app.services.interval_core import is_independent


def brute_force_mis_size(intervals: Sequence[Interval]) -> int:
    for size in range(len(intervals), 0, -1):
        if any(is_independent(subset) for subset in combinations(intervals, size)):
            return size
    return 0


def make_stream(bounds: Sequence[tuple[float, float]]) -> list[Interval]:
    return [Interval(left=left, right=right, arrival_index=index) for index, (left, right) in enumerate(bounds)]


@st.composite
def interval_lists(draw, max_size: int = 15, coordinate_max: int = 30) -> list[Interval]:
    """Small integer-grid intervals so touching endpoints come up often."""
    count = draw(st.integers(min_value=0, max_value=max_size))
    bounds = []
    for _ in range(count):
        left = draw(st.integers(min_value=0, max_value=coordinate_max))
        length = draw(st.integers(min_value=0, max_value=8))
        bounds.append((float(left), float(left + length)))
    return make_stream(bounds)
