import pytest
from hypothesis import given, settings
from pydantic import ValidationError

from app.models.interval import Interval
from app.services.gadget_generators import gen_appendix_hard
from app.services.interval_core import intersects, is_independent, max_independent_set, max_independent_size
from tests.support import brute_force_mis_size, interval_lists, make_stream


def test_interval_rejects_reversed_endpoints():
    with pytest.raises(ValidationError):
        Interval(left=2.0, right=1.0)


def test_interval_rejects_non_finite_endpoints():
    with pytest.raises(ValidationError):
        Interval(left=float("-inf"), right=1.0)


def test_touching_endpoints_intersect():
    a, b, c = make_stream([(0, 1), (1, 2), (1.5, 3)])
    assert intersects(a, b)
    assert not intersects(a, c)
    assert not is_independent([a, b])


def test_zero_length_interval_is_a_point():
    point, host = make_stream([(1, 1), (0, 2)])
    assert intersects(point, host)
    assert max_independent_size([point]) == 1


@pytest.mark.parametrize(
    ("bounds", "expected"),
    [
        ([], 0),
        ([(0, 10), (0, 1), (9, 10)], 2),
        ([(0, 1), (1, 2), (2, 3)], 2),
        ([(0, 1), (2, 3), (4, 5), (6, 7)], 4),
        ([(0, 5), (1, 2), (3, 4)], 2),
    ],
)
def test_max_independent_size_examples(bounds, expected):
    assert max_independent_size(make_stream(bounds)) == expected


def test_greedy_picks_earliest_right_endpoint():
    chosen = max_independent_set(make_stream([(0, 10), (0, 1), (9, 10)]))
    assert [(item.left, item.right) for item in chosen] == [(0, 1), (9, 10)]
    assert is_independent(chosen)


@settings(max_examples=500, deadline=None)
@given(interval_lists(max_size=12))
def test_greedy_matches_exhaustive_search(intervals):
    chosen = max_independent_set(intervals)
    assert is_independent(chosen)
    assert len(chosen) == brute_force_mis_size(intervals)


@settings(max_examples=200, deadline=None)
@given(interval_lists())
def test_size_is_mirror_symmetric(intervals):
    mirrored = make_stream([(-item.right, -item.left) for item in intervals])
    assert max_independent_size(mirrored) == max_independent_size(intervals)


def test_appendix_optimum_family_is_disjoint():
    streams = gen_appendix_hard(3)
    a2 = streams.a[3:6]
    a3 = streams.a[6:9]
    c2 = streams.c[2:]
    family = [*a2, *a3, *c2]
    assert len(family) == 11
    assert is_independent(family)
    assert max_independent_size(streams.concatenated()) >= 11
