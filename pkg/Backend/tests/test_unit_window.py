import pytest

from app.core.errors import InvariantViolationError, NonUnitIntervalError, StreamOrderError
from app.models.interval import Interval
from app.services.exact_oracle import WindowBuffer
from app.services.gadget_generators import RandomKind, gen_random
from app.services.unit_window import UnitWindow, is_unit
from tests.support import make_stream


def test_later_interval_overwrites_its_slot():
    window = UnitWindow(100)
    for interval in make_stream([(0, 1), (0.5, 1.5)]):
        window.observe(interval)
    assert window.slots[0].left == 0.5
    assert window.stored_count() == 1


def test_three_interval_example():
    window = UnitWindow(3)
    for interval in make_stream([(0, 1), (0.5, 1.5), (2, 3)]):
        window.observe(interval)
    assert {slot: (item.left, item.right) for slot, item in window.slots.items()} == {0: (0.5, 1.5), 2: (2, 3)}
    assert len(window.solution()) == 2


def test_empty_window_has_empty_solution():
    assert UnitWindow(5).solution() == []


def test_adjacent_slots_keep_every_other_interval():
    window = UnitWindow(10)
    for interval in make_stream([(0.5, 1.5), (1.2, 2.2), (2.1, 3.1)]):
        window.observe(interval)
    assert window.stored_count() == 3
    assert [item.left for item in window.solution()] == [0.5, 2.1]


def test_slot_expires_with_its_interval():
    window = UnitWindow(2)
    for interval in make_stream([(0, 1), (5, 6), (7, 8)]):
        window.observe(interval)
    assert sorted(window.slots) == [5, 7]
    window.check_invariants()


def test_overwritten_slot_is_not_expired_early():
    window = UnitWindow(2)
    for interval in make_stream([(0, 1), (0.5, 1.5), (7, 8)]):
        window.observe(interval)
    # Arrival 0 expired, but slot 0 now holds arrival 1.
    assert sorted(window.slots) == [0, 7]


def test_non_unit_interval_is_rejected():
    window = UnitWindow(3)
    with pytest.raises(NonUnitIntervalError):
        window.observe(Interval(left=0, right=2))


def test_out_of_order_arrival_is_rejected():
    window = UnitWindow(3)
    with pytest.raises(StreamOrderError):
        window.observe(Interval(left=0, right=1, arrival_index=4))


def test_unit_check_tolerates_rounding():
    assert is_unit(Interval(left=0.1, right=0.1 + 1))
    assert not is_unit(Interval(left=0, right=1.001))


def test_check_invariants_detects_misfiled_slot():
    window = UnitWindow(3)
    window.observe(Interval(left=0, right=1))
    window._slots[4] = window._slots.pop(0)
    window._slot_by_arrival[0] = 4
    with pytest.raises(InvariantViolationError):
        window.check_invariants()


@pytest.mark.parametrize("seed", range(50))
def test_two_approximation_on_random_unit_streams(seed):
    stream = gen_random(RandomKind.unit, 2000, low=0, high=100, seed=seed)
    window = UnitWindow(200)
    oracle = WindowBuffer(200)
    for interval in stream:
        window.observe(interval)
        oracle.push(interval)
        window.check_invariants()
        opt = oracle.window_opt_size()
        solution_size = len(window.solution())
        stored = window.stored_count()
        assert opt <= stored <= 2 * solution_size
        assert solution_size <= stored
        assert stored <= 2 * opt
