import pytest

from app.core.errors import InvariantViolationError, StreamOrderError
from app.models.interval import Interval
from app.services.cp_engine import CabelloPerezEngine
from app.services.exact_oracle import WindowBuffer
from app.services.gadget_generators import RandomKind, gen_appendix_hard, gen_chain3, gen_random, gen_unit_index
from app.services.smooth_histogram import Run, RunStack, run_count_bound
from tests.support import make_stream

DISJOINT = [(0, 1), (2, 3), (4, 5), (6, 7)]


def _run_with_size(start_index: int, size: int) -> Run:
    engine = CabelloPerezEngine()
    for offset in range(size):
        engine.process(Interval(left=3 * offset, right=3 * offset + 1))
    return Run(start_index=start_index, engine=engine)


def test_disjoint_stream_cleanup_drops_middle_run():
    stack = RunStack(window=4, beta=1.0)
    for interval in make_stream(DISJOINT):
        stack.observe(interval)
        stack.check_invariants(deep=True)
    assert [run.start_index for run in stack.runs] == [0, 2, 3]
    assert [run.size() for run in stack.runs] == [4, 2, 1]
    assert len(stack.output()) == 4


def test_single_interval_makes_one_run():
    stack = RunStack(window=4, beta=0.5)
    stack.observe(Interval(left=0, right=1))
    assert stack.run_count == 1
    assert len(stack.output()) == 1


def test_empty_stack_outputs_nothing():
    stack = RunStack(window=4, beta=0.5)
    assert stack.oldest() is None
    assert stack.output() == []


def test_oldest_run_expires():
    stack = RunStack(window=2, beta=1.0)
    for interval in make_stream(DISJOINT[:3]):
        stack.observe(interval)
    assert stack.runs[0].start_index == 1
    stack.check_invariants()


def test_cleanup_deletes_up_to_the_last_absorbed_run():
    stack = RunStack(window=10, beta=1.0, time=4)
    stack.runs = [_run_with_size(start, size) for start, size in enumerate((4, 3, 2, 1))]
    events = stack.cleanup()
    assert [run.size() for run in stack.runs] == [4, 2, 1]
    assert [(event.predecessor.start_index, event.successor.start_index) for event in events] == [(0, 2)]
    assert stack.runs[1].linked_sizes == (4, 2)


def test_cleanup_keeps_already_adjacent_runs():
    stack = RunStack(window=10, beta=1.0, time=2)
    stack.runs = [_run_with_size(0, 2), _run_with_size(1, 1)]
    assert stack.cleanup() == []
    assert stack.run_count == 2


def test_cleanup_on_single_run_is_noop():
    stack = RunStack(window=10, beta=1.0, time=1)
    stack.runs = [_run_with_size(0, 3)]
    stack.cleanup()
    assert stack.run_count == 1


def test_observe_reports_new_adjacencies():
    stack = RunStack(window=10, beta=1.0)
    streams = make_stream(DISJOINT)
    events = [stack.observe(interval) for interval in streams]
    assert [(event.predecessor.start_index, event.successor.start_index) for event in events[0]] == []
    assert [(event.predecessor.start_index, event.successor.start_index) for event in events[1]] == [(0, 1)]
    assert (0, 2) in [(event.predecessor.start_index, event.successor.start_index) for event in events[3]]


def test_out_of_order_arrival_is_rejected():
    stack = RunStack(window=4, beta=1.0)
    with pytest.raises(StreamOrderError):
        stack.observe(Interval(left=0, right=1, arrival_index=1))


def test_check_invariants_flags_s1_violation():
    stack = RunStack(window=10, beta=1.0, time=3)
    stack.runs = [_run_with_size(start, size) for start, size in enumerate((2, 2, 2))]
    with pytest.raises(InvariantViolationError):
        stack.check_invariants()


@pytest.mark.parametrize(("window", "beta", "bound"), [(4, 1.0, 8), (512, 0.1, 136)])
def test_run_count_bound(window, beta, bound):
    assert run_count_bound(window, beta) == bound


def _invariant_streams():
    for seed in range(4):
        yield gen_random(RandomKind.arbitrary, 1500, seed=seed)
        yield gen_random(RandomKind.unit, 1500, seed=100 + seed)
    yield gen_random(RandomKind.arbitrary, 1500, high=1000, max_length=5, seed=42)
    yield gen_appendix_hard(30).concatenated()
    bits = [index % 2 for index in range(62)]
    yield gen_unit_index(bits, 17, 64)
    yield gen_chain3([1, 0] * 10 + [1], [0, 1] * 10 + [1], 1, 21, 65)


@pytest.mark.parametrize("stream", list(_invariant_streams()))
def test_invariants_hold_every_step(stream):
    stack = RunStack(window=512, beta=0.1)
    bound = run_count_bound(512, 0.1)
    for interval in stream:
        stack.observe(interval)
        stack.check_invariants()
        assert stack.run_count <= bound


@pytest.mark.parametrize("seed", range(6))
def test_baseline_ratio_on_random_streams(seed):
    beta = 0.1
    stack = RunStack(window=300, beta=beta)
    oracle = WindowBuffer(300)
    for interval in gen_random(RandomKind.arbitrary, 1200, seed=seed):
        stack.observe(interval)
        oracle.push(interval)
        opt = oracle.window_opt_size()
        size = len(stack.output())
        assert opt <= (4 + 2 * beta) * size + 2
        if size >= 5:
            assert opt / size <= 4.45
