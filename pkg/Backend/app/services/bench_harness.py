import csv
import logging
import sys
from collections.abc import Sequence
from typing import Protocol, TextIO

from app.core.config import get_settings
from app.core.errors import ConfigError, IntervalBenchError
from app.models.harness import (
    AlgorithmName,
    HarnessConfig,
    MetricsRecord,
    MetricsSummary,
    OutputFormat,
    RunResult,
)
from app.models.interval import Interval
from app.services.cp_engine import CabelloPerezEngine
from app.services.exact_oracle import WindowBuffer
from app.services.improved_window import ImprovedWindow
from app.services.smooth_histogram import RunStack
from app.services.stream_source import load_stream
from app.services.unit_window import UnitWindow

logger = logging.getLogger(__name__)

CSV_HEADER = ("step", "alg_size", "opt_size", "ratio", "stored_intervals", "run_count")


class WindowAlgorithm(Protocol):
    def observe(self, interval: Interval) -> None: ...

    def solution_size(self) -> int: ...

    def stored_count(self) -> int: ...

    def run_count(self) -> int: ...

    def check_invariants(self) -> None: ...


class UnitAdapter:
    def __init__(self, window: int) -> None:
        self.engine = UnitWindow(window)

    def observe(self, interval: Interval) -> None:
        self.engine.observe(interval)

    def solution_size(self) -> int:
        return len(self.engine.solution())

    def stored_count(self) -> int:
        return self.engine.stored_count()

    def run_count(self) -> int:
        return 1

    def check_invariants(self) -> None:
        self.engine.check_invariants()


class CPAdapter:
    """Whole-stream CP run; it never forgets, so its oracle covers every interval seen."""

    def __init__(self, config: HarnessConfig) -> None:
        self.engine = CabelloPerezEngine(split_rule=config.split_rule)

    def observe(self, interval: Interval) -> None:
        self.engine.process(interval)

    def solution_size(self) -> int:
        return self.engine.solution_size()

    def stored_count(self) -> int:
        return self.engine.stored_count()

    def run_count(self) -> int:
        return 1

    def check_invariants(self) -> None:
        self.engine.check_invariants()


class SmoothAdapter:
    def __init__(self, config: HarnessConfig) -> None:
        self.stack = RunStack(window=config.window, beta=config.effective_beta, split_rule=config.split_rule)

    def observe(self, interval: Interval) -> None:
        self.stack.observe(interval)

    def solution_size(self) -> int:
        return len(self.stack.output())

    def stored_count(self) -> int:
        return self.stack.stored_count()

    def run_count(self) -> int:
        return self.stack.run_count

    def check_invariants(self) -> None:
        self.stack.check_invariants()


class ImprovedAdapter:
    def __init__(self, config: HarnessConfig) -> None:
        self.engine = ImprovedWindow(window=config.window, delta=config.delta, split_rule=config.split_rule)

    def observe(self, interval: Interval) -> None:
        self.engine.observe(interval)

    def solution_size(self) -> int:
        return len(self.engine.output())

    def stored_count(self) -> int:
        return self.engine.stored_count()

    def run_count(self) -> int:
        return self.engine.run_count

    def check_invariants(self) -> None:
        self.engine.check_invariants()


class OracleAdapter:
    def __init__(self, window: int) -> None:
        self.buffer = WindowBuffer(window)

    def observe(self, interval: Interval) -> None:
        self.buffer.push(interval)

    def solution_size(self) -> int:
        return self.buffer.window_opt_size()

    def stored_count(self) -> int:
        return len(self.buffer)

    def run_count(self) -> int:
        return 1

    def check_invariants(self) -> None:
        return None


def build_algorithm(config: HarnessConfig) -> WindowAlgorithm:
    match config.algorithm:
        case AlgorithmName.unit:
            return UnitAdapter(config.window)
        case AlgorithmName.cp:
            return CPAdapter(config)
        case AlgorithmName.smooth:
            return SmoothAdapter(config)
        case AlgorithmName.improved:
            return ImprovedAdapter(config)
        case AlgorithmName.oracle:
            return OracleAdapter(config.window)
    raise ValueError(f"unsupported algorithm {config.algorithm}")


def oracle_capacity(config: HarnessConfig, stream_length: int) -> int:
    if config.algorithm == AlgorithmName.cp:
        return max(stream_length, 1)
    return config.window


def resolve_oracle(config: HarnessConfig, stream_length: int) -> bool:
    if config.algorithm == AlgorithmName.oracle:
        return False
    if config.oracle_enabled is not None:
        return config.oracle_enabled
    limit = get_settings().oracle_max_window
    capacity = oracle_capacity(config, stream_length)
    if capacity > limit:
        logger.warning("oracle disabled: window of %s exceeds the limit of %s", capacity, limit)
        return False
    return True


def _ratio(opt_size: int | None, alg_size: int) -> float | None:
    if opt_size is None or alg_size <= 0:
        return None
    return opt_size / alg_size


def run_harness(config: HarnessConfig, intervals: Sequence[Interval] | None = None) -> RunResult:
    """Drive one configured algorithm over its stream, sampling metrics as it goes."""
    if intervals is None:
        intervals = load_stream(config.stream)
    if config.beta_overridden:
        logger.warning("improved runs use beta = delta/2 = %s; ignoring beta = %s", config.effective_beta, config.beta)

    algorithm = build_algorithm(config)
    oracle_on = resolve_oracle(config, len(intervals))
    oracle = WindowBuffer(oracle_capacity(config, len(intervals))) if oracle_on else None
    if config.algorithm == AlgorithmName.oracle:
        oracle_on = True

    logger.info(
        "running %s over %s intervals (window=%s, oracle=%s)",
        config.algorithm.value,
        len(intervals),
        config.window,
        oracle_on,
    )

    summary = MetricsSummary(oracle_enabled=oracle_on)
    records: list[MetricsRecord] = []
    total = len(intervals)
    for interval in intervals:
        algorithm.observe(interval)
        if oracle is not None:
            oracle.push(interval)
        if config.check_invariants:
            algorithm.check_invariants()

        step = interval.arrival_index + 1
        sampled = step % config.sample_every == 0
        if not sampled and step != total:
            continue

        alg_size = algorithm.solution_size()
        if config.algorithm == AlgorithmName.oracle:
            opt_size: int | None = alg_size
        else:
            opt_size = oracle.window_opt_size() if oracle is not None else None
        record = MetricsRecord(
            step=step,
            alg_size=alg_size,
            opt_size=opt_size,
            ratio=_ratio(opt_size, alg_size),
            stored_intervals=algorithm.stored_count(),
            run_count=algorithm.run_count(),
        )
        summary.absorb(record)
        if sampled:
            records.append(record)

    logger.info("finished after %s steps, max ratio %s", summary.step, summary.max_ratio)
    return RunResult(config=config, summary=summary, records=records)


def _format_ratio(ratio: float | None) -> str:
    return "" if ratio is None else f"{ratio:.6f}"


def write_csv(result: RunResult, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for record in result.records:
        writer.writerow(
            [
                record.step,
                record.alg_size,
                "" if record.opt_size is None else record.opt_size,
                _format_ratio(record.ratio),
                record.stored_intervals,
                record.run_count,
            ]
        )
    summary = result.summary
    stream.write(
        f"#summary,step={summary.step},max_ratio={_format_ratio(summary.max_ratio)},"
        f"max_stored_intervals={summary.max_stored_intervals},max_run_count={summary.max_run_count}\n"
    )


def write_jsonl(result: RunResult, stream: TextIO) -> None:
    for record in result.records:
        stream.write(record.model_dump_json() + "\n")
    stream.write('{"summary":' + result.summary.model_dump_json() + "}\n")


def write_result(result: RunResult, stream: TextIO) -> None:
    if result.config.output_format == OutputFormat.jsonl:
        write_jsonl(result, stream)
    else:
        write_csv(result, stream)


def emit(result: RunResult) -> None:
    path = result.config.output_path
    if path is None:
        write_result(result, sys.stdout)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        write_result(result, handle)


def run(config: HarnessConfig) -> tuple[int, RunResult | None]:
    """Run and emit; returns the process exit status and the result when successful."""
    try:
        result = run_harness(config)
        emit(result)
    except IntervalBenchError as exc:
        logger.error("%s failed: %s", type(exc).__name__, exc.message)
        return exc.exit_code, None
    except OSError as exc:
        logger.error("cannot write metrics: %s", exc)
        return ConfigError.exit_code, None
    return 0, result
