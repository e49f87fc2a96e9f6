"""Stream inputs for the harness: interval files and generator spec strings.

Spec strings look like ``kind:key=value,key=value``. Bit vectors are given
either as a binary string (``X=0110``, optionally ``0b``-prefixed) read left to
right as ``X[1], X[2], ...``, or as hex (``X=0x6f``) expanded four bits per
digit in the same reading order. Omitted bit vectors are drawn from ``seed``.
"""

import logging
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from app.core.errors import StreamError
from app.models.harness import StreamKind, StreamSpec
from app.models.interval import Interval
from app.services.gadget_generators import (
    RandomKind,
    chain3_size,
    gen_appendix_hard,
    gen_chain3,
    gen_random,
    gen_unit_index,
)

logger = logging.getLogger(__name__)

_ALLOWED_PARAMS: dict[StreamKind, set[str]] = {
    StreamKind.unit_index: {"L", "J", "X", "seed"},
    StreamKind.chain3: {"L", "J1", "J2", "X1", "X2", "bit", "seed"},
    StreamKind.appendix_hard: {"l", "parts"},
    StreamKind.random_unit: {"n", "range", "seed"},
    StreamKind.random_arbitrary: {"n", "range", "len", "seed"},
}


def parse_stream_file(path: str | Path) -> list[Interval]:
    file_path = Path(path)
    try:
        lines = file_path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise StreamError(f"cannot read stream file {file_path}: {exc}") from exc

    intervals: list[Interval] = []
    for line_number, raw_line in enumerate(lines, start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise StreamError(f"{file_path}:{line_number}: expected 'left right', got {raw_line!r}")
        try:
            left, right = float(fields[0]), float(fields[1])
            intervals.append(Interval(left=left, right=right, arrival_index=len(intervals)))
        except (ValueError, ValidationError) as exc:
            raise StreamError(f"{file_path}:{line_number}: invalid interval {raw_line!r}") from exc
    return intervals


def parse_stream_spec(text: str) -> StreamSpec:
    kind_text, _, param_text = text.strip().partition(":")
    try:
        kind = StreamKind(kind_text)
    except ValueError as exc:
        raise StreamError(f"unknown stream generator {kind_text!r}") from exc

    params: dict[str, str] = {}
    for item in filter(None, (part.strip() for part in param_text.split(","))):
        key, separator, value = item.partition("=")
        if not separator or not key or not value:
            raise StreamError(f"malformed generator parameter {item!r} in {text!r}")
        if key not in _ALLOWED_PARAMS[kind]:
            raise StreamError(f"unknown parameter {key!r} for {kind.value}")
        params[key] = value
    return StreamSpec(kind=kind, params=params)


def looks_like_spec(source: str) -> bool:
    kind_text = source.partition(":")[0]
    return kind_text in {kind.value for kind in StreamKind}


def _int_param(spec: StreamSpec, key: str, default: int | None = None) -> int:
    raw = spec.params.get(key)
    if raw is None:
        if default is None:
            raise StreamError(f"{spec.kind.value} requires parameter {key!r}")
        return default
    try:
        return int(raw, 0)
    except ValueError as exc:
        raise StreamError(f"parameter {key!r} must be an integer, got {raw!r}") from exc


def _range_param(spec: StreamSpec, key: str, default: tuple[float, float]) -> tuple[float, float]:
    raw = spec.params.get(key)
    if raw is None:
        return default
    low_text, separator, high_text = raw.partition("..")
    try:
        if not separator:
            raise ValueError(raw)
        return float(low_text), float(high_text)
    except ValueError as exc:
        raise StreamError(f"parameter {key!r} must look like 'low..high', got {raw!r}") from exc


def parse_bits(raw: str, length: int) -> list[int]:
    text = raw.strip().lower()
    if text.startswith("0x"):
        try:
            digits = [int(digit, 16) for digit in text[2:]]
        except ValueError as exc:
            raise StreamError(f"invalid hex bit vector {raw!r}") from exc
        bits = [(digit >> shift) & 1 for digit in digits for shift in (3, 2, 1, 0)]
        if len(bits) < length:
            raise StreamError(f"bit vector {raw!r} has fewer than {length} bits")
        return bits[:length]

    if text.startswith("0b"):
        text = text[2:]
    if any(char not in "01" for char in text):
        raise StreamError(f"invalid binary bit vector {raw!r}")
    if len(text) != length:
        raise StreamError(f"bit vector {raw!r} must have exactly {length} bits")
    return [int(char) for char in text]


def _bits_param(spec: StreamSpec, key: str, length: int, rng: np.random.Generator) -> list[int]:
    raw = spec.params.get(key)
    if raw is None:
        return [int(bit) for bit in rng.integers(0, 2, size=length)]
    return parse_bits(raw, length)


def _reindexed(intervals: list[Interval]) -> list[Interval]:
    return [
        interval.model_copy(update={"arrival_index": index})
        for index, interval in enumerate(intervals)
    ]


def expected_length(spec: StreamSpec) -> int:
    """Number of intervals ``build_stream`` would produce, computed from the parameters alone."""
    match spec.kind:
        case StreamKind.unit_index:
            return _int_param(spec, "L") - 1 + _int_param(spec, "J")
        case StreamKind.chain3:
            return _int_param(spec, "L") + 2 * (_int_param(spec, "J1") - 1)
        case StreamKind.appendix_hard:
            size = _int_param(spec, "l")
            part_sizes = {"a": 3 * size, "b": size, "c": 7 * size // 3}
            return sum(part_sizes.get(part, 0) for part in spec.params.get("parts", "abc").lower())
        case StreamKind.random_unit | StreamKind.random_arbitrary:
            return _int_param(spec, "n")
    raise StreamError(f"unsupported stream generator {spec.kind.value}")


def build_stream(spec: StreamSpec) -> list[Interval]:
    seed = _int_param(spec, "seed", default=0)
    rng = np.random.default_rng(seed)

    match spec.kind:
        case StreamKind.unit_index:
            window = _int_param(spec, "L")
            target = _int_param(spec, "J")
            bits = _bits_param(spec, "X", max(window - 2, 0), rng)
            return gen_unit_index(bits, target, window)

        case StreamKind.chain3:
            window = _int_param(spec, "L")
            n = chain3_size(window)
            first_target = _int_param(spec, "J1")
            second_target = _int_param(spec, "J2")
            first_bits = _bits_param(spec, "X1", n, rng)
            second_bits = _bits_param(spec, "X2", n, rng)
            if "bit" in spec.params and 1 <= first_target <= n and 1 <= second_target <= n:
                shared = _int_param(spec, "bit")
                first_bits[first_target - 1] = shared
                second_bits[second_target - 1] = shared
            return gen_chain3(first_bits, second_bits, first_target, second_target, window)

        case StreamKind.appendix_hard:
            streams = gen_appendix_hard(_int_param(spec, "l"))
            parts = spec.params.get("parts", "abc").lower()
            if not parts or any(part not in "abc" for part in parts):
                raise StreamError(f"parts must be drawn from 'abc', got {parts!r}")
            by_name = {"a": streams.a, "b": streams.b, "c": streams.c}
            selected = [interval for part in parts for interval in by_name[part]]
            return _reindexed(selected) if parts != "abc" else selected

        case StreamKind.random_unit:
            low, high = _range_param(spec, "range", (0.0, 100.0))
            return gen_random(RandomKind.unit, _int_param(spec, "n"), low=low, high=high, seed=seed)

        case StreamKind.random_arbitrary:
            low, high = _range_param(spec, "range", (0.0, 100.0))
            min_length, max_length = _range_param(spec, "len", (0.1, 10.0))
            return gen_random(
                RandomKind.arbitrary,
                _int_param(spec, "n"),
                low=low,
                high=high,
                min_length=min_length,
                max_length=max_length,
                seed=seed,
            )

    raise StreamError(f"unsupported stream generator {spec.kind.value}")


def load_stream(source: str) -> list[Interval]:
    """Intervals from a generator spec string or, failing that, a stream file path."""
    if looks_like_spec(source):
        spec = parse_stream_spec(source)
        intervals = build_stream(spec)
        logger.info("generated %s intervals from %s", len(intervals), spec)
        return intervals
    intervals = parse_stream_file(source)
    logger.info("read %s intervals from %s", len(intervals), source)
    return intervals
