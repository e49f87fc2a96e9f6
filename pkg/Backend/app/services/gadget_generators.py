"""Deterministic stream builders: lower-bound gadgets, the three-part
hard instance (`appendix_hard`) for the improved algorithm, and seeded random streams.

Bit vectors are 1-based in the formulas below; ``bits[i - 1]`` is ``X[i]``.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from app.core.errors import StreamError
from app.models.interval import Interval


class RandomKind(str, Enum):
    unit = "random_unit"
    arbitrary = "random_arbitrary"


def _indexed(bounds: Sequence[tuple[float, float]], start_index: int = 0) -> list[Interval]:
    return [
        Interval(left=left, right=right, arrival_index=start_index + offset)
        for offset, (left, right) in enumerate(bounds)
    ]


def _check_bits(name: str, bits: Sequence[int], expected: int) -> None:
    if len(bits) != expected:
        raise StreamError(f"{name} must have {expected} bits, got {len(bits)}")
    if any(bit not in (0, 1) for bit in bits):
        raise StreamError(f"{name} must contain only 0/1 values")


def gen_unit_index(bits: Sequence[int], target: int, window: int) -> list[Interval]:
    """Unit-length stream whose last ``window`` intervals have OPT 2 iff ``bits[target-1]`` is 1."""
    if window < 3:
        raise StreamError("unit_index needs a window of at least 3")
    _check_bits("X", bits, window - 2)
    if not 1 <= target <= window - 2:
        raise StreamError(f"J must lie in [1, {window - 2}], got {target}")

    step = 1 / (2 * window - 1)
    bounds: list[tuple[float, float]] = []
    for i in range(1, window - 1):
        if bits[i - 1] == 1:
            left = i * step
        else:
            left = 1 - i / window**2
        bounds.append((left, left + 1))

    special_left = 1 + target * step + step**2
    bounds.append((special_left, special_left + 1))

    for i in range(window, window + target):
        bounds.append((i * step, 1 + i * step))
    return _indexed(bounds)


@dataclass(frozen=True)
class _Chain3Slots:
    n: int
    first_target: int

    def a(self, i: int) -> float:
        n = self.n
        return 1 + self.first_target / (3 * n) + 1 / (6 * n) + (i - 1) / (6 * n * n)

    def b(self, i: int) -> float:
        n = self.n
        return 2 - self.first_target / (3 * n) - 1 / (6 * n) + (i - 1) / (6 * n * n)


def chain3_size(window: int) -> int:
    if window < 5 or (window - 2) % 3 != 0:
        raise StreamError(f"chain3 needs window = 3n + 2 with n >= 1, got {window}")
    return (window - 2) // 3


def gen_chain3(
    first_bits: Sequence[int],
    second_bits: Sequence[int],
    first_target: int,
    second_target: int,
    window: int,
) -> list[Interval]:
    """Three-party stream whose final window has OPT 5 when the shared bit is 1, else 2."""
    n = chain3_size(window)
    _check_bits("X1", first_bits, n)
    _check_bits("X2", second_bits, n)
    for name, target in (("J1", first_target), ("J2", second_target)):
        if not 1 <= target <= n:
            raise StreamError(f"{name} must lie in [1, {n}], got {target}")
    if first_bits[first_target - 1] != second_bits[second_target - 1]:
        raise StreamError("X1[J1] must equal X2[J2]")

    bounds: list[tuple[float, float]] = []
    for i in range(1, n + 1):
        if first_bits[i - 1] == 1:
            bounds.append((i / (3 * n), 1 + i / (3 * n)))
            bounds.append((2 - i / (3 * n), 3 - i / (3 * n)))
        else:
            bounds.append((-10 - i, 10 + i))
            bounds.append((-11 - i, 11 + i))

    slots = _Chain3Slots(n=n, first_target=first_target)
    for i in range(1, n + 2 * (first_target - 1) + 1):
        if i <= n and second_bits[i - 1] == 1:
            bounds.append((slots.a(i), slots.b(i)))
        else:
            bounds.append((-10 - i, 11 + i))

    j = second_target
    bounds.append(((2 * slots.a(j - 1) + slots.a(j)) / 3, (slots.a(j - 1) + 2 * slots.a(j)) / 3))
    # Built right of I3(J2) so it stays disjoint from it.
    bounds.append(((2 * slots.b(j) + slots.b(j + 1)) / 3, (slots.b(j) + 2 * slots.b(j + 1)) / 3))
    return _indexed(bounds)


@dataclass(frozen=True)
class AppendixStreams:
    a: list[Interval]
    b: list[Interval]
    c: list[Interval]

    def concatenated(self) -> list[Interval]:
        return [*self.a, *self.b, *self.c]


def _good_positions(size: int) -> list[int]:
    return [x for x in range(1, size + 1) if x % 3 == 2]


def gen_appendix_hard(size: int) -> AppendixStreams:
    """Hard instance A, B, C for the improved algorithm; arrival indices run across all three."""
    if size < 3 or size % 3 != 0:
        raise StreamError(f"appendix_hard needs a positive multiple of 3, got {size}")

    positions = range(1, size + 1)
    a_bounds = [(x + 0.1, x + 1.0) for x in positions]
    a_bounds += [(x + 0.5, x + 0.54) for x in positions]
    a_bounds += [(x + 0.95, x + 1.05) for x in positions]

    b_bounds: list[tuple[float, float]] = []
    for x in _good_positions(size):
        b_bounds += [(x - 0.1, x + 0.26), (x + 0.53, x + 0.71), (x + 0.9, x + 1.1)]

    c_bounds: list[tuple[float, float]] = []
    for x in _good_positions(size):
        c_bounds += [(x + 0.06, x + 0.3), (x + 0.35, x + 0.75)]
    for x in _good_positions(size):
        c_bounds += [
            (x + 0.06, x + 0.15),
            (x + 0.25, x + 0.35),
            (x + 0.55, x + 0.6),
            (x + 0.7, x + 0.8),
            (x + 0.9, x + 0.94),
        ]

    a = _indexed(a_bounds)
    b = _indexed(b_bounds, start_index=len(a))
    c = _indexed(c_bounds, start_index=len(a) + len(b))
    return AppendixStreams(a=a, b=b, c=c)


def gen_random(
    kind: RandomKind,
    count: int,
    low: float = 0.0,
    high: float = 100.0,
    min_length: float = 0.1,
    max_length: float = 10.0,
    seed: int = 0,
) -> list[Interval]:
    if count < 0:
        raise StreamError("count must be non-negative")
    if high <= low:
        raise StreamError("coordinate range must be non-empty")

    rng = np.random.default_rng(seed)
    if kind == RandomKind.unit:
        if high - low < 1:
            raise StreamError("unit streams need a coordinate range of at least 1")
        lefts = rng.uniform(low, high - 1, size=count)
        return _indexed([(float(left), float(left) + 1.0) for left in lefts])

    if not 0 < min_length <= max_length:
        raise StreamError("length range must satisfy 0 < min <= max")
    lefts = rng.uniform(low, high, size=count)
    lengths = rng.uniform(min_length, max_length, size=count)
    return _indexed([(float(left), float(left + length)) for left, length in zip(lefts, lengths)])
