import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Interval(BaseModel):
    """Closed segment [left, right] tagged with its 0-based stream position."""

    model_config = ConfigDict(frozen=True)

    left: float = Field(..., allow_inf_nan=False)
    right: float = Field(..., allow_inf_nan=False)
    arrival_index: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def validate_ordered(self) -> "Interval":
        if self.left > self.right:
            raise ValueError(f"left ({self.left}) must not exceed right ({self.right})")
        return self

    @property
    def length(self) -> float:
        return self.right - self.left

    def __str__(self) -> str:
        return f"[{self.left:g}, {self.right:g}]#{self.arrival_index}"


IntervalSet = list[Interval]


class BoundaryOwner(str, Enum):
    left_region = "left"
    right_region = "right"


class SplitRule(str, Enum):
    # Boundary at the displaced witness's inner endpoint; every earlier interval in the old region keeps touching it.
    witness = "witness"
    # Boundary at the arriving interval's inner endpoint.
    arriving = "arriving"


class Domain(BaseModel):
    """A connected piece of the line with explicit endpoint closure.

    Infinite ends are always treated as open.
    """

    model_config = ConfigDict(frozen=True)

    low: float = -math.inf
    high: float = math.inf
    low_closed: bool = False
    high_closed: bool = False

    def contains_point(self, point: float) -> bool:
        if point < self.low or point > self.high:
            return False
        if point == self.low and not (self.low_closed and math.isfinite(self.low)):
            return False
        if point == self.high and not (self.high_closed and math.isfinite(self.high)):
            return False
        return True

    def contains(self, interval: Interval) -> bool:
        return self.contains_point(interval.left) and self.contains_point(interval.right)

    def merge(self, other: "Domain") -> "Domain":
        """Union of two touching domains, ``self`` on the left."""
        if self.high != other.low:
            raise ValueError("domains must share a boundary to be merged")
        return Domain(
            low=self.low,
            high=other.high,
            low_closed=self.low_closed,
            high_closed=other.high_closed,
        )

    def __str__(self) -> str:
        opening = "[" if self.low_closed and math.isfinite(self.low) else "("
        closing = "]" if self.high_closed and math.isfinite(self.high) else ")"
        return f"{opening}{self.low:g}, {self.high:g}{closing}"


class RegionView(BaseModel):
    """Read-only row describing one region of a CP partition."""

    model_config = ConfigDict(frozen=True)

    domain: Domain
    leftmost: Interval | None = None
    rightmost: Interval | None = None

    @property
    def is_virgin(self) -> bool:
        return self.leftmost is None

    @property
    def witnesses(self) -> tuple[Interval, ...]:
        if self.leftmost is None or self.rightmost is None:
            return ()
        if self.leftmost == self.rightmost:
            return (self.leftmost,)
        return (self.leftmost, self.rightmost)
