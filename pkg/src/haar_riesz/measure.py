"""Exact step sets and dyadic intervals on the unit interval.

The set model is a canonical finite union of half-open intervals with
rational endpoints inside [0,1).  Every measure and density computed here is
an exact `Fraction`; nothing in this module rounds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

from .errors import InputError
from .rational import format_rational, parse_rational

RationalLike = Union[Fraction, int, str]


def _as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """The interval [index/2^level, (index+1)/2^level) inside [0,1)."""

    level: int
    index: int

    def __post_init__(self):
        if self.level < 0:
            raise InputError(f"dyadic level must be >= 0, got {self.level}")
        if not 0 <= self.index < (1 << self.level):
            raise InputError(
                f"dyadic index {self.index} out of range [0, {1 << self.level}) at level {self.level}"
            )

    @property
    def left(self) -> Fraction:
        return Fraction(self.index, 1 << self.level)

    @property
    def right(self) -> Fraction:
        return Fraction(self.index + 1, 1 << self.level)

    @property
    def measure(self) -> Fraction:
        return Fraction(1, 1 << self.level)

    def contains(self, other: "DyadicInterval") -> bool:
        """Dyadic nesting test: other is a subinterval of self."""
        shift = other.level - self.level
        return shift >= 0 and (other.index >> shift) == self.index

    def __str__(self) -> str:
        return f"[{self.left}, {self.right})"


def _canonical_intervals(
    raw: Iterable[Sequence[RationalLike]],
) -> Tuple[Tuple[Fraction, Fraction], ...]:
    pairs = []
    for pair in raw:
        left, right = _as_fraction(pair[0]), _as_fraction(pair[1])
        if not (0 <= left < right <= 1):
            raise InputError(
                f"bad interval ({left}, {right}): need 0 <= left < right <= 1"
            )
        pairs.append((left, right))
    pairs.sort()
    merged: list[list[Fraction]] = []
    for left, right in pairs:
        if merged and left <= merged[-1][1]:
            if right > merged[-1][1]:
                merged[-1][1] = right
        else:
            merged.append([left, right])
    return tuple((left, right) for left, right in merged)


@dataclass(frozen=True)
class StepSet:
    """Canonical finite union of half-open rational intervals inside [0,1).

    Construction eagerly canonicalizes: intervals are sorted, overlapping or
    touching inputs are merged, so equality of indicator functions is
    structural equality of the tuples.
    """

    intervals: Tuple[Tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "intervals", _canonical_intervals(self.intervals))

    @property
    def measure(self) -> Fraction:
        return sum((right - left for left, right in self.intervals), Fraction(0))

    def contains_point(self, x: RationalLike) -> bool:
        x = _as_fraction(x)
        return any(left <= x < right for left, right in self.intervals)

    def complement(self) -> "StepSet":
        """The normalized complement within [0,1)."""
        gaps = []
        cursor = Fraction(0)
        for left, right in self.intervals:
            if cursor < left:
                gaps.append((cursor, left))
            cursor = right
        if cursor < 1:
            gaps.append((cursor, Fraction(1)))
        return StepSet(tuple(gaps))

    def to_json_dict(self) -> dict:
        return {
            "intervals": [
                [format_rational(left), format_rational(right)]
                for left, right in self.intervals
            ]
        }

    @classmethod
    def from_json_dict(cls, data: Union[dict, str]) -> "StepSet":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "intervals" not in data:
            raise InputError('step set JSON must be {"intervals": [["a/b","c/d"], ...]}')
        return cls(tuple((pair[0], pair[1]) for pair in data["intervals"]))

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return " ∪ ".join(f"[{l}, {r})" for l, r in self.intervals)


FULL_SET = StepSet(((0, 1),))
EMPTY_SET = StepSet(())


def normalize(raw: Iterable[Sequence[RationalLike]]) -> StepSet:
    """Canonical StepSet with the same indicator function as the raw pairs."""
    return StepSet(tuple(raw))


def intersect_measure(region: StepSet, interval: DyadicInterval) -> Fraction:
    """Exact Lebesgue measure of region ∩ interval."""
    lo, hi = interval.left, interval.right
    total = Fraction(0)
    for left, right in region.intervals:
        if right <= lo:
            continue
        if left >= hi:
            break
        total += min(right, hi) - max(left, lo)
    return total


def density(region: StepSet, interval: DyadicInterval) -> Fraction:
    """The covered fraction |I ∩ E| / |I|, exactly; always in [0, 1]."""
    return intersect_measure(region, interval) / interval.measure
