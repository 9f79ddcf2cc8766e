"""Restricted Haar functions and exact L² bookkeeping for their combinations."""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Tuple, Union

from .errors import InputError
from .measure import DyadicInterval, StepSet, density, intersect_measure
from .rational import format_rational, parse_rational


@dataclass(frozen=True)
class PiecewiseConstant:
    """Step function on [0,1): sorted breakpoints (first 0, last 1), one value per gap.

    The representation is canonical: adjacent gaps with equal values are merged
    on construction, so structural equality is function equality.
    """

    breakpoints: Tuple[Fraction, ...]
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        bps = tuple(Fraction(b) for b in self.breakpoints)
        vals = tuple(Fraction(v) for v in self.values)
        if len(bps) < 2 or bps[0] != 0 or bps[-1] != 1:
            raise InputError("breakpoints must start at 0 and end at 1")
        if any(bps[i] >= bps[i + 1] for i in range(len(bps) - 1)):
            raise InputError("breakpoints must be strictly increasing")
        if len(vals) != len(bps) - 1:
            raise InputError("need exactly one value per breakpoint gap")
        out_b = [bps[0]]
        out_v = [vals[0]]
        for i in range(1, len(vals)):
            if vals[i] == out_v[-1]:
                continue
            out_b.append(bps[i])
            out_v.append(vals[i])
        out_b.append(bps[-1])
        object.__setattr__(self, "breakpoints", tuple(out_b))
        object.__setattr__(self, "values", tuple(out_v))

    @classmethod
    def constant(cls, value) -> "PiecewiseConstant":
        return cls((Fraction(0), Fraction(1)), (Fraction(value),))

    @classmethod
    def zero(cls) -> "PiecewiseConstant":
        return cls.constant(0)

    @classmethod
    def from_segments(cls, segments: Iterable[Sequence]) -> "PiecewiseConstant":
        """Build from disjoint (left, right, value) pieces; uncovered gaps are 0."""
        segs = sorted((Fraction(l), Fraction(r), Fraction(v)) for l, r, v in segments)
        bps = [Fraction(0)]
        vals: list[Fraction] = []
        for left, right, value in segs:
            if left < bps[-1]:
                raise InputError(f"overlapping segment at {left}")
            if left >= right or right > 1:
                raise InputError(f"bad segment ({left}, {right})")
            if left > bps[-1]:
                vals.append(Fraction(0))
                bps.append(left)
            vals.append(value)
            bps.append(right)
        if bps[-1] < 1:
            vals.append(Fraction(0))
            bps.append(Fraction(1))
        return cls(tuple(bps), tuple(vals))

    def value_at(self, x) -> Fraction:
        x = Fraction(x)
        if not 0 <= x < 1:
            raise InputError(f"point {x} outside [0,1)")
        return self.values[bisect_right(self.breakpoints, x) - 1]

    def _aligned_values(self, grid: Sequence[Fraction]) -> list[Fraction]:
        # grid must contain all own breakpoints
        out = []
        k = 0
        for i in range(len(grid) - 1):
            while self.breakpoints[k + 1] <= grid[i]:
                k += 1
            out.append(self.values[k])
        return out

    def _zip(self, other: "PiecewiseConstant", op) -> "PiecewiseConstant":
        grid = sorted(set(self.breakpoints) | set(other.breakpoints))
        a = self._aligned_values(grid)
        b = other._aligned_values(grid)
        return PiecewiseConstant(tuple(grid), tuple(op(x, y) for x, y in zip(a, b)))

    def __add__(self, other: "PiecewiseConstant") -> "PiecewiseConstant":
        return self._zip(other, lambda x, y: x + y)

    def __sub__(self, other: "PiecewiseConstant") -> "PiecewiseConstant":
        return self._zip(other, lambda x, y: x - y)

    def __neg__(self) -> "PiecewiseConstant":
        return PiecewiseConstant(self.breakpoints, tuple(-v for v in self.values))

    def __mul__(self, other):
        if isinstance(other, PiecewiseConstant):
            return self._zip(other, lambda x, y: x * y)
        scalar = Fraction(other)
        return PiecewiseConstant(self.breakpoints, tuple(v * scalar for v in self.values))

    __rmul__ = __mul__

    def restrict(self, region: StepSet) -> "PiecewiseConstant":
        """Pointwise product with the indicator of the region."""
        return self * indicator(region)

    def integral(self) -> Fraction:
        return sum(
            (
                v * (self.breakpoints[i + 1] - self.breakpoints[i])
                for i, v in enumerate(self.values)
            ),
            Fraction(0),
        )


def indicator(region: StepSet) -> PiecewiseConstant:
    """The indicator function of a step set, as an exact step function."""
    return PiecewiseConstant.from_segments(
        (left, right, Fraction(1)) for left, right in region.intervals
    )


class CoefficientMap:
    """Finite assignment interval -> coefficient; zero coefficients are dropped."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Union[Mapping, Iterable[Tuple[DyadicInterval, Fraction]]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        store: dict[DyadicInterval, Fraction] = {}
        for interval, value in items:
            if not isinstance(interval, DyadicInterval):
                raise InputError(f"coefficient key must be a DyadicInterval, got {interval!r}")
            value = Fraction(value)
            if value:
                store[interval] = value
        self._entries = store

    def __getitem__(self, interval: DyadicInterval) -> Fraction:
        return self._entries.get(interval, Fraction(0))

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, CoefficientMap) and self._entries == other._entries

    def __iter__(self):
        return iter(self.support())

    def items(self) -> list[Tuple[DyadicInterval, Fraction]]:
        return sorted(self._entries.items())

    def support(self) -> list[DyadicInterval]:
        return sorted(self._entries)

    def max_level(self) -> int:
        """Deepest level carrying a coefficient; -1 when empty."""
        return max((i.level for i in self._entries), default=-1)

    def restrict(self, max_level: int) -> "CoefficientMap":
        return CoefficientMap(
            (i, a) for i, a in self._entries.items() if i.level <= max_level
        )

    def to_json_dict(self) -> dict:
        return {
            "coeffs": [
                {"level": i.level, "index": i.index, "a": format_rational(a)}
                for i, a in self.items()
            ]
        }

    @classmethod
    def from_json_dict(cls, data: Union[dict, str]) -> "CoefficientMap":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "coeffs" not in data:
            raise InputError('coefficient JSON must be {"coeffs": [{"level":..,"index":..,"a":".."}]}')
        return cls(
            (DyadicInterval(int(e["level"]), int(e["index"])), parse_rational(e["a"]))
            for e in data["coeffs"]
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {a}" for i, a in self.items())
        return f"CoefficientMap({{{body}}})"


def halves(interval: DyadicInterval) -> Tuple[DyadicInterval, DyadicInterval]:
    """(left half, right half), one level deeper."""
    return (
        DyadicInterval(interval.level + 1, 2 * interval.index),
        DyadicInterval(interval.level + 1, 2 * interval.index + 1),
    )


def haar_function(interval: DyadicInterval) -> PiecewiseConstant:
    """-1 on the left half of the interval, +1 on the right half, 0 elsewhere."""
    lh, rh = halves(interval)
    return PiecewiseConstant.from_segments(
        [(lh.left, lh.right, Fraction(-1)), (rh.left, rh.right, Fraction(1))]
    )


def restricted_norm_sq(interval: DyadicInterval, region: StepSet) -> Fraction:
    """‖h_I · 1_E‖²; the Haar square is 1 on its interval, so this is |I ∩ E|."""
    return intersect_measure(region, interval)


def inner_product(
    first: DyadicInterval, second: DyadicInterval, region: StepSet
) -> Fraction:
    """Exact ∫ h_I h_J 1_E.

    Dyadic intervals are nested or disjoint, so the product is zero unless one
    interval contains the other; the outer Haar function is then constant ±1
    on the inner interval.
    """
    if first == second:
        return intersect_measure(region, first)
    if first.contains(second):
        outer, inner = first, second
    elif second.contains(first):
        outer, inner = second, first
    else:
        return Fraction(0)
    _, outer_rh = halves(outer)
    sign = 1 if outer_rh.contains(inner) else -1
    inner_lh, inner_rh = halves(inner)
    return sign * (
        intersect_measure(region, inner_rh) - intersect_measure(region, inner_lh)
    )


def combination(coeffs: CoefficientMap, region: StepSet) -> PiecewiseConstant:
    """The exact step function Σ a_I · h_I · 1_E."""
    total = PiecewiseConstant.zero()
    for interval, a in coeffs.items():
        total = total + haar_function(interval) * a
    return total.restrict(region)


def norm_sq(f: PiecewiseConstant) -> Fraction:
    """Exact ∫ f² over [0,1)."""
    return sum(
        (
            v * v * (f.breakpoints[i + 1] - f.breakpoints[i])
            for i, v in enumerate(f.values)
        ),
        Fraction(0),
    )


def enumerate_family(depth: int, region: StepSet, p: Fraction) -> list[DyadicInterval]:
    """All intervals of level ≤ depth whose density meets the threshold p.

    Uses the weak inequality density ≥ p (a coefficient is forced to zero only
    by a strict shortfall), in (level, index) order.
    """
    if depth < 0:
        raise InputError(f"depth must be >= 0, got {depth}")
    p = Fraction(p)
    if not 0 < p <= 1:
        raise InputError(f"threshold must satisfy 0 < p <= 1, got {p}")
    family = []
    for level in range(depth + 1):
        for index in range(1 << level):
            interval = DyadicInterval(level, index)
            if density(region, interval) >= p:
                family.append(interval)
    return family
