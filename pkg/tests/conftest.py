"""Shared hypothesis strategies and small exact helpers for the test suite."""

from __future__ import annotations

from fractions import Fraction

import hypothesis.strategies as st

from haar_riesz import CoefficientMap, DyadicInterval, StepSet


@st.composite
def step_sets(draw, max_intervals: int = 4, denominators=(3, 5, 8, 12, 16, 64)):
    """Step sets with endpoints on a small rational grid (possibly empty)."""
    den = draw(st.sampled_from(denominators))
    count = draw(st.integers(0, min(max_intervals, (den + 1) // 2)))
    points = draw(
        st.lists(
            st.integers(0, den), min_size=2 * count, max_size=2 * count, unique=True
        )
    )
    points.sort()
    pairs = [
        (Fraction(points[2 * i], den), Fraction(points[2 * i + 1], den))
        for i in range(count)
    ]
    return StepSet(tuple(pairs))


@st.composite
def dyadic_intervals(draw, max_level: int = 6):
    level = draw(st.integers(0, max_level))
    index = draw(st.integers(0, (1 << level) - 1))
    return DyadicInterval(level, index)


@st.composite
def coefficient_maps(draw, max_level: int = 4, max_terms: int = 6):
    terms = draw(
        st.lists(
            st.tuples(
                dyadic_intervals(max_level=max_level),
                st.fractions(
                    min_value=Fraction(-4),
                    max_value=Fraction(4),
                    max_denominator=4,
                ),
            ),
            max_size=max_terms,
        )
    )
    return CoefficientMap(terms)


def clip_stepset(region: StepSet, left: Fraction, right: Fraction) -> StepSet:
    """region ∩ [left, right) as a step set (test-side helper)."""
    pieces = []
    for a, b in region.intervals:
        lo, hi = max(a, left), min(b, right)
        if lo < hi:
            pieces.append((lo, hi))
    return StepSet(tuple(pieces))
