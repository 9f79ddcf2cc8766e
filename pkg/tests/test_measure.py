from fractions import Fraction as F

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from haar_riesz import (
    DyadicInterval,
    InputError,
    StepSet,
    density,
    intersect_measure,
    normalize,
)
from haar_riesz.haar import halves

from conftest import dyadic_intervals, step_sets


def indicator_of_pairs(pairs, x):
    return any(left <= x < right for left, right in pairs)


class TestNormalize:
    def test_adjacent_merge(self):
        assert normalize([(0, F(1, 2)), (F(1, 2), 1)]) == StepSet(((0, 1),))

    def test_sort_and_merge(self):
        assert normalize([(F(1, 4), F(1, 2)), (0, F(1, 4))]) == StepSet(
            ((0, F(1, 2)),)
        )

    def test_overlapping_union(self):
        # oracle: indicator of the raw union sampled on a fine rational grid
        raw = [(F(0), F(1, 3)), (F(1, 4), F(2, 3))]
        result = normalize(raw)
        for k in range(960):
            x = F(k, 960)
            assert result.contains_point(x) == indicator_of_pairs(raw, x)
        assert result == StepSet(((0, F(2, 3)),))

    @pytest.mark.parametrize(
        "raw",
        [
            [(F(1, 2), F(1, 2))],
            [(F(3, 4), F(1, 4))],
            [(F(-1, 4), F(1, 2))],
            [(F(1, 2), F(5, 4))],
        ],
    )
    def test_malformed_pair_rejected(self, raw):
        with pytest.raises(InputError) as err:
            normalize(raw)
        # the offending pair is named
        assert str(raw[0][0]) in str(err.value)

    @given(step_sets())
    def test_idempotent(self, region):
        assert normalize(region.intervals) == region

    @given(step_sets())
    def test_canonical_form(self, region):
        pairs = region.intervals
        assert all(left < right for left, right in pairs)
        # strictly separated: no touching neighbours survive canonicalization
        assert all(pairs[i][1] < pairs[i + 1][0] for i in range(len(pairs) - 1))
        assert 0 <= region.measure <= 1


class TestIntersectMeasure:
    def test_two_thirds_right_half(self):
        region = StepSet(((0, F(2, 3)),))
        assert intersect_measure(region, DyadicInterval(1, 1)) == F(1, 6)

    @pytest.mark.parametrize("level,index", [(0, 0), (2, 3), (5, 17)])
    def test_full_set(self, level, index):
        region = StepSet(((0, 1),))
        assert intersect_measure(region, DyadicInterval(level, index)) == F(
            1, 2**level
        )

    def test_multi_interval_overlap(self):
        # hand oracle: sum of pairwise overlaps with [1/4, 1/2)
        #   [0,1/3) ∩ [1/4,1/2) = [1/4,1/3) of measure 1/12
        #   [1/2,5/8) ∩ [1/4,1/2) = empty
        region = StepSet(((0, F(1, 3)), (F(1, 2), F(5, 8))))
        assert intersect_measure(region, DyadicInterval(2, 1)) == F(1, 12)

    @given(step_sets(), dyadic_intervals())
    def test_halves_additivity(self, region, interval):
        lh, rh = halves(interval)
        assert intersect_measure(region, lh) + intersect_measure(
            region, rh
        ) == intersect_measure(region, interval)

    @given(step_sets(), dyadic_intervals())
    def test_complement_consistency(self, region, interval):
        assert intersect_measure(region, interval) + intersect_measure(
            region.complement(), interval
        ) == interval.measure


class TestDensity:
    def test_paper_values(self):
        region = StepSet(((0, F(2, 3)),))
        assert density(region, DyadicInterval(1, 1)) == F(1, 3)
        assert density(region, DyadicInterval(0, 0)) == F(2, 3)

    def test_empty_set(self):
        region = StepSet(())
        assert density(region, DyadicInterval(3, 5)) == 0

    @given(step_sets(), dyadic_intervals())
    def test_range(self, region, interval):
        assert 0 <= density(region, interval) <= 1


class TestDyadicInterval:
    def test_endpoints(self):
        interval = DyadicInterval(2, 3)
        assert (interval.left, interval.right) == (F(3, 4), F(1))
        assert interval.measure == F(1, 4)

    def test_validation(self):
        with pytest.raises(InputError):
            DyadicInterval(-1, 0)
        with pytest.raises(InputError):
            DyadicInterval(2, 4)

    def test_containment(self):
        assert DyadicInterval(0, 0).contains(DyadicInterval(3, 5))
        assert DyadicInterval(1, 1).contains(DyadicInterval(1, 1))
        assert not DyadicInterval(1, 0).contains(DyadicInterval(2, 2))
        assert not DyadicInterval(2, 2).contains(DyadicInterval(1, 1))

    def test_ordering(self):
        assert DyadicInterval(1, 1) < DyadicInterval(2, 0)
        assert sorted([DyadicInterval(2, 1), DyadicInterval(1, 0)])[0].level == 1


class TestJson:
    def test_round_trip(self):
        region = StepSet(((F(1, 3), F(1, 2)), (F(3, 4), 1)))
        assert StepSet.from_json_dict(region.to_json_dict()) == region

    def test_unreduced_and_shorthand(self):
        data = {"intervals": [["0", "4/8"], ["6/8", "1"]]}
        assert StepSet.from_json_dict(data) == StepSet(
            ((0, F(1, 2)), (F(3, 4), 1))
        )

    def test_rejects_garbage(self):
        with pytest.raises(InputError):
            StepSet.from_json_dict({"nope": []})
