import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from potbal.errors import IncomparableProfiles
from potbal.smallsets import (
    CoverInput,
    IntervalSet,
    content_chain_check,
    content_weight,
    exceptional_bound_check,
    greedy_cover,
    hausdorff_content,
    q_of_E,
)
from potbal.subfun import RadiusProfile

ONE = RadiusProfile.constant(1.0)

intervals = st.lists(
    st.tuples(st.floats(-100, 100), st.floats(0, 20)).map(lambda p: (p[0], p[0] + p[1])), max_size=8
).map(lambda ps: IntervalSet(tuple(ps)))


class TestIntervalSet:
    def test_merging(self):
        E = IntervalSet.of((0, 2), (1, 3), (5, 6))
        assert E.intervals == ((0, 3), (5, 6))
        assert E.measure() == 4
        assert E.measure_within(2, 5.5) == 1.5

    def test_invalid(self):
        with pytest.raises(ValueError):
            IntervalSet.of((2, 1))
        with pytest.raises(ValueError):
            IntervalSet.of((0, math.inf))

    def test_contains(self):
        E = IntervalSet.of((0, 1))
        assert list(E.contains([-0.1, 0, 0.5, 1, 1.1])) == [False, True, True, True, False]


class TestGauge:
    def test_values(self):
        assert q_of_E(IntervalSet(), 5) == 0.0
        assert q_of_E(IntervalSet.of((0, 1)), math.e) == pytest.approx(2.0)
        assert q_of_E(IntervalSet.of((0, 7.5)), 7.5) == pytest.approx(7.5)

    def test_negative_half_line_ignored(self):
        assert q_of_E(IntervalSet.of((-5, -1)), 10) == 0.0

    @given(intervals, st.floats(0.01, 200), st.floats(0, 100))
    def test_monotone_and_dominated(self, E, r, dr):
        a, b = q_of_E(E, r), q_of_E(E, r + dr)
        assert a <= r * (1 + 1e-12)
        assert a <= b + 1e-12 * max(1.0, b)


class TestContent:
    def test_weights(self):
        assert content_weight(1) == pytest.approx(2.0)
        assert content_weight(2) == pytest.approx(math.pi)

    def test_points_have_zero_content(self):
        S = CoverInput.of_points([0, 3])
        assert hausdorff_content(S, 1, ONE) == (0.0, 0.0, True)

    def test_greedy_two_points(self):
        # no admissible disk covers both points, so the greedy cover uses two unit disks
        assert greedy_cover([0, 3], 1, ONE) == pytest.approx(4.0)
        assert greedy_cover([0, 0.8], 1, ONE) == pytest.approx(2.0)

    def test_empty(self):
        assert hausdorff_content(CoverInput.of_points([]), 1, ONE)[:2] == (0.0, 0.0)
        assert hausdorff_content(CoverInput.of_intervals(IntervalSet()), 0.5, ONE)[:2] == (0.0, 0.0)

    def test_unit_interval(self):
        est = hausdorff_content(CoverInput.of_intervals(IntervalSet.of((0, 1))), 1, ONE)
        assert est == (1.0, 1.0, True)

    def test_above_line_dimension(self):
        est = hausdorff_content(CoverInput.of_intervals(IntervalSet.of((0, 1))), 1.5, ONE)
        assert est.upper == 0.0
        assert hausdorff_content(CoverInput.of_intervals(IntervalSet.of((0, 1))), 2.5, ONE).upper == 0.0

    def test_bad_dimension(self):
        with pytest.raises(ValueError):
            hausdorff_content(CoverInput.of_points([1]), 0.0, ONE)

    def test_fractional_dimension_single_interval(self):
        # length 4 with cap 1: two disks of radius 1 cost 2 * w * 1^d; any cover needs total radius >= 2
        E = CoverInput.of_intervals(IntervalSet.of((0, 4)))
        d = 0.5
        est = hausdorff_content(E, d, ONE)
        assert est.upper == pytest.approx(2 * content_weight(d))
        assert est.lower == pytest.approx(2 * content_weight(d))
        assert est.exact

    @given(intervals, st.floats(0.1, 0.95), st.floats(0.05, 1.0))
    def test_bounds_bracket_a_simple_cover(self, E, d, cap):
        prof = RadiusProfile.constant(cap)
        est = hausdorff_content(CoverInput.of_intervals(E), d, prof)
        w = content_weight(d)
        # one row of equal disks per interval is always admissible
        naive = 0.0
        for lo, hi in E.intervals:
            if hi > lo:
                n = math.ceil((hi - lo) / (2 * cap))
                naive += n * w * ((hi - lo) / (2 * n)) ** d
        assert est.lower <= est.upper * (1 + 1e-12) + 1e-15
        assert est.upper <= naive * (1 + 1e-12) + 1e-15

    @given(intervals, intervals, st.floats(0.1, 1.0))
    def test_subadditive(self, A, B, d):
        shifted = IntervalSet(tuple((a + 500, b + 500) for a, b in B.intervals))
        f = lambda E: hausdorff_content(CoverInput.of_intervals(E), d, ONE).upper  # noqa: E731
        assert f(A.union(shifted)) <= f(A) + f(shifted) + 1e-9


class TestChain:
    def test_points(self):
        S = CoverInput.of_points([0, 3])
        assert content_chain_check(S, 1, RadiusProfile.constant(0.5), ONE).holds

    def test_identical(self):
        S = CoverInput.of_intervals(IntervalSet.of((0, 3), (5, 9)))
        res = content_chain_check(S, 0.7, ONE, ONE)
        assert res.holds and res.upper_small == res.upper_large

    def test_above_two(self):
        S = CoverInput.of_intervals(IntervalSet.of((0, 3)))
        res = content_chain_check(S, 2.5, RadiusProfile.constant(0.2), ONE)
        assert res.holds and res.upper_small == res.upper_large == 0.0

    def test_incomparable(self):
        S = CoverInput.of_points([0])
        with pytest.raises(IncomparableProfiles):
            content_chain_check(S, 1, ONE, RadiusProfile.constant(0.5))

    @given(intervals, st.floats(0.1, 1.0), st.floats(0.05, 1.0), st.floats(0.05, 1.0))
    def test_smaller_cap_costs_more(self, E, d, a, b):
        lo, hi = sorted((a, b))
        res = content_chain_check(CoverInput.of_intervals(E, 0.5), d, RadiusProfile.constant(lo), RadiusProfile.constant(hi))
        assert res.holds


class TestExceptionalBound:
    def test_decaying_profile_far_out(self):
        E = CoverInput.of_intervals(IntervalSet.of((0, 1), (100, 100.001)))
        prof = RadiusProfile.power_floor(0.5, 2, 1)
        res = exceptional_bound_check(E, 1, prof, 50.0)
        assert res.content_upper == pytest.approx(0.001)
        assert res.bound == pytest.approx(1 / 51)
        assert res.holds is True

    def test_refuted(self):
        E = CoverInput.of_intervals(IntervalSet.of((10, 20)))
        res = exceptional_bound_check(E, 1, RadiusProfile.constant(0.5), 5.0)
        assert res.holds is False

    def test_points_always_pass(self):
        res = exceptional_bound_check(CoverInput.of_points(np.arange(100.0)), 0.5, ONE, 3.0)
        assert res.holds is True
