# © 2025 Visa.
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

import math
from fractions import Fraction

import pandas as pd
import pytest

from app.core import certified
from app.core.digits import replace_prefix
from app.core.law import (
    construct_digits,
    extremal_year,
    extremal_years,
    growth_rate,
    lln_sample,
    lln_summary,
    log_product_rate,
    quotient_enclosure,
    reciprocal_partial_sum,
    target_quotient,
    theorem_lower_bound,
    trajectory,
)
from app.errors import InsufficientPrefix, OutOfDomain
from app.models import Branch, DigitSeq, Enclosure, GrowthSpec

ALPHA_ONE = GrowthSpec(alpha=1)


def _close(enclosure: Enclosure, value: float, tolerance: float = 1e-9) -> bool:
    return abs(float(enclosure.midpoint) - value) < tolerance


class TestConstruction:
    def test_alpha_one(self):
        assert construct_digits(ALPHA_ONE, 3) == DigitSeq.extendable((3, 8, 21))

    def test_alpha_zero(self):
        assert construct_digits(GrowthSpec(alpha=0), 4) == DigitSeq.extendable((2, 3, 4, 5))

    def test_alpha_infinite(self):
        assert construct_digits(GrowthSpec.parse("inf"), 2) == DigitSeq.extendable((3, 55))

    def test_slow_growth_stays_increasing(self):
        assert construct_digits(GrowthSpec(alpha=Fraction(1, 10)), 4) == DigitSeq.extendable((2, 3, 4, 5))
        assert construct_digits(GrowthSpec.parse("1/2"), 4) == DigitSeq.extendable((2, 3, 5, 8))

    def test_negative_alpha(self):
        with pytest.raises(OutOfDomain):
            GrowthSpec(alpha=-1)

    def test_growth_rate_approaches_alpha(self):
        digits = construct_digits(ALPHA_ONE, 12)
        for n in range(2, 13):
            rate = growth_rate(digits, n)
            assert abs(rate.midpoint - 1) <= 2 * Fraction(1, 2 ** n)

    def test_growth_rate_bounds_for_extremes(self):
        slow = construct_digits(GrowthSpec(alpha=0), 10)
        assert float(growth_rate(slow, 10).hi) <= math.log(11) / 10 + 1e-12
        fast = construct_digits(GrowthSpec(alpha=None), 6)
        assert growth_rate(fast, 6).lo >= 5


class TestDiagnostics:
    def test_growth_rate_examples(self):
        assert _close(growth_rate(DigitSeq.extendable((3, 8, 21)), 3), math.log(21) / 3)
        assert _close(growth_rate(DigitSeq.extendable((2, 3, 4, 5)), 4), math.log(5) / 4)
        assert growth_rate(DigitSeq.extendable((1, 2)), 1) == Enclosure.point(0)

    def test_log_product_rate_examples(self):
        assert _close(log_product_rate(DigitSeq.extendable((3, 8, 21)), 3), math.log(504) / 4.5)
        assert _close(log_product_rate(DigitSeq.extendable((2, 3, 4, 5)), 4), math.log(120) / 8)
        assert log_product_rate(DigitSeq.terminated((1,)), 1) == Enclosure.point(0)

    def test_log_product_rate_tends_to_alpha(self):
        digits = construct_digits(ALPHA_ONE, 40)
        previous = None
        for n in range(5, 41):
            rate = log_product_rate(digits, n)
            assert 1 <= rate.lo and rate.hi - 1 <= Fraction(3, n)
            if previous is not None:
                assert rate.hi <= previous.hi
            previous = rate

    def test_reciprocal_partial_sum(self):
        assert reciprocal_partial_sum(DigitSeq.extendable((3, 8, 21)), 3) == Fraction(85, 168)
        assert reciprocal_partial_sum(DigitSeq.extendable((2, 3, 4, 5)), 4) == Fraction(77, 60)
        assert reciprocal_partial_sum(DigitSeq.extendable((2, 3)), 0) == 0

    def test_reciprocal_sum_stays_below_geometric_bound(self):
        digits = construct_digits(ALPHA_ONE, 30)
        bound = sum(math.exp(-k) for k in range(1, 200)) + 1 / 3
        assert float(reciprocal_partial_sum(digits, 30)) <= bound

    def test_reads_past_prefix(self):
        with pytest.raises(InsufficientPrefix):
            growth_rate(DigitSeq.extendable((2, 3)), 3)

    def test_replacement_only_moves_the_prefix(self, philox):
        rng = philox(99)
        for _ in range(50):
            alpha = Fraction(int(rng.integers(5, 30)), 10)
            digits = construct_digits(GrowthSpec(alpha=alpha), 31)
            for _ in range(20):
                k = int(rng.integers(1, 6))
                ceiling = digits.prefix[k]
                tau = sorted(int(d) + 1 for d in rng.choice(ceiling - 1, size=k, replace=False))
                swapped = replace_prefix(digits, tau)
                assert growth_rate(swapped, 30) == growth_rate(digits, 30)
                assert replace_prefix(swapped, digits.prefix[:k]) == digits


class TestExtremalYears:
    def test_alpha_one(self):
        digits = DigitSeq.extendable((3, 8, 21))
        assert extremal_years(digits, 1) == (482, 22)
        assert extremal_year(digits, 1) == 2
        assert extremal_year(digits, 2) == -22

    def test_consecutive_integers(self):
        assert extremal_years(DigitSeq.extendable((2, 3, 4)), 1) == (19, 5)

    def test_growth_and_bound(self):
        digits = construct_digits(ALPHA_ONE, 21)
        years = [extremal_years(digits, r)[0] for r in range(1, 11)]
        assert years == sorted(set(years))
        for r, year in enumerate(years, start=1):
            assert 0 < year < math.prod(digits.prefix[: 2 * r + 1])

    def test_needs_enough_digits(self):
        with pytest.raises(InsufficientPrefix):
            extremal_years(DigitSeq.extendable((3, 8)), 1)
        with pytest.raises(OutOfDomain):
            extremal_years(DigitSeq.extendable((3, 8, 21)), 0)


class TestQuotient:
    def test_alpha_one_at_482(self):
        digits = construct_digits(ALPHA_ONE, 6)
        quotient = quotient_enclosure(digits, 482, guard=3)
        assert Fraction(612, 1000) < quotient.lo <= quotient.hi < Fraction(613, 1000)

    def test_more_guard_digits_refine(self):
        digits = construct_digits(ALPHA_ONE, 8)
        coarse = quotient_enclosure(digits, 482, guard=3)
        fine = quotient_enclosure(digits, 482, guard=5)
        assert coarse.overlaps(fine)
        assert fine.width <= coarse.width

    def test_year_one(self):
        with pytest.raises(OutOfDomain):
            quotient_enclosure(construct_digits(ALPHA_ONE, 6), 1)

    def test_julian_point(self):
        quotient = quotient_enclosure(DigitSeq.terminated((4,)), 10 ** 6)
        assert abs(quotient.lo) <= Fraction(269, 1000) and abs(quotient.hi) <= Fraction(269, 1000)

    def test_guard_past_prefix(self):
        with pytest.raises(InsufficientPrefix):
            quotient_enclosure(DigitSeq.extendable((3, 8, 21)), 482, guard=3)


class TestTrajectory:
    def test_first_row(self):
        rows = trajectory(ALPHA_ONE, 1, guard=3)
        assert [row.branch for row in rows] == [Branch.LIMSUP, Branch.LIMINF]
        top, bottom = rows
        assert (top.year, top.leap_count) == (482, 140)
        assert top.thm2_satisfied is True
        assert bottom.year == 22 and bottom.thm2_satisfied is None
        assert bottom.drift.hi < 0

    def test_years_increase(self):
        rows = trajectory(ALPHA_ONE, 5)
        for branch in Branch:
            years = [row.year for row in rows if row.branch == branch]
            assert len(years) == 5 and years == sorted(set(years))
            logs = [row.log_year for row in rows if row.branch == branch]
            assert all(a.hi < b.lo for a, b in zip(logs, logs[1:]))

    @pytest.mark.parametrize("alpha", [1, 4])
    def test_drift_clears_quarter_r(self, alpha):
        for row in trajectory(GrowthSpec(alpha=alpha), 25, guard=3):
            if row.branch == Branch.LIMSUP:
                assert row.drift.lo >= Fraction(row.r, 4)
                assert row.thm2_satisfied

    @pytest.mark.parametrize("alpha, target", [(1, 0.70711), (4, 0.35355)])
    def test_quotient_near_target(self, alpha, target):
        rows = trajectory(GrowthSpec(alpha=alpha), 25)
        top = next(row for row in rows if row.branch == Branch.LIMSUP and row.r == 25)
        bottom = next(row for row in rows if row.branch == Branch.LIMINF and row.r == 25)
        assert abs(float(top.quotient.lo) - target) < 0.1 and abs(float(top.quotient.hi) - target) < 0.1
        assert abs(float(bottom.quotient.lo) + target) < 0.1 and abs(float(bottom.quotient.hi) + target) < 0.1

    def test_liminf_branch_is_negative(self):
        for row in trajectory(ALPHA_ONE, 25):
            if row.branch == Branch.LIMINF and row.r >= 2:
                assert row.drift.hi < 0

    def test_alpha_zero_lower_bound_diverges(self):
        digits = construct_digits(GrowthSpec(alpha=0), 801)
        assert theorem_lower_bound(digits, 400).lo > Fraction(14, 10)
        small = theorem_lower_bound(digits, 10)
        assert small.hi < theorem_lower_bound(digits, 100).lo

    def test_targets(self):
        assert _close(target_quotient(ALPHA_ONE), 1 / math.sqrt(2))
        assert _close(target_quotient(GrowthSpec(alpha=4)), 1 / math.sqrt(8))
        assert target_quotient(GrowthSpec(alpha=0)) is None
        assert target_quotient(GrowthSpec(alpha=None)) == Enclosure.point(0)

    def test_r_max(self):
        with pytest.raises(OutOfDomain):
            trajectory(ALPHA_ONE, 0)


class TestLawOfLargeNumbers:
    def test_sample_mean_near_one(self):
        frame = lln_sample(200, 128, 20, seed=20240601)
        summary = lln_summary(frame)
        assert summary["count"] >= 190
        assert abs(summary["mean"] - 1) < 0.2

    def test_deterministic(self):
        first = lln_sample(20, 64, 10, seed=5)
        second = lln_sample(20, 64, 10, seed=5)
        pd.testing.assert_frame_equal(first, second)

    def test_short_expansions_are_skipped(self):
        frame = lln_sample(10, 4, 10, seed=1)
        assert frame.empty
        assert lln_summary(frame)["count"] == 0

    def test_invalid_arguments(self):
        with pytest.raises(OutOfDomain):
            lln_sample(0, 8, 2, seed=1)


def test_construction_honours_precision(monkeypatch):
    requested = []
    original = certified.ceil_exp

    def recording(exponent, precision=None):
        requested.append(precision)
        return original(exponent, precision)

    monkeypatch.setattr(certified, "ceil_exp", recording)
    growth = GrowthSpec(alpha=Fraction(7, 3))
    assert construct_digits(growth, 2, precision=96) == construct_digits(growth, 2)
    assert 96 in requested
