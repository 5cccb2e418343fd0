# © 2025 Visa.
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.core.digits import is_canonical
from app.core.pierce import (
    decode,
    enclose,
    encode,
    partial_sum,
    partial_sums,
    step,
    tail_bound,
    value_enclosure,
)
from app.errors import InsufficientPrefix, NonTermination, OutOfDomain
from app.models import DigitSeq, Enclosure

# <2, 3, 4, ...> sums to e^-1
FACTORIAL_DIGITS = DigitSeq.extendable(range(2, 15))

unit_rationals = st.fractions(min_value=0, max_value=1, max_denominator=10 ** 6)


class TestStep:
    def test_digit_and_remainder(self):
        result = step(Fraction(3, 10))
        assert result.digit == 3
        assert result.remainder == Fraction(1, 10)
        assert not result.is_terminal

    def test_zero_has_infinite_digit(self):
        result = step(0)
        assert result.digit is None
        assert result.is_terminal

    def test_one(self):
        result = step(1)
        assert (result.digit, result.remainder) == (1, 0)

    def test_outside_unit_interval(self):
        with pytest.raises(OutOfDomain):
            step(Fraction(3, 2))


class TestEncode:
    @pytest.mark.parametrize(
        "x, digits",
        [
            (Fraction(0), ()),
            (Fraction(1), (1,)),
            (Fraction(1, 3), (3,)),
            (Fraction(2, 5), (2, 5)),
            (Fraction(3, 4), (1, 4)),
        ],
    )
    def test_known_expansions(self, x, digits):
        assert encode(x) == DigitSeq.terminated(digits)

    def test_round_trip_small_denominators(self):
        for q in range(1, 301):
            for p in range(1, q + 1):
                if math.gcd(p, q) != 1:
                    continue
                x = Fraction(p, q)
                seq = encode(x)
                assert decode(seq) == x
                assert is_canonical(seq)
                assert all(a < b for a, b in zip(seq.prefix, seq.prefix[1:]))

    def test_negative(self):
        with pytest.raises(OutOfDomain):
            encode(Fraction(-1, 2))

    def test_step_cap(self):
        with pytest.raises(NonTermination):
            encode(Fraction(2, 5), max_steps=1)

    def test_accepts_rational_strings(self):
        assert encode("2/5") == encode(Fraction(2, 5))
        assert encode("0.4") == encode(Fraction(2, 5))

    def test_rejects_floats(self):
        with pytest.raises(ValueError):
            encode(0.4)

    @given(unit_rationals)
    def test_codec_property(self, x):
        seq = encode(x)
        assert decode(seq) == x
        assert is_canonical(seq)


class TestPartialSums:
    def test_e_inverse_partial_sum(self):
        assert partial_sum(FACTORIAL_DIGITS, 5) == Fraction(53, 144)
        assert partial_sums(FACTORIAL_DIGITS, 3) == [Fraction(1, 2), Fraction(1, 3), Fraction(3, 8)]

    def test_empty_sum(self):
        assert partial_sum(FACTORIAL_DIGITS, 0) == 0

    def test_reads_past_prefix(self):
        with pytest.raises(InsufficientPrefix):
            partial_sums(DigitSeq.extendable((2, 3)), 3)

    def test_decode_needs_terminated(self):
        with pytest.raises(InsufficientPrefix):
            decode(FACTORIAL_DIGITS)


class TestEnclosures:
    def test_e_inverse(self):
        enclosure = enclose(FACTORIAL_DIGITS, 12)
        assert float(enclosure.lo) <= math.exp(-1) <= float(enclosure.hi)
        assert enclosure.width < Fraction(1, 10 ** 8)

    def test_terminated_is_exact(self):
        seq = DigitSeq.terminated((2, 5))
        assert enclose(seq, 2) == Enclosure.point(Fraction(2, 5))
        assert tail_bound(seq, 2) == 0

    def test_tail_bound(self):
        assert tail_bound(DigitSeq.extendable((2, 3, 4)), 2) == Fraction(1, 24)
        assert tail_bound(DigitSeq.extendable((2, 3, 4)), 0) == Fraction(1, 2)

    def test_n_must_be_positive(self):
        with pytest.raises(OutOfDomain):
            enclose(FACTORIAL_DIGITS, 0)

    def test_needs_next_digit(self):
        with pytest.raises(InsufficientPrefix):
            enclose(DigitSeq.extendable((2, 3)), 2)

    def test_single_digit_value(self):
        enclosure = value_enclosure(DigitSeq.extendable((3,)))
        assert enclosure == Enclosure(lo=Fraction(1, 4), hi=Fraction(1, 3))

    def test_seeded_prefixes_nest(self, philox):
        rng = philox(20240501)
        for _ in range(100):
            steps = rng.integers(1, 6, size=12)
            digits = [int(d) for d in steps.cumsum()]
            seq = DigitSeq.extendable(digits)
            previous = None
            for n in range(1, 12):
                enclosure = enclose(seq, n)
                assert enclosure.width == tail_bound(seq, n)
                if previous is not None:
                    assert previous.contains_enclosure(enclosure)
                previous = enclosure

    @given(st.lists(st.integers(min_value=1, max_value=40), min_size=3, max_size=10, unique=True).map(sorted))
    def test_terminated_value_inside_prefix_enclosures(self, digits):
        value = decode(DigitSeq.terminated(digits))
        window = DigitSeq.extendable(digits)
        for n in range(1, len(digits) - 1):
            assert enclose(window, n).contains(value)
