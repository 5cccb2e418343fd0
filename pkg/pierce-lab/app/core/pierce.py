# © 2025 Visa.
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

import logging
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

from app.config import get_settings
from app.errors import InsufficientPrefix, NonTermination, OutOfDomain
from app.models import DigitSeq, Enclosure, StepResult, to_rational

logger = logging.getLogger(__name__)


def _unit_rational(x) -> Fraction:
    x = to_rational(x)
    if not 0 <= x <= 1:
        raise OutOfDomain(f"{x} is outside [0, 1]")
    return x


def step(x) -> StepResult:
    """One application of the digit map d_1 and the shift T"""
    x = _unit_rational(x)
    if x == 0:
        return StepResult(digit=None, remainder=Fraction(0))
    digit = x.denominator // x.numerator
    return StepResult(digit=digit, remainder=1 - digit * x)


def encode(x, max_steps: Optional[int] = None) -> DigitSeq:
    """Finite Pierce expansion of a rational in [0, 1]"""
    x = _unit_rational(x)
    limit = max_steps if max_steps is not None else get_settings().max_steps
    # x_k = p_k / q with a fixed q; the numerators strictly decrease
    p, q = x.numerator, x.denominator
    digits = []
    while p:
        if len(digits) >= limit:
            raise NonTermination(f"Expansion of {x} did not terminate within {limit} steps")
        digit = q // p
        digits.append(digit)
        p = q - digit * p
    return DigitSeq.terminated(digits)


def running_terms(digits) -> Iterator[Tuple[int, int]]:
    """(A_k, P_k) with S_k = A_k / P_k and P_k = sigma_1 ... sigma_k"""
    numerator, product, sign = 0, 1, 1
    for digit in digits:
        numerator = numerator * digit + sign
        product *= digit
        sign = -sign
        yield numerator, product


def partial_sums(s: DigitSeq, n: int) -> List[Fraction]:
    """The exact partial sums S_1, ..., S_n"""
    s.require(n)
    return [Fraction(a, p) for a, p in running_terms(s.prefix[:n])]


def partial_sum(s: DigitSeq, n: int) -> Fraction:
    if n == 0:
        return Fraction(0)
    s.require(n)
    numerator, product = 0, 1
    for numerator, product in running_terms(s.prefix[:n]):
        pass
    return Fraction(numerator, product)


def decode(s: DigitSeq) -> Fraction:
    if not s.is_terminated:
        raise InsufficientPrefix(f"{s} is a prefix of an infinite expansion; use enclose for its value")
    return partial_sum(s, s.length)


def tail_bound(s: DigitSeq, n: int) -> Fraction:
    """1 / (sigma_1 ... sigma_{n+1}), a bound on |x - S_n|; 0 once a terminated series has ended"""
    if n < 0:
        raise OutOfDomain(f"n must be non-negative, got {n}")
    if s.is_terminated and n >= s.length:
        return Fraction(0)
    s.require(n + 1)
    product = 1
    for digit in s.prefix[: n + 1]:
        product *= digit
    return Fraction(1, product)


def enclose(s: DigitSeq, n: int) -> Enclosure:
    """Bracket the value of s between the consecutive partial sums S_n and S_{n+1}"""
    if n < 1:
        raise OutOfDomain(f"n must be positive, got {n}")
    if s.is_terminated and n >= s.length:
        return Enclosure.point(decode(s))
    s.require(n + 1)
    sums = partial_sums(s, n + 1)
    return Enclosure.hull(sums[n - 1], sums[n])


def value_enclosure(s: DigitSeq) -> Enclosure:
    """The tightest enclosure the known digits of s certify"""
    if s.is_terminated:
        return Enclosure.point(decode(s))
    if s.length < 2:
        # one known digit d: the value lies in [1/d - 1/(d(d+1)), 1/d]
        d = s.prefix[0]
        return Enclosure(lo=Fraction(1, d) - Fraction(1, d * (d + 1)), hi=Fraction(1, d))
    return enclose(s, s.length - 1)
