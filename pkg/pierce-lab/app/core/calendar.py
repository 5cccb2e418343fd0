# © 2025 Visa.
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence

from app.config import get_settings
from app.core.pierce import running_terms
from app.errors import InsufficientPrefix, InvalidRule, OutOfDomain, ToleranceExceeded
from app.models import DriftRecord, Enclosure, IntercalationRule, to_rational

logger = logging.getLogger(__name__)

JULIAN = IntercalationRule(terms=(4,))
GREGORIAN = IntercalationRule(terms=(4, 25, 4))
# fractional part of the tropical year, 365.242189 days
ETA = Fraction(242189, 1000000)

PRESETS = {
    "julian": JULIAN,
    "gregorian": GREGORIAN,
}


def parse_rule(text: str) -> IntercalationRule:
    """A preset name, "4,25,4" (finite) or "3,8,21,..." (window on an infinite rule)"""
    key = text.strip().lower()
    if key in PRESETS:
        return PRESETS[key]
    tokens = [token.strip() for token in key.split(",")]
    extendable = bool(tokens) and tokens[-1] == "..."
    if extendable:
        tokens = tokens[:-1]
    if not tokens or any(not token.isdigit() for token in tokens):
        raise InvalidRule(f"'{text}' is neither a preset ({', '.join(PRESETS)}) nor a comma-separated rule")
    return IntercalationRule(terms=tuple(int(token) for token in tokens), extendable=extendable)


def mul(m: int, n: int) -> int:
    """1 if m is a multiple of n, else 0"""
    if m < 1 or n < 1:
        raise OutOfDomain(f"mul needs positive integers, got ({m}, {n})")
    return 1 if m % n == 0 else 0


def _products(rule: IntercalationRule, limit: int) -> List[int]:
    """The cumulative products sigma_1 ... sigma_k not exceeding limit"""
    products = []
    product = 1
    for term in rule.terms:
        product *= term
        if product > limit:
            return products
        products.append(product)
    if rule.extendable:
        raise InsufficientPrefix(
            f"The known terms of {rule} multiply to {product} <= {limit}; more terms are needed"
        )
    return products


def _check_year(year: int) -> None:
    if year < 1:
        raise OutOfDomain(f"Years start at 1, got {year}")


def _alternating_mul(year: int, products: Sequence[int]) -> int:
    """sum_k (-1)^(k+1) mul(year, P_k)"""
    total = 0
    for k, product in enumerate(products):
        # each product divides the next, so the first miss ends the sum
        if not mul(year, product):
            break
        total += 1 if k % 2 == 0 else -1
    return total


def is_leap(rule: IntercalationRule, year: int) -> bool:
    _check_year(year)
    return _alternating_mul(year, _products(rule, year)) == 1


def count_leaps_between(rule: IntercalationRule, start: int, stop: int) -> int:
    """Leap years in start..stop inclusive; adjacent ranges add up"""
    _check_year(start)
    if stop < start:
        return 0
    # products above a year contribute nothing to it
    products = _products(rule, stop)
    return sum(1 for year in range(start, stop + 1) if _alternating_mul(year, products) == 1)


def count_leaps_direct(rule: IntercalationRule, through: int) -> int:
    """L(rule, N) by testing every year 1..N"""
    _check_year(through)
    return count_leaps_between(rule, 1, through)


def count_leaps_formula(rule: IntercalationRule, through: int) -> int:
    """L(rule, N) = sum_k (-1)^(k+1) floor(N / (sigma_1 ... sigma_k))"""
    _check_year(through)
    products = _products(rule, through)
    return sum(through // product if k % 2 == 0 else -(through // product) for k, product in enumerate(products))


def series_value(rule: IntercalationRule, n: Optional[int] = None) -> Enclosure:
    """The average fraction of a leap day per year, 1/sigma_1 - 1/(sigma_1 sigma_2) + ...

    Exact for a finite rule. For an infinite rule the first n terms are summed and
    the tail is bracketed: by S_{n+1} when that term is known, otherwise by half
    the last term (every later term is at least 2).
    """
    if not rule.extendable:
        numerator, product = 0, 1
        for numerator, product in running_terms(rule.terms):
            pass
        return Enclosure.point(Fraction(numerator, product))

    known = len(rule.terms)
    n = known if n is None else n
    if n < 1:
        raise OutOfDomain(f"n must be positive, got {n}")
    if n > known:
        raise InsufficientPrefix(f"series_value reads {n} terms but {rule} has {known}")
    sums = [Fraction(a, p) for a, p in running_terms(rule.terms[: n + 1])]
    if n < known:
        return Enclosure.hull(sums[n - 1], sums[n])
    head = sums[n - 1]
    product = math.prod(rule.terms[:n])
    sign = 1 if n % 2 == 0 else -1
    return Enclosure.hull(head, head + Fraction(sign, 2 * product))


def drift(x, rule: IntercalationRule, through: int, tolerance=None) -> DriftRecord:
    """N x - L(rule, N) with x given exactly or as an enclosure.

    The drift width is checked against `tolerance`, or PIERCE_DRIFT_TOLERANCE when that is unset.
    """
    _check_year(through)
    if tolerance is None:
        tolerance = get_settings().drift_tolerance
    x = x if isinstance(x, Enclosure) else Enclosure.point(to_rational(x))
    if x.lo < 0 or x.hi > 1:
        raise OutOfDomain(f"x = {x} is not inside [0, 1]")
    leap_count = count_leaps_formula(rule, through)
    enclosure = Enclosure(lo=through * x.lo - leap_count, hi=through * x.hi - leap_count)
    if tolerance is not None and enclosure.width > to_rational(tolerance):
        raise ToleranceExceeded(
            f"Drift at N={through} has width {float(enclosure.width):.3g} above the tolerance {tolerance}"
        )
    return DriftRecord(year=through, leap_count=leap_count, drift=enclosure)


def drift_table(x, rule: IntercalationRule, through: int, every: int = 1, tolerance=None) -> List[DriftRecord]:
    """Drift records for N = every, 2*every, ... up to through"""
    if every < 1:
        raise OutOfDomain(f"every must be positive, got {every}")
    records = [drift(x, rule, year, tolerance) for year in range(every, through + 1, every)]
    logger.debug(f"Drift table for rule {rule}: {len(records)} rows through {through}")
    return records
