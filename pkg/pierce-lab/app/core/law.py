# © 2025 Visa.
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

"""Finite-horizon diagnostics for the digit-growth classes and their leap-year quotients."""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from app.config import get_settings
from app.core import calendar, certified
from app.core.pierce import enclose, encode, decode
from app.errors import InsufficientPrefix, OutOfDomain
from app.models import (
    Branch,
    DigitSeq,
    DriftRecord,
    Enclosure,
    GrowthSpec,
    IntercalationRule,
    TrajectoryRow,
)

logger = logging.getLogger(__name__)


@lru_cache(maxsize=4096)
def _target_digit(alpha: Optional[Fraction], k: int, precision: Optional[int] = None) -> int:
    if alpha is None:
        return certified.ceil_exp(k * k, precision)
    if alpha == 0:
        return k + 1
    return certified.ceil_exp(alpha * k, precision)


def construct_digits(growth: GrowthSpec, n: int, precision: Optional[int] = None) -> DigitSeq:
    """The first n digits of a point whose digits grow like e^(alpha k).

    d_k = max(d_{k-1} + 1, ceil(e^(alpha k))); alpha = 0 gives k + 1 and
    alpha = inf gives ceil(e^(k^2)).
    """
    if n < 1:
        raise OutOfDomain(f"n must be positive, got {n}")
    digits = []
    for k in range(1, n + 1):
        previous = digits[-1] if digits else 0
        digits.append(max(previous + 1, _target_digit(growth.alpha, k, precision)))
    return DigitSeq.extendable(digits)


def growth_rate(s: DigitSeq, n: int, precision: Optional[int] = None) -> Enclosure:
    """(log d_n) / n"""
    if n < 1:
        raise OutOfDomain(f"n must be positive, got {n}")
    s.require(n)
    return certified.scale(certified.log_enclosure(s.prefix[n - 1], precision), Fraction(1, n))


def log_product_rate(s: DigitSeq, n: int, precision: Optional[int] = None) -> Enclosure:
    """log(d_1 ... d_n) / (n^2 / 2)"""
    if n < 1:
        raise OutOfDomain(f"n must be positive, got {n}")
    s.require(n)
    product = math.prod(s.prefix[:n])
    return certified.scale(certified.log_enclosure(product, precision), Fraction(2, n * n))


def reciprocal_partial_sum(s: DigitSeq, n: int) -> Fraction:
    if n < 0:
        raise OutOfDomain(f"n must be non-negative, got {n}")
    s.require(n)
    return sum((Fraction(1, d) for d in s.prefix[:n]), Fraction(0))


def extremal_year(s: DigitSeq, j: int) -> int:
    """N_j = -1 + d_1 - d_1 d_2 + ... + (-1)^(j+1) d_1 ... d_j (negative for even j)"""
    if j < 1:
        raise OutOfDomain(f"j must be positive, got {j}")
    s.require(j)
    total, product, sign = -1, 1, 1
    for digit in s.prefix[:j]:
        product *= digit
        total += sign * product
        sign = -sign
    return total


def extremal_years(s: DigitSeq, r: int) -> Tuple[int, int]:
    """(N_{2r+1}, M_{2r}) with M_{2r} = -N_{2r}; the years where the drift peaks and dips"""
    if r < 1:
        raise OutOfDomain(f"r must be positive, got {r}")
    s.require(2 * r + 1)
    return extremal_year(s, 2 * r + 1), -extremal_year(s, 2 * r)


def _x_enclosure(s: DigitSeq, year: int, guard: int) -> Enclosure:
    """Enclose the point of s using guard digits past the last product not above year"""
    if s.is_terminated:
        return Enclosure.point(decode(s))
    product, known = 1, 0
    for digit in s.prefix:
        if product * digit > year:
            break
        product *= digit
        known += 1
    else:
        raise InsufficientPrefix(f"The {s.length} known digits of {s} multiply to at most {year}")
    needed = max(known + guard, 2)
    s.require(needed)
    return enclose(s, needed - 1)


def _evaluate_year(
    s: DigitSeq, year: int, guard: int, precision: Optional[int]
) -> Tuple[DriftRecord, Enclosure, Enclosure]:
    if year < 2:
        raise OutOfDomain(f"The quotient needs log N > 0, got N = {year}")
    x = _x_enclosure(s, year, guard)
    record = calendar.drift(x, IntercalationRule.from_digits(s), year)
    log_year = certified.log_enclosure(year, precision)
    quotient = certified.divide(record.drift, certified.sqrt_enclosure(log_year, precision))
    return record, log_year, quotient


def quotient_enclosure(s: DigitSeq, year: int, guard: Optional[int] = None, precision: Optional[int] = None) -> Enclosure:
    """(N x - L(d(x), N)) / sqrt(log N) for the point x with digits s"""
    guard = guard if guard is not None else get_settings().guard
    if guard < 1:
        raise OutOfDomain(f"guard must be positive, got {guard}")
    _, _, quotient = _evaluate_year(s, year, guard, precision)
    return quotient


def trajectory(
    growth: GrowthSpec, r_max: int, guard: Optional[int] = None, precision: Optional[int] = None
) -> List[TrajectoryRow]:
    """Certified quotients along N_{2r+1} and M_{2r} for r = 1..r_max.

    Rows come ordered by branch (N before M), then by r. N rows also record
    whether the drift clears r/4.
    """
    if r_max < 1:
        raise OutOfDomain(f"r_max must be positive, got {r_max}")
    guard = guard if guard is not None else get_settings().guard
    if guard < 1:
        raise OutOfDomain(f"guard must be positive, got {guard}")
    digits = construct_digits(growth, 2 * r_max + 1 + guard, precision)
    logger.info(f"📈 Trajectory alpha={growth} r_max={r_max} guard={guard}")

    rows = {Branch.LIMSUP: [], Branch.LIMINF: []}
    for r in range(1, r_max + 1):
        years = extremal_years(digits, r)
        for branch, year in zip((Branch.LIMSUP, Branch.LIMINF), years):
            record, log_year, quotient = _evaluate_year(digits, year, guard, precision)
            satisfied = record.drift.lo >= Fraction(r, 4) if branch == Branch.LIMSUP else None
            rows[branch].append(
                TrajectoryRow(
                    branch=branch,
                    r=r,
                    year=year,
                    leap_count=record.leap_count,
                    drift=record.drift,
                    log_year=log_year,
                    quotient=quotient,
                    thm2_satisfied=satisfied,
                )
            )
    failures = [row.r for row in rows[Branch.LIMSUP] if not row.thm2_satisfied]
    if failures:
        logger.warning(f"⚠️ Drift below r/4 at r = {failures}")
    return rows[Branch.LIMSUP] + rows[Branch.LIMINF]


def theorem_lower_bound(s: DigitSeq, r: int, precision: Optional[int] = None) -> Enclosure:
    """(r/4) / sqrt(log N_{2r+1}), a certified floor under the quotient at N_{2r+1}"""
    year, _ = extremal_years(s, r)
    root = certified.sqrt_enclosure(certified.log_enclosure(year, precision), precision)
    return certified.divide(Fraction(r, 4), root)


def target_quotient(growth: GrowthSpec, precision: Optional[int] = None) -> Optional[Enclosure]:
    """1/sqrt(2 alpha); None stands for the infinite target of alpha = 0"""
    if growth.is_infinite:
        return Enclosure.point(0)
    if growth.alpha == 0:
        return None
    return certified.divide(1, certified.sqrt_enclosure(2 * growth.alpha, precision))


def _uniform_numerator(rng: np.random.Generator, bits: int) -> int:
    """Uniform integer in [1, 2^bits]"""
    raw = int.from_bytes(rng.bytes((bits + 7) // 8), "big")
    return (raw & ((1 << bits) - 1)) + 1


def lln_sample(count: int, bits: int, n: int, seed: int, precision: Optional[int] = None) -> pd.DataFrame:
    """(log d_n)/n over `count` uniform rationals k / 2^bits, drawn with Philox seeded by `seed`.

    Points whose expansion stops before n digits are skipped.
    """
    if count < 1 or bits < 1 or n < 1:
        raise OutOfDomain(f"count, bits and n must be positive, got ({count}, {bits}, {n})")
    rng = np.random.Generator(np.random.Philox(seed))
    denominator = 1 << bits
    records = []
    skipped = 0
    for index in range(count):
        numerator = _uniform_numerator(rng, bits)
        digits = encode(Fraction(numerator, denominator))
        if digits.length < n:
            skipped += 1
            continue
        rate = growth_rate(digits, n, precision)
        records.append(
            {
                "sample": index,
                "numerator": str(numerator),
                "digits": digits.length,
                "rate_lo": rate.lo,
                "rate_hi": rate.hi,
                "rate": float(rate.midpoint),
            }
        )
    if skipped:
        logger.warning(f"⚠️ Skipped {skipped} of {count} samples with fewer than {n} digits")
    return pd.DataFrame.from_records(
        records, columns=["sample", "numerator", "digits", "rate_lo", "rate_hi", "rate"]
    )


def lln_summary(frame: pd.DataFrame) -> dict:
    """count / mean / std / min / max of the sampled rates"""
    stats = frame["rate"].describe()
    return {
        "count": int(stats["count"]),
        "mean": float(stats["mean"]) if len(frame) else None,
        "std": float(stats["std"]) if len(frame) > 1 else None,
        "min": float(stats["min"]) if len(frame) else None,
        "max": float(stats["max"]) if len(frame) else None,
    }
