# © 2025 Visa.
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

import re
from enum import Enum
from fractions import Fraction
from typing import Annotated, Optional, Tuple

from pydantic import BaseModel, ConfigDict, PlainSerializer, PlainValidator, model_validator

from app.errors import InvalidDigit, InvalidRule, MalformedTail, NotMonotone, OutOfDomain, InsufficientPrefix

_RATIONAL_PATTERN = re.compile(r"[+-]?(\d+(/\d+)?|\d*\.\d+)")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer or a finite decimal into an exact Fraction"""
    text = text.strip()
    if not _RATIONAL_PATTERN.fullmatch(text):
        raise ValueError(f"'{text}' is not a rational literal (expected p/q, an integer or a decimal)")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ValueError(f"'{text}' has a zero denominator")


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def to_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise ValueError(f"Cannot use {value!r} as an exact rational; floats are not accepted")


Rational = Annotated[
    Fraction,
    PlainValidator(to_rational),
    PlainSerializer(format_rational, return_type=str, when_used="json"),
]


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


# Digit sequences

class Tail(str, Enum):
    TERMINATED = "terminated"
    EXTENDABLE = "extendable"


class DigitSeq(FrozenModel):
    """A strictly increasing prefix of Pierce digits.

    A terminated sequence is followed by infinitely many ∞ digits (an element of
    some Sigma_n, or Sigma_0 when the prefix is empty). An extendable sequence is
    a finite window on an infinite strictly increasing sequence; reading past its
    end raises InsufficientPrefix.
    """

    prefix: Tuple[int, ...] = ()
    tail: Tail = Tail.TERMINATED

    @model_validator(mode="after")
    def check_digits(self):
        previous = 0
        for position, digit in enumerate(self.prefix, start=1):
            if digit < 1:
                raise InvalidDigit(f"Digit {digit} at position {position} is not a positive integer")
            if digit <= previous:
                raise NotMonotone(
                    f"Digits must strictly increase: position {position} has {digit} after {previous}"
                )
            previous = digit
        if not self.prefix and self.tail == Tail.EXTENDABLE:
            raise MalformedTail("An extendable sequence needs at least one known digit")
        return self

    @classmethod
    def terminated(cls, digits) -> "DigitSeq":
        return cls(prefix=tuple(digits), tail=Tail.TERMINATED)

    @classmethod
    def extendable(cls, digits) -> "DigitSeq":
        return cls(prefix=tuple(digits), tail=Tail.EXTENDABLE)

    @classmethod
    def parse(cls, text: str) -> "DigitSeq":
        """Parse "3,8,21" (terminated), "3,8,21,..." (extendable) or "0" (the expansion of 0)"""
        text = text.strip()
        if text == "0":
            return cls()
        tokens = [token.strip() for token in text.split(",")]
        tail = Tail.TERMINATED
        if tokens and tokens[-1] == "...":
            tail = Tail.EXTENDABLE
            tokens = tokens[:-1]
        if not tokens or any(not token.isdigit() for token in tokens):
            raise ValueError(f"'{text}' is not a digit sequence (expected e.g. 3,8,21 or 3,8,21,...)")
        return cls(prefix=tuple(int(token) for token in tokens), tail=tail)

    @property
    def length(self) -> int:
        return len(self.prefix)

    @property
    def is_terminated(self) -> bool:
        return self.tail == Tail.TERMINATED

    @property
    def last(self) -> int:
        if not self.prefix:
            raise InsufficientPrefix("The empty sequence has no last digit")
        return self.prefix[-1]

    def require(self, count: int) -> None:
        """Raise InsufficientPrefix unless at least `count` digits are known"""
        if count > len(self.prefix):
            raise InsufficientPrefix(
                f"Operation reads {count} digits but only {len(self.prefix)} are available ({self})"
            )

    def head(self, k: int) -> "DigitSeq":
        """The first k digits as a terminated sequence (a fundamental-interval generator)"""
        self.require(k)
        return DigitSeq(prefix=self.prefix[:k], tail=Tail.TERMINATED)

    def __str__(self) -> str:
        if not self.prefix:
            return "0"
        body = ",".join(str(d) for d in self.prefix)
        return f"{body},..." if self.tail == Tail.EXTENDABLE else body


class SequenceClass(str, Enum):
    SIGMA0 = "sigma0"
    SIGMA_N = "sigmaN"
    SIGMA_INFINITY_PREFIX = "sigmaInfinityPrefix"


class CanonicityReport(FrozenModel):
    kind: SequenceClass
    length: int
    canonical: bool


class ZcPrefix(FrozenModel):
    prefix: DigitSeq
    c: Rational
    start_index: int

    @model_validator(mode="after")
    def check_bound(self):
        if self.c < 0:
            raise OutOfDomain(f"c must be non-negative, got {self.c}")
        if self.start_index < 1:
            raise OutOfDomain(f"start index must be positive, got {self.start_index}")
        for n, digit in enumerate(self.prefix.prefix, start=1):
            if n >= self.start_index and digit > n + self.c:
                raise OutOfDomain(f"Digit {digit} at position {n} exceeds the bound {n} + {self.c}")
        return self


# Codec

class StepResult(FrozenModel):
    digit: Optional[int]  # None is the ∞ digit of x = 0
    remainder: Rational

    @property
    def is_terminal(self) -> bool:
        return self.digit is None or self.remainder == 0


class Enclosure(FrozenModel):
    """Closed rational interval [lo, hi] certified to contain a real quantity"""

    lo: Rational
    hi: Rational

    @model_validator(mode="after")
    def check_order(self):
        if self.lo > self.hi:
            raise OutOfDomain(f"Enclosure bounds out of order: [{self.lo}, {self.hi}]")
        return self

    @classmethod
    def point(cls, value) -> "Enclosure":
        return cls(lo=value, hi=value)

    @classmethod
    def hull(cls, a, b) -> "Enclosure":
        return cls(lo=min(a, b), hi=max(a, b))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def contains_enclosure(self, other: "Enclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __str__(self) -> str:
        if self.is_point:
            return format_rational(self.lo)
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


# Intervals

class FundamentalInterval(FrozenModel):
    generator: DigitSeq
    left: Rational
    right: Rational
    left_open: bool
    right_open: bool

    @model_validator(mode="after")
    def check_bounds(self):
        if not self.left < self.right:
            raise OutOfDomain(f"Degenerate interval [{self.left}, {self.right}]")
        return self

    def contains(self, x) -> bool:
        above = x > self.left if self.left_open else x >= self.left
        below = x < self.right if self.right_open else x <= self.right
        return above and below

    def within_open(self, a, b) -> bool:
        """Whether this interval is a subset of the open interval (a, b)"""
        left_ok = self.left > a or (self.left == a and self.left_open)
        right_ok = self.right < b or (self.right == b and self.right_open)
        return left_ok and right_ok

    @property
    def width(self) -> Fraction:
        return self.right - self.left

    def __str__(self) -> str:
        opening = "(" if self.left_open else "["
        closing = ")" if self.right_open else "]"
        return f"{opening}{format_rational(self.left)}, {format_rational(self.right)}{closing}"


class AffineMap(FrozenModel):
    """x -> offset + slope * x, prepending the generator's digits to an expansion"""

    generator: DigitSeq
    offset: Rational
    slope: Rational

    def apply(self, x) -> Fraction:
        return self.offset + self.slope * x

    def invert(self, y) -> Fraction:
        return (y - self.offset) / self.slope

    @property
    def image(self) -> Enclosure:
        return Enclosure.hull(self.offset, self.offset + self.slope)


# Calendar

class RuleKind(str, Enum):
    EXPLICIT = "explicit"
    PIERCE_DERIVED = "pierceDerived"


class IntercalationRule(FrozenModel):
    """Intercalation sequence: positive integers with every term after the first at least 2.

    An extendable rule is a finite window on an infinite sequence.
    """

    terms: Tuple[int, ...]
    kind: RuleKind = RuleKind.EXPLICIT
    extendable: bool = False

    @model_validator(mode="after")
    def check_terms(self):
        if not self.terms:
            raise InvalidRule("An intercalation rule needs at least one term")
        if self.terms[0] < 1:
            raise InvalidRule(f"The first term must be positive, got {self.terms[0]}")
        for k, term in enumerate(self.terms[1:], start=2):
            if term < 2:
                raise InvalidRule(f"Term {k} is {term}; terms after the first must be at least 2")
        return self

    @classmethod
    def from_digits(cls, digits: DigitSeq) -> "IntercalationRule":
        if not digits.prefix:
            raise InvalidRule("The expansion of 0 has no digits to use as a rule")
        return cls(terms=digits.prefix, kind=RuleKind.PIERCE_DERIVED, extendable=not digits.is_terminated)

    def __str__(self) -> str:
        body = ",".join(str(t) for t in self.terms)
        return f"{body},..." if self.extendable else body


class DriftRecord(FrozenModel):
    year: int
    leap_count: int
    drift: Enclosure


# Exceptional-set laboratory

class GrowthSpec(FrozenModel):
    alpha: Optional[Rational] = None  # None is α = ∞

    @model_validator(mode="after")
    def check_alpha(self):
        if self.alpha is not None and self.alpha < 0:
            raise OutOfDomain(f"alpha must be non-negative, got {self.alpha}")
        return self

    @classmethod
    def parse(cls, text: str) -> "GrowthSpec":
        if text.strip().lower() in ("inf", "infinity", "∞"):
            return cls(alpha=None)
        return cls(alpha=parse_rational(text))

    @property
    def is_infinite(self) -> bool:
        return self.alpha is None

    def __str__(self) -> str:
        return "inf" if self.alpha is None else format_rational(self.alpha)


class Branch(str, Enum):
    LIMSUP = "N"
    LIMINF = "M"


class TrajectoryRow(FrozenModel):
    branch: Branch
    r: int
    year: int
    leap_count: int
    drift: Enclosure
    log_year: Enclosure
    quotient: Enclosure
    thm2_satisfied: Optional[bool] = None
