# © 2025 Visa.
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

from fractions import Fraction
from typing import List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from app.errors import OutOfDomain
from app.models import (
    DigitSeq,
    DriftRecord,
    Enclosure,
    FundamentalInterval,
    StepResult,
    TrajectoryRow,
    ZcPrefix,
    format_rational,
)


def to_decimal(value: Fraction, places: int) -> str:
    """Round half to even at `places` decimals, trailing zeros stripped"""
    if places < 0:
        raise OutOfDomain(f"places must be non-negative, got {places}")
    scaled = round(value * 10 ** places)
    sign = "-" if scaled < 0 else ""
    whole, rest = divmod(abs(scaled), 10 ** places)
    fraction = str(rest).zfill(places).rstrip("0") if places else ""
    return f"{sign}{whole}.{fraction}" if fraction else f"{sign}{whole}"


class OutModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)


# Rational schemas
class RationalOut(OutModel):
    value: str
    decimal: str

    @classmethod
    def build(cls, value: Fraction, places: int) -> "RationalOut":
        return cls(value=format_rational(value), decimal=to_decimal(value, places))

    def plain(self) -> str:
        return f"{self.value} ({self.decimal})"


class EnclosureOut(OutModel):
    lo: str
    hi: str
    lo_decimal: str = Field(alias="loDecimal")
    hi_decimal: str = Field(alias="hiDecimal")

    @classmethod
    def build(cls, enclosure: Enclosure, places: int) -> "EnclosureOut":
        return cls(
            lo=format_rational(enclosure.lo),
            hi=format_rational(enclosure.hi),
            lo_decimal=to_decimal(enclosure.lo, places),
            hi_decimal=to_decimal(enclosure.hi, places),
        )

    def plain(self) -> str:
        if self.lo == self.hi:
            return f"{self.lo} ({self.lo_decimal})"
        return f"[{self.lo}, {self.hi}] ([{self.lo_decimal}, {self.hi_decimal}])"


# Digit schemas
class DigitsOut(OutModel):
    digits: List[int]
    tail: str

    @classmethod
    def build(cls, seq: DigitSeq) -> "DigitsOut":
        return cls(digits=list(seq.prefix), tail=seq.tail.value)


class StepOut(OutModel):
    digit: Optional[int] = None
    remainder: str
    terminal: bool

    @classmethod
    def build(cls, result: StepResult) -> "StepOut":
        return cls(digit=result.digit, remainder=format_rational(result.remainder), terminal=result.is_terminal)


class ZcOut(OutModel):
    prefix: str
    jumps: str

    @classmethod
    def build(cls, item: ZcPrefix, jumps: Sequence[int]) -> "ZcOut":
        return cls(prefix=" ".join(str(d) for d in item.prefix.prefix), jumps=" ".join(str(j) for j in jumps))


# Interval schemas
class IntervalOut(OutModel):
    generator: str
    left: str
    right: str
    left_open: bool = Field(alias="leftOpen")
    right_open: bool = Field(alias="rightOpen")

    @classmethod
    def build(cls, interval: FundamentalInterval) -> "IntervalOut":
        return cls(
            generator=str(interval.generator),
            left=format_rational(interval.left),
            right=format_rational(interval.right),
            left_open=interval.left_open,
            right_open=interval.right_open,
        )


# Calendar schemas
class CountOut(OutModel):
    through: int
    direct: Optional[int] = None
    formula: Optional[int] = None

    @property
    def agrees(self) -> bool:
        return self.direct is None or self.formula is None or self.direct == self.formula


class DriftRowOut(OutModel):
    year: int = Field(alias="N")
    leap_count: int = Field(alias="L")
    drift_lo: str
    drift_hi: str

    @classmethod
    def build(cls, record: DriftRecord) -> "DriftRowOut":
        return cls(
            year=record.year,
            leap_count=record.leap_count,
            drift_lo=format_rational(record.drift.lo),
            drift_hi=format_rational(record.drift.hi),
        )


# Law schemas
class TrajectoryRowOut(OutModel):
    branch: str
    r: int
    year: int = Field(alias="N")
    leap_count: int = Field(alias="L")
    drift_lo: str
    drift_hi: str
    quotient_lo: str
    quotient_hi: str
    thm2: Optional[bool] = None
    # JSON only; the CSV keeps TRAJECTORY_COLUMNS
    log_n: EnclosureOut = Field(alias="logN")
    drift_decimal: List[str] = Field(alias="driftDecimal")
    quotient_decimal: List[str] = Field(alias="quotientDecimal")

    @classmethod
    def build(cls, row: TrajectoryRow, places: int) -> "TrajectoryRowOut":
        return cls(
            branch=row.branch.value,
            r=row.r,
            year=row.year,
            leap_count=row.leap_count,
            drift_lo=format_rational(row.drift.lo),
            drift_hi=format_rational(row.drift.hi),
            quotient_lo=format_rational(row.quotient.lo),
            quotient_hi=format_rational(row.quotient.hi),
            thm2=row.thm2_satisfied,
            log_n=EnclosureOut.build(row.log_year, places),
            drift_decimal=[to_decimal(row.drift.lo, places), to_decimal(row.drift.hi, places)],
            quotient_decimal=[to_decimal(row.quotient.lo, places), to_decimal(row.quotient.hi, places)],
        )


class ErrorResponse(OutModel):
    error: str
    detail: str


# CSV rendering
def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


def to_frame(rows: Sequence[BaseModel], columns: Sequence[str]) -> pd.DataFrame:
    """String-typed frame of the rows' aliased fields, in `columns` order"""
    records = [{key: _cell(value) for key, value in row.model_dump(by_alias=True).items()} for row in rows]
    return pd.DataFrame.from_records(records, columns=list(columns))


def frame_to_csv(frame: pd.DataFrame) -> str:
    cells = frame.apply(lambda column: column.map(_cell)) if len(frame) else frame
    return cells.to_csv(index=False, lineterminator="\n")


DRIFT_COLUMNS = ["N", "L", "drift_lo", "drift_hi"]
TRAJECTORY_COLUMNS = ["branch", "r", "N", "L", "drift_lo", "drift_hi", "quotient_lo", "quotient_hi", "thm2"]
ZC_COLUMNS = ["prefix", "jumps"]
