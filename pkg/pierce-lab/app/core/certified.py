# © 2025 Visa.
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

"""Outward-rounded transcendental enclosures on top of mpmath's interval context.

Every result comes back as an exact rational Enclosure; mpmath intervals never
leave this module.
"""
import logging
import math
import threading
from contextlib import contextmanager
from fractions import Fraction
from typing import Callable, Optional, TypeVar, Union

from mpmath import iv, libmp

from app.config import get_settings
from app.errors import OutOfDomain, PrecisionExhausted
from app.models import Enclosure, to_rational

logger = logging.getLogger(__name__)

T = TypeVar("T")
Operand = Union[Enclosure, Fraction, int, str]

# iv.prec is process-global
_precision_lock = threading.RLock()


@contextmanager
def working_precision(bits: int):
    with _precision_lock:
        saved = iv.prec
        iv.prec = bits
        try:
            yield
        finally:
            iv.prec = saved


def _as_enclosure(value: Operand) -> Enclosure:
    if isinstance(value, Enclosure):
        return value
    return Enclosure.point(to_rational(value))


def _rational_interval(value: Fraction):
    return iv.mpf(value.numerator) / iv.mpf(value.denominator)


def to_interval(value: Operand):
    """Outward-rounded mpmath interval containing the operand (call inside working_precision)"""
    enclosure = _as_enclosure(value)
    lo = _rational_interval(enclosure.lo)
    if enclosure.is_point:
        return lo
    return iv.mpf([lo, _rational_interval(enclosure.hi)])


def _endpoint(raw) -> Fraction:
    if raw in (libmp.finf, libmp.fninf, libmp.fnan):
        raise PrecisionExhausted("Interval evaluation overflowed to an infinite endpoint")
    return Fraction(*libmp.to_rational(raw))


def to_enclosure(interval) -> Enclosure:
    lo, hi = interval._mpi_
    return Enclosure(lo=_endpoint(lo), hi=_endpoint(hi))


def _evaluate(function: Callable, value: Operand, precision: Optional[int]) -> Enclosure:
    bits = precision or get_settings().precision
    with working_precision(bits):
        return to_enclosure(function(to_interval(value)))


def exp_enclosure(value: Operand, precision: Optional[int] = None) -> Enclosure:
    return _evaluate(iv.exp, value, precision)


def log_enclosure(value: Operand, precision: Optional[int] = None) -> Enclosure:
    """Natural logarithm; the operand must be strictly positive"""
    enclosure = _as_enclosure(value)
    if enclosure.lo <= 0:
        raise OutOfDomain(f"log is undefined on {enclosure}")
    if enclosure.is_point and enclosure.lo == 1:
        return Enclosure.point(0)
    return _evaluate(iv.ln, enclosure, precision)


def sqrt_enclosure(value: Operand, precision: Optional[int] = None) -> Enclosure:
    enclosure = _as_enclosure(value)
    if enclosure.lo < 0:
        raise OutOfDomain(f"sqrt is undefined on {enclosure}")
    return _evaluate(iv.sqrt, enclosure, precision)


def divide(numerator: Operand, denominator: Operand) -> Enclosure:
    """Exact interval quotient of two rational enclosures"""
    top, bottom = _as_enclosure(numerator), _as_enclosure(denominator)
    if bottom.contains(0):
        raise OutOfDomain(f"Division by an enclosure containing zero: {bottom}")
    corners = [a / b for a in (top.lo, top.hi) for b in (bottom.lo, bottom.hi)]
    return Enclosure(lo=min(corners), hi=max(corners))


def scale(value: Operand, factor) -> Enclosure:
    enclosure, factor = _as_enclosure(value), to_rational(factor)
    return Enclosure.hull(enclosure.lo * factor, enclosure.hi * factor)


def escalate(
    evaluate: Callable[[int], T], accept: Callable[[T], bool], what: str, precision: Optional[int] = None
) -> T:
    """Run evaluate(bits) at doubling precision until accept() holds.

    Starts at `precision` (the configured precision by default); gives up past the configured maximum.
    """
    settings = get_settings()
    bits = precision or settings.precision
    while True:
        result = evaluate(bits)
        if accept(result):
            return result
        if bits * 2 > settings.max_precision:
            raise PrecisionExhausted(f"{what} is still undecided at {bits} bits")
        logger.warning(f"⚠️ {what} undecided at {bits} bits, retrying at {bits * 2}")
        bits *= 2


def ceil_exp(exponent, precision: Optional[int] = None) -> int:
    """The exact integer ceiling of e^exponent for a non-negative rational exponent"""
    exponent = to_rational(exponent)
    if exponent < 0:
        raise OutOfDomain(f"exponent must be non-negative, got {exponent}")
    # e^t has about 1.4427 t bits before the binary point
    magnitude = math.ceil(exponent * Fraction(3, 2)) + 2

    def evaluate(bits: int):
        enclosure = exp_enclosure(exponent, precision=bits + magnitude)
        return math.ceil(enclosure.lo), math.ceil(enclosure.hi)

    low, high = escalate(evaluate, lambda bounds: bounds[0] == bounds[1], f"ceil(e^{exponent})", precision)
    return high
