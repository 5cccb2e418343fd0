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
from typing import Callable, List, Sequence, Union

from app.core.digits import is_canonical
from app.core.pierce import decode, encode
from app.errors import BadRange, DegenerateInput, EmptyGenerator, NotInImage, OutOfDomain
from app.models import AffineMap, DigitSeq, FundamentalInterval, to_rational

logger = logging.getLogger(__name__)

Generator = Union[DigitSeq, Sequence[int]]


def _generator(sigma: Generator) -> DigitSeq:
    if not isinstance(sigma, DigitSeq):
        sigma = DigitSeq.terminated(sigma)
    if not sigma.prefix:
        raise EmptyGenerator("A fundamental interval needs at least one digit")
    if not sigma.is_terminated:
        sigma = sigma.head(sigma.length)
    return sigma


def _product(digits) -> int:
    return math.prod(digits)


def fundamental_interval(sigma: Generator) -> FundamentalInterval:
    """I_sigma: the points whose expansion begins with sigma.

    Endpoints are phi(sigma) and phi(sigma'), sigma' raising the last digit by one.
    The phi(sigma) end is closed exactly when sigma is canonical.
    """
    sigma = _generator(sigma)
    successor = DigitSeq.terminated(sigma.prefix[:-1] + (sigma.last + 1,))
    here, there = decode(sigma), decode(successor)
    closed = is_canonical(sigma)
    if sigma.length % 2:
        return FundamentalInterval(generator=sigma, left=there, right=here, left_open=True, right_open=not closed)
    return FundamentalInterval(generator=sigma, left=here, right=there, left_open=not closed, right_open=True)


def contains(sigma: Generator, x) -> bool:
    return fundamental_interval(sigma).contains(to_rational(x))


def children(sigma: Generator, j_max: int) -> List[FundamentalInterval]:
    """I_(sigma, j) for sigma_n < j <= j_max"""
    sigma = _generator(sigma)
    if j_max <= sigma.last:
        raise BadRange(f"j_max must exceed the last digit {sigma.last}, got {j_max}")
    return [fundamental_interval(sigma.prefix + (j,)) for j in range(sigma.last + 1, j_max + 1)]


def unit_partition(j_max: int) -> List[FundamentalInterval]:
    """The one-digit intervals I_(1), ..., I_(j_max); together they tile (1/(j_max+1), 1]"""
    if j_max < 1:
        raise BadRange(f"j_max must be positive, got {j_max}")
    return [fundamental_interval((j,)) for j in range(1, j_max + 1)]


def affine_map(sigma: Generator) -> AffineMap:
    """g_sigma(x) = phi(sigma) + (-1)^n x / (sigma_1 ... sigma_n)"""
    sigma = _generator(sigma)
    sign = -1 if sigma.length % 2 else 1
    return AffineMap(generator=sigma, offset=decode(sigma), slope=Fraction(sign, _product(sigma.prefix)))


def affine_apply(sigma: Generator, x) -> Fraction:
    x = to_rational(x)
    if not 0 <= x <= 1:
        raise OutOfDomain(f"{x} is outside [0, 1]")
    return affine_map(sigma).apply(x)


def affine_invert(sigma: Generator, y) -> Fraction:
    y = to_rational(y)
    mapping = affine_map(sigma)
    if not mapping.image.contains(y):
        raise NotInImage(f"{y} is outside the image {mapping.image} of g_{mapping.generator}")
    return mapping.invert(y)


def replacement_map(sigma: Generator, tau: Generator) -> Callable[[object], Fraction]:
    """g_tau o g_sigma^{-1}: moves points of I_sigma to I_tau keeping the digits after the prefix"""
    sigma, tau = _generator(sigma), _generator(tau)

    def move(y) -> Fraction:
        return affine_apply(tau, affine_invert(sigma, y))

    return move


def find_interval_within(a, b) -> DigitSeq:
    """A generator sigma whose fundamental interval lies inside the open interval (a, b).

    Refines the expansion of the midpoint; the containment is checked exactly
    before returning.
    """
    a, b = to_rational(a), to_rational(b)
    if a >= b:
        raise DegenerateInput(f"Empty interval ({a}, {b})")
    if a < 0 or b > 1:
        raise OutOfDomain(f"({a}, {b}) is not inside [0, 1]")

    midpoint = (a + b) / 2
    digits = encode(midpoint)
    for k in range(1, digits.length + 1):
        candidate = digits.head(k)
        if fundamental_interval(candidate).within_open(a, b):
            logger.debug(f"Interval inside ({a}, {b}) found at prefix length {k}: {candidate}")
            return candidate

    # midpoint = phi(digits); the intervals I_(digits, j) shrink onto it as j grows
    radius = min(midpoint - a, b - midpoint)
    j = max(digits.last + 1, math.floor(1 / (_product(digits.prefix) * radius)) + 1)
    while True:
        candidate = DigitSeq.terminated(digits.prefix + (j,))
        if fundamental_interval(candidate).within_open(a, b):
            logger.debug(f"Interval inside ({a}, {b}) found by extending the midpoint expansion: {candidate}")
            return candidate
        j += 1
