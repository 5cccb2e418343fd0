# © 2025 Visa.
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

import logging
import math
from typing import Iterable, List, Sequence, Union

from app.errors import IllFormedReplacement, InsufficientPrefix, MalformedTail, OutOfDomain, ThetaViolation
from app.models import CanonicityReport, DigitSeq, SequenceClass, Tail, ZcPrefix, to_rational

logger = logging.getLogger(__name__)

INFINITY = math.inf


def is_infinity(entry) -> bool:
    """Whether a sequence entry is the ∞ digit (None, math.inf or the string 'inf')"""
    if entry is None:
        return True
    if isinstance(entry, str):
        return entry.strip().lower() in ("inf", "∞")
    return entry == INFINITY


def is_canonical(seq: DigitSeq) -> bool:
    """False exactly for terminated sequences of length n >= 2 ending in sigma_{n-1} + 1"""
    digits = seq.prefix
    if not seq.is_terminated or len(digits) < 2:
        return True
    return digits[-1] != digits[-2] + 1


def classify(seq: Union[DigitSeq, Sequence], extendable: bool = False) -> CanonicityReport:
    """Place a sequence of extended positive integers in Sigma_0, Sigma_n or Sigma_infinity.

    A plain list is read as terminated: its finite entries may be followed by ∞
    markers, never by further finite entries. Pass extendable=True for a list that
    is a prefix of an infinite sequence.
    """
    if not isinstance(seq, DigitSeq):
        finite = []
        seen_infinity = False
        for position, entry in enumerate(seq, start=1):
            if is_infinity(entry):
                seen_infinity = True
                continue
            if seen_infinity:
                raise MalformedTail(f"Finite entry {entry} at position {position} follows an ∞ digit")
            finite.append(entry)
        if seen_infinity and extendable:
            raise MalformedTail("A sequence containing ∞ digits cannot be extendable")
        seq = DigitSeq(prefix=tuple(finite), tail=Tail.EXTENDABLE if extendable else Tail.TERMINATED)

    if not seq.prefix:
        return CanonicityReport(kind=SequenceClass.SIGMA0, length=0, canonical=True)
    if not seq.is_terminated:
        return CanonicityReport(kind=SequenceClass.SIGMA_INFINITY_PREFIX, length=seq.length, canonical=True)
    return CanonicityReport(kind=SequenceClass.SIGMA_N, length=seq.length, canonical=is_canonical(seq))


def replace_prefix(x: DigitSeq, tau: Iterable[int]) -> DigitSeq:
    """Swap the first len(tau) digits of x for tau, keeping the remaining digits of x"""
    replacement = DigitSeq.terminated(tau)  # validates tau itself
    k = replacement.length
    if not x.is_terminated and x.length <= k:
        raise InsufficientPrefix(
            f"Cannot check the replacement: {x} shows no digit after position {k}"
        )
    rest = x.prefix[k:]
    if rest and replacement.prefix and replacement.prefix[-1] >= rest[0]:
        raise IllFormedReplacement(
            f"Replacement ends with {replacement.prefix[-1]} but the next digit of x is {rest[0]}"
        )
    return DigitSeq(prefix=replacement.prefix + rest, tail=x.tail)


def theta_profile(seq: DigitSeq) -> List[int]:
    """theta(sigma, n) = sigma_n - n along the known digits"""
    return [digit - n for n, digit in enumerate(seq.prefix, start=1)]


def enumerate_zc(c, start_index: int, depth: int) -> List[ZcPrefix]:
    """All strictly increasing prefixes of length `depth` with sigma_n <= n + c for every n >= start_index.

    Output is lexicographically sorted.
    """
    c = to_rational(c)
    if c < 0:
        raise OutOfDomain(f"c must be non-negative, got {c}")
    if start_index < 1:
        raise OutOfDomain(f"start index must be positive, got {start_index}")
    if depth < start_index:
        raise OutOfDomain(f"depth {depth} is below the start index {start_index}")

    floor_c = math.floor(c)
    bound_at_start = start_index + floor_c

    def ceiling(n: int) -> int:
        if n >= start_index:
            return n + floor_c
        # only strict increase up to the bounded digit at the start index limits these
        return bound_at_start - (start_index - n)

    found = []

    def extend(prefix: List[int]) -> None:
        n = len(prefix) + 1
        if n > depth:
            found.append(tuple(prefix))
            return
        low = prefix[-1] + 1 if prefix else 1
        for digit in range(low, ceiling(n) + 1):
            prefix.append(digit)
            extend(prefix)
            prefix.pop()

    extend([])
    logger.debug(f"Z_c enumeration c={c} M={start_index} depth={depth}: {len(found)} prefixes")
    return [ZcPrefix(prefix=DigitSeq.extendable(p), c=c, start_index=start_index) for p in found]


def jump_positions(p: ZcPrefix) -> List[int]:
    """Positions where theta(sigma, n) increases, repeated once per unit of increase.

    Within the prefix this is the jump tuple (n_1 <= n_2 <= ...) of the
    countability argument; position 1 appears theta(sigma, 1) times.
    """
    floor_c = math.floor(p.c)
    positions = []
    previous = 0
    for n, theta in enumerate(theta_profile(p.prefix), start=1):
        if theta < previous:
            raise ThetaViolation(f"theta decreases at position {n} ({previous} -> {theta})")
        if theta > floor_c:
            raise ThetaViolation(f"theta reaches {theta} at position {n}, above floor(c) = {floor_c}")
        positions.extend([n] * (theta - previous))
        previous = theta
    return positions
