# © 2025 Visa.
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

"""Exception hierarchy shared by the core modules and the CLI."""


class PierceError(Exception):
    """Base class for every domain error. Carries a detail message and the CLI exit code."""

    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    @property
    def name(self) -> str:
        return type(self).__name__


class UsageError(PierceError):
    exit_code = 2


class ConfigurationError(PierceError):
    pass


# Digit sequences
class NotMonotone(PierceError):
    pass


class MalformedTail(PierceError):
    pass


class InvalidDigit(PierceError):
    pass


class IllFormedReplacement(PierceError):
    pass


class InsufficientPrefix(PierceError):
    pass


class ThetaViolation(PierceError):
    pass


# Codec
class OutOfDomain(PierceError):
    pass


class NonTermination(PierceError):
    pass


# Intervals
class EmptyGenerator(PierceError):
    pass


class BadRange(PierceError):
    pass


class NotInImage(PierceError):
    pass


class DegenerateInput(PierceError):
    pass


# Calendar
class InvalidRule(PierceError):
    pass


class ToleranceExceeded(PierceError):
    pass


# Certified arithmetic
class PrecisionExhausted(PierceError):
    pass
