# © 2025 Visa.
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

"""Command-line front end: `parse` turns argv into a validated Command, `execute` runs it."""
import argparse
import json
import logging
import sys
import time
from typing import Any, Callable, Dict, List, Optional, TextIO

from pydantic import BaseModel, ConfigDict

from app import schemas
from app.config import get_settings
from app.core import calendar, digits, intervals, law, pierce
from app.errors import InvalidRule, PierceError, UsageError
from app.models import DigitSeq, GrowthSpec, parse_rational

logger = logging.getLogger(__name__)

OUTPUTS = ("csv", "json", "plain")
TABLE_COMMANDS = {"children", "drift", "trajectory", "zc", "lln-sample"}


class Command(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    args: Dict[str, Any]
    output: str


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message} (try '{self.prog} --help')")


def _argument(convert: Callable[[str], Any], what: str) -> Callable[[str], Any]:
    def typed(text: str):
        try:
            return convert(text)
        except (ValueError, InvalidRule) as e:
            raise argparse.ArgumentTypeError(f"invalid {what} '{text}': {e}")

    typed.__name__ = what
    return typed


RATIONAL = _argument(parse_rational, "rational")
DIGITS = _argument(DigitSeq.parse, "digit sequence")
RULE = _argument(calendar.parse_rule, "rule")
ALPHA = _argument(GrowthSpec.parse, "alpha")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError("must be a positive integer")
    return value


def _places_value(text: str) -> int:
    value = int(text)
    if not 0 <= value <= 200:
        raise ValueError("must be between 0 and 200")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise ValueError("must fit in an unsigned 64-bit integer")
    return value


POSITIVE = _argument(_positive, "positive integer")
SEED = _argument(_seed, "seed")
PLACES = _argument(_places_value, "places")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pierce-lab", description="Pierce expansions and generalized leap-year rules")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--output", choices=OUTPUTS, default=None)
        p.add_argument("--places", type=PLACES, default=None)
        return p

    p = command("expand", "Pierce digits of a rational in [0, 1]")
    p.add_argument("--x", type=RATIONAL, required=True)

    p = command("decode", "Value of a digit sequence (an enclosure for '...' prefixes)")
    p.add_argument("--digits", type=DIGITS, required=True)

    p = command("step", "One digit and the shifted remainder")
    p.add_argument("--x", type=RATIONAL, required=True)

    p = command("interval", "Fundamental interval of a generator")
    p.add_argument("--digits", type=DIGITS, required=True)

    p = command("children", "Child intervals of a generator")
    p.add_argument("--digits", type=DIGITS, required=True)
    p.add_argument("--jmax", type=POSITIVE, required=True)

    p = command("find-interval", "A fundamental interval inside (a, b)")
    p.add_argument("--a", type=RATIONAL, required=True)
    p.add_argument("--b", type=RATIONAL, required=True)

    p = command("leap", "Whether a year is a leap year under a rule")
    p.add_argument("--rule", type=RULE, required=True)
    p.add_argument("--year", type=POSITIVE, required=True)

    p = command("count", "Leap years in 1..N")
    p.add_argument("--rule", type=RULE, required=True)
    p.add_argument("--through", type=POSITIVE, required=True)
    p.add_argument("--method", choices=("direct", "formula", "both"), default="formula")

    p = command("series", "Average leap fraction of a rule")
    p.add_argument("--rule", type=RULE, required=True)
    p.add_argument("--n", type=POSITIVE, default=None)

    p = command("drift", "Drift table N x - L(rule, N)")
    p.add_argument("--rule", type=RULE, required=True)
    p.add_argument("--through", type=POSITIVE, required=True)
    p.add_argument("--x", type=RATIONAL, default=None)
    p.add_argument("--tolerance", type=RATIONAL, default=None)

    p = command("construct", "Digits growing like e^(alpha k)")
    p.add_argument("--alpha", type=ALPHA, required=True)
    p.add_argument("--n", type=POSITIVE, required=True)

    p = command("diagnose", "Growth diagnostics of a digit prefix")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--digits", type=DIGITS)
    source.add_argument("--alpha", type=ALPHA)
    p.add_argument("--n", type=POSITIVE, default=None)
    p.add_argument("--precision", type=POSITIVE, default=None)

    p = command("trajectory", "Certified quotients along the extremal years")
    p.add_argument("--alpha", type=ALPHA, required=True)
    p.add_argument("--rmax", type=POSITIVE, required=True)
    p.add_argument("--guard", type=POSITIVE, default=None)
    p.add_argument("--precision", type=POSITIVE, default=None)

    p = command("zc", "Enumerate the bounded-growth prefixes Z_c")
    p.add_argument("--c", type=RATIONAL, required=True)
    p.add_argument("--start-index", type=POSITIVE, default=1)
    p.add_argument("--depth", type=POSITIVE, required=True)

    p = command("lln-sample", "Sample (log d_n)/n over uniform dyadic rationals")
    p.add_argument("--count", type=POSITIVE, required=True)
    p.add_argument("--bits", type=POSITIVE, required=True)
    p.add_argument("--n", type=POSITIVE, required=True)
    p.add_argument("--seed", type=SEED, required=True)
    p.add_argument("--precision", type=POSITIVE, default=None)

    return parser


def parse(argv: List[str]) -> Command:
    namespace = vars(build_parser().parse_args(argv))
    name = namespace.pop("command")
    output = namespace.pop("output") or ("csv" if name in TABLE_COMMANDS else "plain")
    if output == "csv" and name not in TABLE_COMMANDS:
        raise UsageError(f"{name}: csv output is only available for {', '.join(sorted(TABLE_COMMANDS))}")
    return Command(name=name, args=namespace, output=output)


# Output helpers

def _places(cmd: Command) -> int:
    places = cmd.args.get("places")
    return get_settings().decimal_places if places is None else places


def _dump(payload) -> Any:
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json", by_alias=True)
    if isinstance(payload, list):
        return [_dump(item) for item in payload]
    if isinstance(payload, dict):
        return {key: _dump(value) for key, value in payload.items()}
    return payload


def _emit(cmd: Command, out: TextIO, plain: Callable[[], str], payload, frame: Optional[Callable] = None) -> None:
    if cmd.output == "json":
        out.write(json.dumps(_dump(payload), indent=2, sort_keys=True) + "\n")
    elif cmd.output == "csv":
        out.write(schemas.frame_to_csv(frame()))
    else:
        out.write(plain() + "\n")


# Handlers

def _expand(cmd: Command, out: TextIO) -> int:
    seq = pierce.encode(cmd.args["x"])
    _emit(cmd, out, lambda: str(seq), schemas.DigitsOut.build(seq))
    return 0


def _decode(cmd: Command, out: TextIO) -> int:
    seq: DigitSeq = cmd.args["digits"]
    if seq.is_terminated:
        value = schemas.RationalOut.build(pierce.decode(seq), _places(cmd))
        _emit(cmd, out, value.plain, value)
    else:
        enclosure = schemas.EnclosureOut.build(pierce.value_enclosure(seq), _places(cmd))
        _emit(cmd, out, enclosure.plain, enclosure)
    return 0


def _step(cmd: Command, out: TextIO) -> int:
    result = pierce.step(cmd.args["x"])
    shown = schemas.StepOut.build(result)
    digit = "inf" if result.digit is None else str(result.digit)
    _emit(cmd, out, lambda: f"{digit} {shown.remainder}", shown)
    return 0


def _interval(cmd: Command, out: TextIO) -> int:
    interval = intervals.fundamental_interval(cmd.args["digits"])
    _emit(cmd, out, lambda: str(interval), schemas.IntervalOut.build(interval))
    return 0


INTERVAL_COLUMNS = ["generator", "left", "right", "leftOpen", "rightOpen"]


def _children(cmd: Command, out: TextIO) -> int:
    found = intervals.children(cmd.args["digits"], cmd.args["jmax"])
    rows = [schemas.IntervalOut.build(child) for child in found]
    _emit(
        cmd,
        out,
        lambda: "\n".join(f"{child.generator} {child}" for child in found),
        rows,
        lambda: schemas.to_frame(rows, INTERVAL_COLUMNS),
    )
    return 0


def _find_interval(cmd: Command, out: TextIO) -> int:
    sigma = intervals.find_interval_within(cmd.args["a"], cmd.args["b"])
    interval = intervals.fundamental_interval(sigma)
    _emit(cmd, out, lambda: f"{sigma} {interval}", schemas.IntervalOut.build(interval))
    return 0


def _leap(cmd: Command, out: TextIO) -> int:
    rule, year = cmd.args["rule"], cmd.args["year"]
    leap = calendar.is_leap(rule, year)
    _emit(cmd, out, lambda: "true" if leap else "false", {"rule": str(rule), "year": year, "leap": leap})
    return 0


def _count(cmd: Command, out: TextIO) -> int:
    rule, through, method = cmd.args["rule"], cmd.args["through"], cmd.args["method"]
    result = schemas.CountOut(
        through=through,
        direct=calendar.count_leaps_direct(rule, through) if method in ("direct", "both") else None,
        formula=calendar.count_leaps_formula(rule, through) if method in ("formula", "both") else None,
    )
    shown = [str(value) for value in (result.direct, result.formula) if value is not None]
    _emit(cmd, out, lambda: " ".join(shown), result)
    if not result.agrees:
        logger.error(f"❌ Direct count {result.direct} != formula {result.formula} for rule {rule}, N={through}")
        return 1
    return 0


def _series(cmd: Command, out: TextIO) -> int:
    enclosure = schemas.EnclosureOut.build(calendar.series_value(cmd.args["rule"], cmd.args["n"]), _places(cmd))
    _emit(cmd, out, enclosure.plain, enclosure)
    return 0


def _drift(cmd: Command, out: TextIO) -> int:
    rule = cmd.args["rule"]
    x = cmd.args["x"] if cmd.args["x"] is not None else calendar.series_value(rule)
    records = calendar.drift_table(x, rule, cmd.args["through"], tolerance=cmd.args["tolerance"])
    rows = [schemas.DriftRowOut.build(record) for record in records]
    _emit(
        cmd,
        out,
        lambda: "\n".join(f"{record.year} {record.leap_count} {record.drift}" for record in records),
        rows,
        lambda: schemas.to_frame(rows, schemas.DRIFT_COLUMNS),
    )
    return 0


def _construct(cmd: Command, out: TextIO) -> int:
    seq = law.construct_digits(cmd.args["alpha"], cmd.args["n"])
    _emit(cmd, out, lambda: str(seq), schemas.DigitsOut.build(seq))
    return 0


def _diagnose(cmd: Command, out: TextIO) -> int:
    precision, places = cmd.args["precision"], _places(cmd)
    seq = cmd.args["digits"]
    if seq is None:
        if cmd.args["n"] is None:
            raise UsageError("diagnose: --alpha needs --n")
        seq = law.construct_digits(cmd.args["alpha"], cmd.args["n"], precision)
    n = cmd.args["n"] or seq.length
    report = {
        "n": n,
        "growthRate": schemas.EnclosureOut.build(law.growth_rate(seq, n, precision), places),
        "logProductRate": schemas.EnclosureOut.build(law.log_product_rate(seq, n, precision), places),
        "reciprocalSum": schemas.RationalOut.build(law.reciprocal_partial_sum(seq, n), places),
    }
    _emit(
        cmd,
        out,
        lambda: "\n".join(
            [
                f"growth_rate {report['growthRate'].plain()}",
                f"log_product_rate {report['logProductRate'].plain()}",
                f"reciprocal_sum {report['reciprocalSum'].plain()}",
            ]
        ),
        report,
    )
    return 0


def _trajectory(cmd: Command, out: TextIO) -> int:
    rows = law.trajectory(cmd.args["alpha"], cmd.args["rmax"], cmd.args["guard"], cmd.args["precision"])
    shown = [schemas.TrajectoryRowOut.build(row, _places(cmd)) for row in rows]

    def frame():
        return schemas.to_frame(shown, schemas.TRAJECTORY_COLUMNS)

    _emit(cmd, out, lambda: schemas.frame_to_csv(frame()).rstrip("\n"), shown, frame)
    return 0


def _zc(cmd: Command, out: TextIO) -> int:
    found = digits.enumerate_zc(cmd.args["c"], cmd.args["start_index"], cmd.args["depth"])
    rows = [schemas.ZcOut.build(item, digits.jump_positions(item)) for item in found]
    _emit(
        cmd,
        out,
        lambda: "\n".join(f"{row.prefix} | {row.jumps}" for row in rows),
        rows,
        lambda: schemas.to_frame(rows, schemas.ZC_COLUMNS),
    )
    return 0


def _lln_sample(cmd: Command, out: TextIO) -> int:
    frame = law.lln_sample(cmd.args["count"], cmd.args["bits"], cmd.args["n"], cmd.args["seed"], cmd.args["precision"])
    summary = law.lln_summary(frame)
    _emit(
        cmd,
        out,
        lambda: " ".join(f"{key}={value}" for key, value in summary.items()),
        summary,
        lambda: frame,
    )
    return 0


HANDLERS: Dict[str, Callable[[Command, TextIO], int]] = {
    "expand": _expand,
    "decode": _decode,
    "step": _step,
    "interval": _interval,
    "children": _children,
    "find-interval": _find_interval,
    "leap": _leap,
    "count": _count,
    "series": _series,
    "drift": _drift,
    "construct": _construct,
    "diagnose": _diagnose,
    "trajectory": _trajectory,
    "zc": _zc,
    "lln-sample": _lln_sample,
}


def _report(error: PierceError, err: TextIO) -> int:
    err.write(schemas.ErrorResponse(error=error.name, detail=error.detail).model_dump_json() + "\n")
    return error.exit_code


def execute(cmd: Command, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """Run a parsed command; returns the process exit code"""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    start_time = time.time()
    logger.info(f"🔵 COMMAND: {cmd.name} {cmd.output}")
    try:
        code = HANDLERS[cmd.name](cmd, out)
    except PierceError as e:
        logger.info(f"🔴 FAILED: {cmd.name} - {e.name}")
        return _report(e, err)
    logger.info(f"🟢 DONE: {cmd.name} exit {code} - {time.time() - start_time:.3f}s")
    return code


def run(argv: List[str], out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    err = err if err is not None else sys.stderr
    try:
        cmd = parse(argv)
    except PierceError as e:
        return _report(e, err)
    return execute(cmd, out, err)
