# © 2025 Visa.
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

import json
import os

from app import schemas
from app.config import get_settings
from app.core import calendar, digits, law
from app.models import GrowthSpec

DATA_DIR = os.getenv("PIERCE_DATA_DIR", "data")


def _write(name: str, text: str) -> None:
    path = os.path.join(DATA_DIR, name)
    with open(path, "w", newline="\n") as handle:
        handle.write(text)
    print(f"Wrote {path}")


def create_gregorian_drift():
    """Drift of the Gregorian rule against its own average year, N = 1..400"""
    records = calendar.drift_table(calendar.series_value(calendar.GREGORIAN), calendar.GREGORIAN, 400)
    rows = [schemas.DriftRowOut.build(record) for record in records]
    _write("gregorian_drift.csv", schemas.frame_to_csv(schemas.to_frame(rows, schemas.DRIFT_COLUMNS)))


def create_eta_drift():
    """Drift of the Gregorian rule against the tropical year fraction"""
    records = calendar.drift_table(calendar.ETA, calendar.GREGORIAN, 4000, every=100)
    rows = [schemas.DriftRowOut.build(record) for record in records]
    _write("eta_drift.csv", schemas.frame_to_csv(schemas.to_frame(rows, schemas.DRIFT_COLUMNS)))


def create_trajectories():
    for alpha in ("1", "4"):
        rows = law.trajectory(GrowthSpec.parse(alpha), 10)
        shown = [schemas.TrajectoryRowOut.build(row, get_settings().decimal_places) for row in rows]
        _write(f"trajectory_alpha_{alpha}.csv", schemas.frame_to_csv(schemas.to_frame(shown, schemas.TRAJECTORY_COLUMNS)))
        _write(
            f"trajectory_alpha_{alpha}.json",
            json.dumps([row.model_dump(mode="json", by_alias=True) for row in shown], indent=2, sort_keys=True) + "\n",
        )


def create_zc_enumeration():
    found = digits.enumerate_zc(2, 1, 8)
    rows = [schemas.ZcOut.build(item, digits.jump_positions(item)) for item in found]
    _write("zc_c2_depth8.csv", schemas.frame_to_csv(schemas.to_frame(rows, schemas.ZC_COLUMNS)))


if __name__ == "__main__":
    os.makedirs(DATA_DIR, exist_ok=True)
    create_gregorian_drift()
    create_eta_drift()
    create_trajectories()
    create_zc_enumeration()
