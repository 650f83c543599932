"""CSV and JSON serialization of sweep rows.

The JSON shape is documented in ``docs/report_schema.md``.
"""

import csv
import json
import math
import os
from dataclasses import dataclass
from typing import Optional

from .shapederiv import DerivativeReport

REPORT_VERSION = 1

CSV_COLUMNS = ["case", "f", "theta", "a", "corrector", "first_order", "second_order",
               "q_u", "q_v", "vv0", "gamma_star", "fast_path"]
NUMERIC = CSV_COLUMNS[5:11]


@dataclass
class Row:
    case: str
    f: str
    theta: str
    a: float
    corrector: str
    report: Optional[DerivativeReport] = None
    error: Optional[str] = None

    @property
    def key(self):
        return (self.case, self.a, self.corrector)


def fmt(x):
    return f"{x:.12e}"


def csv_record(row):
    base = [row.case, row.f, row.theta, f"{row.a:.12g}", row.corrector]
    if row.report is None:
        return base + ["error"] * (len(NUMERIC) + 1)
    r = row.report
    return base + [fmt(getattr(r, k)) for k in NUMERIC] + [r.fast_path]


def write_csv(rows, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(csv_record(row))


def _finite(obj):
    """Replace non-finite floats by strings so the output is strict JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def row_json(row):
    return _finite({
        "report_version": REPORT_VERSION,
        "case": row.case,
        "f": row.f,
        "theta": row.theta,
        "a": row.a,
        "corrector": row.corrector,
        "status": "ok" if row.report is not None else "error",
        "error": row.error,
        "report": row.report.to_dict() if row.report is not None else None,
    })


def row_filename(row):
    return f"{row.case}_a{row.a:.6f}_{row.corrector}.json".replace(",", "-")


def write_json_dir(rows, directory):
    os.makedirs(directory, exist_ok=True)
    for row in rows:
        with open(os.path.join(directory, row_filename(row)), "w") as fh:
            json.dump(row_json(row), fh, indent=2, sort_keys=True)
            fh.write("\n")
