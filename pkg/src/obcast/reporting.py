"""Bound reports and their JSON/CSV projections."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

CERTIFICATE_KINDS = ("exact", "dual-certified", "analytic", "heuristic")


@dataclass(frozen=True)
class BoundReport:
    """One computed value with its reference, expectation window, and certificate kind."""

    id: str
    paper_ref: str
    computed: float
    expected: float | None
    tolerance: float
    certificate: str
    passed: bool

    def __post_init__(self):
        if self.certificate not in CERTIFICATE_KINDS:
            raise ValueError(f"unknown certificate kind {self.certificate!r}")

    def as_record(self) -> dict:
        return {
            "id": self.id,
            "paper_ref": self.paper_ref,
            "computed": self.computed,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "certificate": self.certificate,
            "pass": self.passed,
        }


_COLUMNS = ("id", "paper_ref", "computed", "expected", "tolerance", "certificate", "pass")


def sort_reports(reports) -> list[BoundReport]:
    return sorted(reports, key=lambda r: r.id)


def reports_to_json(reports) -> str:
    records = [r.as_record() for r in sort_reports(reports)]
    return json.dumps(records, indent=2, sort_keys=True) + "\n"


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow(_COLUMNS)
    for r in sort_reports(reports):
        rec = r.as_record()
        writer.writerow(
            [
                rec["id"],
                rec["paper_ref"],
                repr(rec["computed"]),
                "" if rec["expected"] is None else repr(rec["expected"]),
                repr(rec["tolerance"]),
                rec["certificate"],
                "true" if rec["pass"] else "false",
            ]
        )
    return buf.getvalue()
