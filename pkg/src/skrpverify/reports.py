"""Check records and machine-readable reports.

Every verification, exact or numerical, reduces to a list of CheckRecord
rows; a Report serializes them to a schema-stable JSON document and the
per-point rows to CSV.  Exit-code policy: 0 all-pass, 1 at least one check
failed, 2 configuration error (enforced by the CLI).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

from . import __version__

__all__ = ["CheckRecord", "Report", "CSV_HEADER"]

CSV_HEADER = ["point_index", "tau", "check", "residual", "tolerance", "pass"]


@dataclass
class CheckRecord:
    """One verification outcome.

    ``exact`` marks checks decided by exact arithmetic (residual is then 0.0
    or the check failed); numerical checks carry a residual and tolerance.
    Negative controls are recorded with the perturbed residual and pass when
    it exceeds the configured floor.
    """

    name: str
    passed: bool
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    exact: bool = False
    params: dict = field(default_factory=dict)
    point_index: Optional[int] = None
    tau: Optional[float] = None
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "exact": self.exact,
            "params": {k: str(v) for k, v in self.params.items()},
            "point_index": self.point_index,
            "tau": self.tau,
            "detail": self.detail,
        }

    def render(self) -> str:
        status = "pass" if self.passed else "FAIL"
        loc = "" if self.point_index is None else f" @point {self.point_index}"
        res = "" if self.residual is None else f" residual={self.residual:.3e}"
        tol = "" if self.tolerance is None else f" tol={self.tolerance:.1e}"
        kind = " (exact)" if self.exact else ""
        return f"[{status}] {self.name}{loc}{res}{tol}{kind}"


@dataclass
class Report:
    """Aggregated, deterministic verification report."""

    config: dict
    checks: list[CheckRecord] = field(default_factory=list)

    def extend(self, records) -> None:
        self.checks.extend(records)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> dict:
        passed = sum(1 for c in self.checks if c.passed)
        return {
            "total": len(self.checks),
            "passed": passed,
            "failed": len(self.checks) - passed,
        }

    def as_dict(self) -> dict:
        return {
            "version": __version__,
            "config": {k: str(v) for k, v in self.config.items()},
            "checks": [c.as_dict() for c in self.checks],
            "summary": self.summary(),
            "all_passed": self.all_passed,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.as_dict(), indent=indent)

    def csv_rows(self) -> list[list]:
        rows = []
        for c in self.checks:
            if c.point_index is None:
                continue
            rows.append(
                [
                    c.point_index,
                    "" if c.tau is None else repr(c.tau),
                    c.name,
                    "" if c.residual is None else repr(c.residual),
                    "" if c.tolerance is None else repr(c.tolerance),
                    int(c.passed),
                ]
            )
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(CSV_HEADER)
        writer.writerows(self.csv_rows())
        return buf.getvalue()

    def render_lines(self) -> list[str]:
        lines = [c.render() for c in self.checks]
        s = self.summary()
        lines.append(
            f"{'ALL PASS' if self.all_passed else 'FAILURES'}: "
            f"{s['passed']}/{s['total']} checks passed"
        )
        return lines
