"""Verification reports shared by the checking routines and the CLI."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of one verification suite.

    ``rows`` are flat dicts (one per parameter cell) kept in a stable order;
    ``extra`` holds suite-specific top-level fields of the JSON form and
    ``text`` an optional human-readable rendering.
    """

    suite: str
    params: dict
    passed: bool = True
    failures: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    text: str = field(default="", repr=False)

    def fail(self, message: str) -> None:
        self.passed = False
        self.failures.append(message)

    def check(self, condition: bool, message: str) -> bool:
        if not condition:
            self.fail(message)
        return condition

    def merge(self, other: "Report") -> None:
        self.passed = self.passed and other.passed
        self.failures.extend(other.failures)
        self.rows.extend(other.rows)

    def to_json(self) -> dict:
        out = {
            "suite": self.suite,
            "params": self.params,
            "passed": self.passed,
            "failures": self.failures,
            "rows": self.rows,
        }
        out.update(self.extra)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False)

    def to_csv(self) -> str:
        return rows_to_csv(self.rows)

    def to_text(self) -> str:
        lines = [f"{self.suite}: {'PASS' if self.passed else 'FAIL'} {self.params}"]
        lines += [f"  failure: {msg}" for msg in self.failures]
        return "\n".join(lines)


def rows_to_csv(rows: list[dict], columns: list[str] | None = None) -> str:
    if not rows:
        return ""
    if columns is None:
        columns = list(dict.fromkeys(k for row in rows for k in row))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore", restval="")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
