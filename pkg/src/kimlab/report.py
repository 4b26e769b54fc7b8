"""Structured pass/fail results shared by validators and scenarios."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

SCHEMA_VERSION = 1


@dataclass
class Check:
    name: str
    passed: bool
    quote: str = ""
    witness: Any = None

    def to_json(self) -> dict:
        out = {"name": self.name, "paper_quote": self.quote, "pass": self.passed}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


@dataclass
class Report:
    """Outcome of a validation, property check or scenario.

    ``passed`` is the conjunction of all sub-checks unless set explicitly.
    A failing report should carry the smallest witness the producer knows.
    """

    name: str
    passed: bool = True
    detail: str = ""
    witness: Any = None
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, quote: str = "", witness: Any = None) -> bool:
        self.checks.append(Check(name, bool(passed), quote, witness))
        if not passed:
            self.passed = False
            if self.witness is None and witness is not None:
                self.witness = witness
        return bool(passed)

    def failed_checks(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        out: dict = {"scenario": self.name, "pass": self.passed,
                     "checks": [c.to_json() for c in self.checks]}
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None and not self.passed:
            out["witness"] = _jsonable(self.witness)
        return out

    def render(self, verbose: bool = False) -> str:
        mark = "PASS" if self.passed else "FAIL"
        lines = [f"[{mark}] {self.name}" + (f": {self.detail}" if self.detail else "")]
        for c in self.checks:
            if verbose or not c.passed:
                lines.append(f"    [{'ok' if c.passed else 'FAIL'}] {c.name}")
                if not c.passed and c.witness is not None:
                    lines.append(f"        witness: {_jsonable(c.witness)}")
        if not self.passed and not self.checks and self.witness is not None:
            lines.append(f"    witness: {_jsonable(self.witness)}")
        return "\n".join(lines)


def _jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((_jsonable(v) for v in obj), key=str)
    to_text = getattr(obj, "to_text", None)
    if callable(to_text):
        return to_text()
    return str(obj)


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


def bundle(reports: list[Report]) -> dict:
    return {"v": SCHEMA_VERSION, "pass": all(r.passed for r in reports),
            "results": [r.to_json() for r in reports]}


def single(report: Report) -> dict:
    return {"v": SCHEMA_VERSION, **report.to_json()}


def first_failure(report: Report) -> Optional[Check]:
    failed = report.failed_checks()
    return failed[0] if failed else None
