"""Outcome of an identity check: both sides rendered, plus a verdict."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import CorrError


@dataclass
class CheckReport:
    name: str
    passed: bool
    lhs: str = ""
    rhs: str = ""
    detail: str = ""
    error: str | None = None
    data: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "lhs": self.lhs, "rhs": self.rhs}
        if self.detail:
            out["detail"] = self.detail
        if self.error:
            out["error"] = self.error
        if self.data:
            out["data"] = self.data
        return out

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        text = f"{verdict} {self.name}"
        if not self.passed:
            text += f": lhs={self.lhs} rhs={self.rhs}"
            if self.error:
                text += f" error={self.error}"
        return text


def compare(name: str, lhs: Callable[[], Any], rhs: Callable[[], Any], detail: str = "") -> CheckReport:
    """Evaluate both sides independently; domain errors become a failed report."""
    try:
        a = lhs()
        b = rhs()
    except CorrError as exc:
        return CheckReport(name, False, detail=detail, error=f"{exc.code}: {exc}")
    return CheckReport(name, a == b, str(a), str(b), detail)
