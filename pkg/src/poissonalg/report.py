from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Report:
    """Outcome of an exact check.

    ``witness`` is filled on failure with enough data (generator names and
    polynomial values) to redo the failing equation by hand.
    """

    name: str
    passed: bool
    witness: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"check": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out


def combine(name: str, reports, **details) -> Report:
    reports = list(reports)
    failed = [r for r in reports if not r.passed]
    return Report(
        name,
        not failed,
        failed[0].witness if failed else None,
        {"checks": len(reports), "failures": len(failed), **details},
    )
