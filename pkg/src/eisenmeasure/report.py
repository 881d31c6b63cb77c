"""Report objects returned by the verification suites."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Report:
    check: str
    params: dict
    passed: bool
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "check": self.check,
            "params": self.params,
            "pass": self.passed,
            "failures": self.failures,
        }
        if self.notes:
            payload["notes"] = self.notes
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    def __bool__(self) -> bool:
        return self.passed
