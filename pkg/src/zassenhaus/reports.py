"""Uniform pass/fail report records and their JSON form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    check: str
    params: dict
    passed: bool
    witness: Any = None
    dims: dict = field(default_factory=dict)
    anchors: list = field(default_factory=list)
    elements: dict = field(default_factory=dict)
    flagged: bool = False       # a mismatch that is reported for analysis rather than failed

    @property
    def status(self) -> str:
        if self.flagged:
            return "flagged"
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        return {"check": self.check, "params": self.params, "status": self.status,
                "witness": self.witness, "dims": self.dims, "anchors": self.anchors,
                "elements": self.elements}

    def line(self) -> str:
        extra = ", ".join(f"{k}={v}" for k, v in self.dims.items())
        return f"[{self.status.upper()}] {self.check} {self.params}" + (f" ({extra})" if extra else "")
