"""Verification reports produced by the property checkers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    """Outcome of one executable property check.

    ``grid`` records the evaluation grid (ranges, trial counts, tolerances),
    ``details`` optional per-case rows. Serializes with the JSON key
    ``pass`` for the boolean verdict.
    """

    property_name: str
    grid: dict
    worst_residual: float
    passed: bool
    details: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "property": self.property_name,
            "grid": self.grid,
            "worst_residual": float(self.worst_residual),
            "pass": bool(self.passed),
            "details": self.details,
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)
