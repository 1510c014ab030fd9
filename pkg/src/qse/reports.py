"""Verification reports shared by the theorem checks and the CLI."""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class Margin:
    """One two-sided relation ``lhs <= mid <= rhs``."""

    name: str
    lhs: float
    mid: float
    rhs: float

    @property
    def slack(self) -> float:
        return min(self.mid - self.lhs, self.rhs - self.mid)

    @property
    def tight(self) -> bool:
        return self.slack <= 1e-9

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "mid": self.mid, "rhs": self.rhs, "slack": self.slack}


@dataclass
class Report:
    theorem: str
    params: dict
    trials: int
    max_violation: float
    applicable: bool
    passed: bool
    margins: list[Margin] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "theorem": self.theorem,
            "params": self.params,
            "trials": self.trials,
            "max_violation": _finite(self.max_violation),
            "applicable": self.applicable,
            "pass": self.passed,
        }
        if self.margins:
            out["margins"] = [m.to_dict() for m in self.margins]
        if self.details:
            out["details"] = self.details
        return out


def _finite(x: float):
    return x if math.isfinite(x) else None
