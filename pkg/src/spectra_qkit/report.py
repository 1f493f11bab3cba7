"""IdentityReport: one audited identity at one parameter point."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .series import FormalSeries

# Identities whose failure fails a verification run; everything else is an
# audit whose residual is informational.
HARD_IDENTITIES = frozenset({
    "table1.row1", "table1.row2", "table1.row3", "table1.row4",
    "ftriple.m0",
    "crossz",
    "zeros",
})


def kind_of(identity: str) -> str:
    return "hard" if identity in HARD_IDENTITIES else "audit"


def jsonable(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else str(value)
    if isinstance(value, complex):
        return {"re": jsonable(value.real), "im": jsonable(value.imag)}
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, FormalSeries):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    raise TypeError(f"cannot serialize {type(value).__name__}")


@dataclass(frozen=True)
class IdentityReport:
    """LHS and RHS of an identity, the residual between them and the verdict.

    ``residual`` is None when one side could not be evaluated (for example a
    pole in a spectral factor); such a report never passes.
    """

    identity: str
    params: dict
    conventions: dict
    lhs: complex | FormalSeries | None
    rhs: complex | FormalSeries | None
    residual: float | None
    budget: float
    tol: float
    note: str = ""
    details: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return kind_of(self.identity)

    @property
    def passed(self) -> bool:
        return self.residual is not None and self.residual <= self.budget + self.tol

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "kind": self.kind,
            "params": jsonable(self.params),
            "conventions": jsonable(self.conventions),
            "lhs": jsonable(self.lhs),
            "rhs": jsonable(self.rhs),
            "residual": jsonable(self.residual),
            "tail_budget": jsonable(self.budget),
            "tolerance": jsonable(self.tol),
            "verdict": self.verdict,
            "note": self.note,
            "details": jsonable(self.details),
        }


def reports_to_json(reports: list[IdentityReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


def tau_param(tau) -> dict:
    return {"re": tau.re, "im": tau.im}


def series_residual(lhs: FormalSeries, rhs: FormalSeries) -> float:
    """Largest |coefficient| of lhs - rhs over the commonly known range."""
    diff = lhs - rhs
    return max((abs(float(c)) for _, c in diff.terms()), default=0.0)
