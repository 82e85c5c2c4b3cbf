"""Machine-readable verification reports.

A report serializes to JSON with the stable top-level fields ``check``,
``params``, ``verdict``, ``horizon`` and ``evidence``.  Rationals are
rendered as exact strings ("1/4"); integers stay integers.  ``inconclusive``
is a first-class verdict: it marks a limit property that was only sampled
to a finite horizon.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .symbolic import SymbolicPoint

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

_RANK = {PASS: 0, INCONCLUSIVE: 1, FAIL: 2}


def combine_verdicts(verdicts) -> str:
    """Worst verdict wins: fail > inconclusive > pass."""
    worst = PASS
    for v in verdicts:
        if _RANK[v] > _RANK[worst]:
            worst = v
    return worst


def jsonable(value):
    """Recursively convert values to JSON-serializable form.

    Fractions become exact strings ("1/4") unless integral; SymbolicPoint
    becomes its dict form; tuples become lists.
    """
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else str(value)
    if isinstance(value, SymbolicPoint):
        return value.to_dict()
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, VerificationReport):
        return value.to_dict()
    return value


@dataclass
class VerificationReport:
    """Outcome of one check or witness construction, with replay evidence."""

    check: str
    params: dict
    verdict: str
    horizon: int | None
    evidence: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "params": jsonable(self.params),
            "verdict": self.verdict,
            "horizon": self.horizon,
            "evidence": jsonable(self.evidence),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


def render_text(data, indent: int = 0) -> str:
    """Human layout of a jsonable tree; every field of the JSON appears."""
    pad = "  " * indent
    lines = []
    if isinstance(data, dict):
        for key, value in data.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_leaf(value)}")
    elif isinstance(data, list):
        for value in data:
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}-")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}- {_leaf(value)}")
    else:
        lines.append(f"{pad}{_leaf(data)}")
    return "\n".join(lines)


def _leaf(value) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, (dict, list)):
        return "{}" if isinstance(value, dict) else "[]"
    return str(value)
