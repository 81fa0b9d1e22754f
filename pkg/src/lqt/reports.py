"""Check results and the JSON report schema shared by every verification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

PASS = "PASS"
FAIL = "FAIL"


@dataclass
class Check:
    name: str
    ok: bool
    witness: Any = None
    data: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return PASS if self.ok else FAIL

    def to_json(self) -> dict:
        out = {"name": self.name, "verdict": self.verdict, "data": jsonable(self.data)}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        return out

    def __bool__(self) -> bool:
        return self.ok


def jsonable(x):
    """Convert labels, fractions and tuples into plain JSON values."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, float, str)):
        return x
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, str) else k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)


REPORT_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "lqt verification report",
    "type": "object",
    "required": ["command", "verdict", "checks"],
    "properties": {
        "command": {"type": "string"},
        "verdict": {"enum": [PASS, FAIL]},
        "config": {"type": "object"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "verdict", "data"],
                "properties": {
                    "name": {"type": "string"},
                    "verdict": {"enum": [PASS, FAIL]},
                    "data": {"type": "object"},
                    "witness": {},
                },
                "additionalProperties": False,
            },
        },
        "timing": {"type": "object"},
    },
    "additionalProperties": False,
}


def make_report(command: str, checks: list[Check], config: dict | None = None, timing: dict | None = None) -> dict:
    rep = {
        "command": command,
        "verdict": PASS if all(c.ok for c in checks) else FAIL,
        "checks": [c.to_json() for c in checks],
    }
    if config is not None:
        rep["config"] = jsonable(config)
    if timing is not None:
        rep["timing"] = jsonable(timing)
    return rep


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
