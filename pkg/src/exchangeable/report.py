"""Check reports and their structured (JSON) form.

Rationals are always written as ``"numerator/denominator"`` strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def rational_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return "%d/%d" % (q.numerator, q.denominator)


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str):
        raise ValueError("rational must be a string, got %r" % (text,))
    num, sep, den = text.strip().partition("/")
    value = Fraction(int(num), int(den)) if sep else Fraction(int(num))
    return value


def outcome_doc(x: Any) -> Any:
    """Outcomes as nested lists of strings."""
    if isinstance(x, tuple):
        return [outcome_doc(a) for a in x]
    return str(x)


def jsonable(value: Any) -> Any:
    """Convert rationals and tuples inside report details to JSON values."""
    if isinstance(value, Fraction):
        return rational_str(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


@dataclass
class Witness:
    location: dict
    test: str
    lhs: Fraction
    rhs: Fraction

    def to_doc(self) -> dict:
        return {"location": jsonable(self.location), "test": self.test,
                "lhs": rational_str(self.lhs), "rhs": rational_str(self.rhs)}

    @classmethod
    def from_doc(cls, doc: dict) -> "Witness":
        return cls(doc["location"], doc["test"], parse_rational(doc["lhs"]),
                   parse_rational(doc["rhs"]))


@dataclass
class CheckReport:
    """Verdict of one exact check.

    The verdict is derived: a report passes exactly when it carries no
    witnesses.  ``details`` holds JSON-ready extras; ``subreports`` holds the
    reports a composite check was assembled from.
    """

    check: str
    witnesses: list = field(default_factory=list)
    checked_count: int = 0
    details: dict = field(default_factory=dict)
    subreports: dict = field(default_factory=dict)

    def __post_init__(self):
        self.details = jsonable(self.details)
        for w in self.witnesses:
            if w.lhs == w.rhs:
                raise ValueError("witness with equal sides in %s: %r" % (self.check, w))

    @property
    def passed(self) -> bool:
        return not self.witnesses

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def __bool__(self) -> bool:
        return self.passed

    @property
    def first(self) -> Witness | None:
        return self.witnesses[0] if self.witnesses else None

    def to_doc(self) -> dict:
        doc = {"check": self.check, "verdict": self.verdict,
               "witnesses": [w.to_doc() for w in self.witnesses],
               "counts": {"checked": self.checked_count, "witnesses": len(self.witnesses)}}
        if self.details:
            doc["details"] = self.details
        if self.subreports:
            doc["subreports"] = {k: r.to_doc() for k, r in self.subreports.items()}
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "CheckReport":
        report = cls(doc["check"], [Witness.from_doc(w) for w in doc["witnesses"]],
                     checked_count=doc["counts"]["checked"], details=doc.get("details", {}),
                     subreports={k: cls.from_doc(v) for k, v in doc.get("subreports", {}).items()})
        if report.verdict != doc["verdict"]:
            raise ValueError("verdict %r inconsistent with witnesses" % doc["verdict"])
        return report

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_doc(), indent=indent)

    def summary(self) -> str:
        line = "%s: %s (%d checked)" % (self.check, self.verdict.upper(), self.checked_count)
        if self.first is not None:
            w = self.first
            line += "; first witness %s [%s] lhs=%s rhs=%s" % (
                json.dumps(jsonable(w.location)), w.test, w.lhs, w.rhs)
        return line


_RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+/[0-9]+$"}

REPORT_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "exchangeable/check-report",
    "type": "object",
    "required": ["check", "verdict", "witnesses", "counts"],
    "additionalProperties": False,
    "properties": {
        "check": {"type": "string"},
        "verdict": {"enum": ["pass", "fail"]},
        "witnesses": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["location", "test", "lhs", "rhs"],
                "additionalProperties": False,
                "properties": {
                    "location": {"type": "object"},
                    "test": {"type": "string"},
                    "lhs": _RATIONAL,
                    "rhs": _RATIONAL,
                },
            },
        },
        "counts": {
            "type": "object",
            "required": ["checked", "witnesses"],
            "properties": {"checked": {"type": "integer", "minimum": 0},
                           "witnesses": {"type": "integer", "minimum": 0}},
        },
        "details": {"type": "object"},
        "subreports": {"type": "object", "additionalProperties": {"$ref": "#"}},
    },
}
