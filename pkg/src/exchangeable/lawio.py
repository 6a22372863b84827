"""JSON documents for laws.

Sequence law::

    {"kind": "sequence", "alphabet": ["a", "b"], "length": 2,
     "probs": [{"outcome": ["a", "b"], "p": "1/2"}, ...]}

Matrix law: ``"kind": "matrix"`` with ``rows``/``cols`` and each outcome a
row-major list of rows.  Probabilities are exact ``"a/b"`` strings; symbols
are written with ``str`` and read back as strings.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .core import DomainError, JointLaw, MatrixLaw
from .report import outcome_doc, parse_rational, rational_str


class LawFormatError(ValueError):
    def __init__(self, message: str, position: str):
        self.position = position
        super().__init__("%s (at %s)" % (message, position))


def law_to_doc(law) -> dict:
    probs = [{"outcome": outcome_doc(x), "p": rational_str(p)} for x, p in law.probs.items()]
    if isinstance(law, MatrixLaw):
        return {"kind": "matrix", "alphabet": [str(a) for a in law.alphabet],
                "rows": law.rows, "cols": law.cols, "probs": probs}
    return {"kind": "sequence", "alphabet": [str(a) for a in law.alphabet],
            "length": law.length, "probs": probs}


def _require(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise LawFormatError("missing field %r" % key, where or "document")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise LawFormatError("field %r has the wrong type" % key, (where + "." if where else "") + key)
    return value


def law_from_doc(doc: dict):
    if not isinstance(doc, dict):
        raise LawFormatError("law document must be an object", "document")
    kind = doc.get("kind", "sequence")
    alphabet = _require(doc, "alphabet", list, "")
    if not all(isinstance(a, str) for a in alphabet):
        raise LawFormatError("alphabet symbols must be strings", "alphabet")
    entries = _require(doc, "probs", list, "")
    probs: dict = {}
    for i, entry in enumerate(entries):
        where = "probs[%d]" % i
        if not isinstance(entry, dict):
            raise LawFormatError("entry must be an object", where)
        outcome = _require(entry, "outcome", list, where)
        p_text = _require(entry, "p", str, where)
        try:
            p = parse_rational(p_text)
        except (ValueError, ZeroDivisionError):
            raise LawFormatError("bad rational %r" % p_text, where + ".p") from None
        try:
            if kind == "matrix":
                x = tuple(tuple(row) for row in outcome)
            else:
                x = tuple(outcome)
        except TypeError:
            raise LawFormatError("bad outcome", where + ".outcome") from None
        probs[x] = probs.get(x, Fraction(0)) + p
    try:
        if kind == "matrix":
            return MatrixLaw(alphabet, _require(doc, "rows", int, ""), _require(doc, "cols", int, ""), probs)
        if kind == "sequence":
            return JointLaw(alphabet, _require(doc, "length", int, ""), probs)
    except DomainError as exc:
        raise LawFormatError(str(exc), "probs") from None
    raise LawFormatError("unknown kind %r" % kind, "kind")


def loads_law(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LawFormatError(exc.msg, "line %d column %d" % (exc.lineno, exc.colno)) from None
    return law_from_doc(doc)


def dumps_law(law, indent: int | None = 2) -> str:
    return json.dumps(law_to_doc(law), indent=indent)
