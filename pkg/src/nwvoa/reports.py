"""Deterministic JSON reports.

A report is a JSON array of records.  Every record carries ``schema``,
``suite``, ``name`` and ``pass``; the remaining keys depend on the check.
Rationals are written as canonical strings ("3", "-2/5").  Keys are sorted
and records are ordered by (suite, name, bidegree), so equal inputs give
byte-identical files.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, List, Mapping

from .exact import fstr

SCHEMA = "nwvoa-report/1"

__all__ = ["SCHEMA", "canonical", "record", "sort_records", "render_report", "emit_report", "all_passed"]


def canonical(obj):
    """Convert to JSON-ready data with exact fraction strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return fstr(obj)
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, Mapping):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(canonical(v) for v in obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def record(suite: str, name: str, passed: bool, detail: str = "", **extra) -> dict:
    rec = {"schema": SCHEMA, "suite": suite, "name": name, "pass": bool(passed), "detail": detail}
    rec.update(extra)
    return rec


def _sort_key(rec: Mapping):
    bid = rec.get("bidegree")
    bkey = tuple(Fraction(str(b)) for b in bid) if bid else ()
    return (str(rec.get("suite", "")), str(rec.get("name", "")), bkey,
            json.dumps(canonical(rec), sort_keys=True))


def sort_records(records: Iterable[Mapping]) -> List[Mapping]:
    return sorted(records, key=_sort_key)


def render_report(records: Iterable[Mapping]) -> str:
    recs = [canonical(r) for r in sort_records(records)]
    if not recs:
        return "[]"
    return json.dumps(recs, sort_keys=True, indent=1, ensure_ascii=False)


def emit_report(records: Iterable[Mapping], path) -> None:
    """Write the report; OSError propagates to the caller."""
    text = render_report(records)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def all_passed(records: Iterable[Mapping]) -> bool:
    return all(r.get("pass") for r in records)
