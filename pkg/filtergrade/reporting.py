#
# reporting.py
#
# Invariant reports produced by session commands, and their text, JSON and
# TSV renderings.
#
# Copyright 2024, Paul McGuire
#
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import Union

import littletable as lt

from filtergrade.cechloc import CohomologyTable

SCHEMA_VERSION = 1
FORMATS = ("text", "json", "tsv")
VERDICTS = ("PASS", "FAIL", "INFO")


@dataclass
class InvariantReport:
    """
    Outcome of one session command. verdict is PASS or FAIL for commands
    that verify an equality, INFO for pure computations.
    """
    index: int
    command: str
    verdict: str
    fields: dict[str, object] = field(default_factory=dict)
    tables: dict[str, Union[CohomologyTable, lt.Table]] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"invalid verdict {self.verdict!r}")

    @property
    def failed(self) -> bool:
        return self.verdict == "FAIL"

    def cohomology_tables(self) -> dict[str, CohomologyTable]:
        return {name: t for name, t in self.tables.items() if isinstance(t, CohomologyTable)}


def plain_value(value):
    """Convert report values to JSON-ready values; INFINITY becomes "infinity"."""
    if isinstance(value, float) and math.isinf(value):
        return "infinity"
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, dict):
        return {str(k): plain_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain_value(v) for v in value]
    return str(value)


def _text_value(value) -> str:
    value = plain_value(value)
    if isinstance(value, list):
        return "[" + ", ".join(_text_value(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_text_value(v)}" for k, v in value.items()) + "}"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "-"
    return str(value)


def _as_littletable(table: Union[CohomologyTable, lt.Table]) -> tuple[lt.Table, list[str]]:
    if isinstance(table, CohomologyTable):
        return table.as_table(), table.fieldnames()
    return table, list(table.info()["fields"])


def _present(table: lt.Table, fields: list[str], width: int = None) -> str:
    out = io.StringIO()
    table.present(fields=fields, file=out, box=lt.box.MINIMAL, width=width)
    return out.getvalue()


def _emit_text(report: InvariantReport, width: int = None) -> str:
    # guard against embedded rich-like tags
    summary = lt.Table(f"[{report.index}] {report.command}: {report.verdict}")
    summary.insert_many(
        {"field": name, "value": _text_value(value).replace("[", r"\[")}
        for name, value in report.fields.items()
    )
    parts = [_present(summary, ["field", "value"], width)]
    for table in report.tables.values():
        rows, fields = _as_littletable(table)
        parts.append(_present(rows, fields, width))
    return "".join(parts)


def _emit_json(report: InvariantReport) -> str:
    body = {
        "schema_version": SCHEMA_VERSION,
        "index": report.index,
        "command": report.command,
        "verdict": report.verdict,
    }
    body.update({name: plain_value(value) for name, value in report.fields.items()})
    tables = {}
    for name, table in report.tables.items():
        rows, fields = _as_littletable(table)
        entry = {"columns": fields, "rows": [[plain_value(getattr(rec, f, None)) for f in fields] for rec in rows]}
        if isinstance(table, CohomologyTable):
            entry = {**table.metadata(), **entry}
        tables[name] = entry
    body["tables"] = tables
    return json.dumps(body, indent=2, ensure_ascii=False) + "\n"


def _emit_tsv(report: InvariantReport) -> str:
    parts = []
    for name, table in report.cohomology_tables().items():
        parts.append(f"# {name}\n")
        parts.append(table.as_tsv())
    return "".join(parts)


def emit(report: InvariantReport, format: str = "text", *, width: int = None) -> bytes:
    """
    Render a report as UTF-8 bytes. TSV covers cohomology tables only; a
    report without one renders to empty bytes in that format.
    """
    if format == "text":
        text = _emit_text(report, width)
    elif format == "json":
        text = _emit_json(report)
    elif format == "tsv":
        text = _emit_tsv(report)
    else:
        raise ValueError(f"unknown report format {format!r}")
    return text.encode("utf-8")


def parse_tsv(text: str) -> dict[str, dict[tuple[int, tuple[int, ...]], int]]:
    """
    Read back TSV output: table name -> {(i, degree): dim}. Lines starting
    with '#' name the table that follows.
    """
    sections: dict[str, list[str]] = {}
    current = None
    for line in text.splitlines():
        if line.startswith("#"):
            current = sections.setdefault(line[1:].strip(), [])
        elif line.strip():
            if current is None:
                current = sections.setdefault("", [])
            current.append(line)

    tables = {}
    for name, lines in sections.items():
        if not lines:
            tables[name] = {}
            continue
        header = lines[0].split("\t")
        if header[0] != "i" or header[-1] != "dim":
            raise ValueError(f"unexpected TSV header {lines[0]!r}")
        rows = lt.Table(name).csv_import(
            io.StringIO("\n".join(lines) + "\n"),
            delimiter="\t",
            transforms={field_name: int for field_name in header},
        )
        degree_fields = header[1:-1]
        tables[name] = {
            (row.i, tuple(getattr(row, f) for f in degree_fields)): row.dim
            for row in rows
        }
    return tables
