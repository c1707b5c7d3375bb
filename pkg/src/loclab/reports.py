"""Deterministic check reports with JSON and markdown renderings.

Every verification suite and every enumeration in the package funnels its
results through these containers.  Rendering is byte-for-byte reproducible:
no timestamps, no timings, no machine identifiers, all mappings emitted with
sorted keys and all listings in a canonical order chosen by the producer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    """One named pass/fail outcome, with an optional witness string."""
    name: str
    ok: bool
    detail: str = ""

    def to_dict(self) -> dict:
        d: dict = {"name": self.name, "ok": self.ok}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Section:
    """A group of checks plus optional listing rows and free-form notes."""
    name: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    items: list[dict] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(ok), detail))

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failing(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def to_dict(self) -> dict:
        d: dict = {"name": self.name, "ok": self.ok,
                   "checks": [c.to_dict() for c in self.checks]}
        if self.notes:
            d["notes"] = list(self.notes)
        if self.items:
            d["items"] = list(self.items)
        return d


@dataclass
class Report:
    title: str
    sections: list[Section] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.sections)

    def section(self, name: str) -> Section:
        sec = Section(name)
        self.sections.append(sec)
        return sec

    def to_dict(self) -> dict:
        return {"title": self.title, "ok": self.ok,
                "sections": [s.to_dict() for s in self.sections]}


def render_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def _md_item(row: dict) -> str:
    parts = [f"{k}: {row[k]}" for k in sorted(row)]
    return "  - " + "; ".join(parts)


def render_markdown(report: Report) -> str:
    lines = [f"# {report.title}", ""]
    lines.append(f"Overall: {'ok' if report.ok else 'FAIL'}")
    lines.append("")
    for sec in report.sections:
        lines.append(f"## {sec.name}")
        lines.append("")
        lines.append(f"Status: {'ok' if sec.ok else 'FAIL'}")
        for note in sec.notes:
            lines.append(f"- note: {note}")
        for c in sec.checks:
            mark = "ok" if c.ok else "FAIL"
            if c.detail:
                lines.append(f"- [{mark}] {c.name}: {c.detail}")
            else:
                lines.append(f"- [{mark}] {c.name}")
        if sec.items:
            lines.append("- items:")
            for row in sec.items:
                lines.append(_md_item(row))
        lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "md":
        return render_markdown(report)
    raise ValueError(f"unknown output format {fmt!r}")
