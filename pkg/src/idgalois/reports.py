"""Versioned reports shared by the CLI and the acceptance suite."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA = "idgalois.report/1"
VERDICTS = ("pass", "fail", "error")
EXIT_CODES = {"pass": 0, "fail": 1, "error": 2}


class ReportError(ValueError):
    pass


@dataclass
class Check:
    name: str
    holds: bool
    tag: str = ""
    detail: object = None

    def to_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, "tag": self.tag, "detail": self.detail}

    @classmethod
    def from_dict(cls, d) -> "Check":
        return cls(d["name"], bool(d["holds"]), d.get("tag", ""), d.get("detail"))


@dataclass
class Report:
    command: list
    verdict: str = "pass"
    checks: list = field(default_factory=list)
    result: object = None
    witness: object = None
    notes: list = field(default_factory=list)

    def add(self, name: str, holds: bool, tag: str = "", detail=None) -> bool:
        self.checks.append(Check(name, bool(holds), tag, detail))
        return bool(holds)

    def settle(self) -> "Report":
        """pass iff every check holds (error verdicts are left alone)."""
        if self.verdict != "error":
            self.verdict = "pass" if all(c.holds for c in self.checks) else "fail"
        return self

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": list(self.command),
            "verdict": self.verdict,
            "checks": [c.to_dict() for c in self.checks],
            "result": self.result,
            "witness": self.witness,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d) -> "Report":
        if d.get("schema") != SCHEMA:
            raise ReportError(f"unsupported report schema {d.get('schema')!r}")
        if d.get("verdict") not in VERDICTS:
            raise ReportError(f"bad verdict {d.get('verdict')!r}")
        return cls(
            list(d["command"]),
            d["verdict"],
            [Check.from_dict(c) for c in d.get("checks", [])],
            d.get("result"),
            d.get("witness"),
            list(d.get("notes", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        lines = [f"$ idgalois {' '.join(self.command)}", f"verdict: {self.verdict.upper()}"]
        for c in self.checks:
            mark = "ok  " if c.holds else "FAIL"
            tag = f" [{c.tag}]" if c.tag else ""
            lines.append(f"  {mark} {c.name}{tag}")
            if c.detail is not None and not isinstance(c.detail, (dict, list)):
                lines.append(f"       {c.detail}")
        if self.result is not None:
            lines.append("result:")
            lines.extend("  " + ln for ln in _pretty(self.result).splitlines())
        if self.witness is not None:
            lines.append("witness:")
            lines.extend("  " + ln for ln in _pretty(self.witness).splitlines())
        for n in self.notes:
            lines.append(f"note: {n}")
        return "\n".join(lines)


def _pretty(x) -> str:
    if isinstance(x, str):
        return x
    return json.dumps(x, indent=2, sort_keys=True)
