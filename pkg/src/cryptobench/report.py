"""Run reports: structured results plus expected-versus-got checks.

Text output is one ``key: value`` line per result followed by one line per
check. JSON output is a single object with keys ``subcommand``,
``parameters``, ``seed``, ``results``, ``checks`` and ``exit_code``; each
check is ``{"name", "status", "expected", "got", "note"}``. Keys are sorted
so identical runs give identical bytes.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any


class Status(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIPPED = "SKIPPED"


@dataclass
class Check:
    name: str
    status: Status
    expected: Any = None
    got: Any = None
    note: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status.value, "expected": _plain(self.expected),
                "got": _plain(self.got), "note": self.note}


def _plain(v: Any) -> Any:
    if isinstance(v, (set, frozenset)):
        return sorted(_plain(x) for x in v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, enum.Enum):
        return v.name
    if isinstance(v, bytes):
        return v.hex()
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    return str(v)


@dataclass
class RunReport:
    subcommand: str
    seed: int
    parameters: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    def add(self, key: str, value: Any) -> None:
        self.results[key] = value

    def check(self, name: str, expected: Any, got: Any, note: str = "") -> Check:
        c = Check(name, Status.PASS if expected == got else Status.FAIL, expected, got, note)
        self.checks.append(c)
        return c

    def skip(self, name: str, reason: str) -> Check:
        c = Check(name, Status.SKIPPED, note=reason)
        self.checks.append(c)
        return c

    def fail(self, name: str, note: str, expected: Any = None, got: Any = None) -> Check:
        c = Check(name, Status.FAIL, expected, got, note)
        self.checks.append(c)
        return c

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status is Status.FAIL]

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0

    def to_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "parameters": _plain(self.parameters),
            "seed": self.seed,
            "results": _plain(self.results),
            "checks": [c.to_dict() for c in self.checks],
            "exit_code": self.exit_code,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [f"# {self.subcommand} (seed {self.seed})"]
        for k, v in self.parameters.items():
            lines.append(f"param {k}: {_render(v)}")
        for k, v in self.results.items():
            text = _render(v)
            if "\n" in text:
                lines.append(f"{k}:")
                lines.extend("  " + s for s in text.splitlines())
            else:
                lines.append(f"{k}: {text}")
        for c in self.checks:
            line = f"[{c.status.value}] {c.name}"
            if c.status is Status.FAIL:
                line += f": expected {_render(c.expected)}, got {_render(c.got)}"
            if c.note:
                line += f" ({c.note})"
            lines.append(line)
        if self.checks:
            counts = {s: sum(c.status is s for c in self.checks) for s in Status}
            lines.append("summary: " + ", ".join(f"{counts[s]} {s.value}" for s in Status))
        return "\n".join(lines)


def _render(v: Any) -> str:
    v = _plain(v)
    if isinstance(v, str):
        return v
    return json.dumps(v, sort_keys=True)
