"""Check records and their two text renderings.

Plain form, one line per record sorted by name::

    PASS code2/n=03  inputs=set=evens horizon=200  expected=In  got=In(1)
    summary: 8 checks, 8 passed, 0 failed

Machine form, one record per line with keys in the fixed order
``record name status inputs expected got`` and a closing
``summary total passed failed`` line; values are shell-quoted.
"""
from __future__ import annotations

import shlex
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Record:
    name: str
    inputs: str
    expected: str
    got: str
    ok: bool

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"


@dataclass
class Report:
    command: str
    records: list[Record] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, name, inputs, expected, got, ok) -> Record:
        r = Record(str(name), str(inputs), str(expected), str(got), bool(ok))
        self.records.append(r)
        return r

    def extend(self, other: Report):
        self.records.extend(other.records)
        self.notes.extend(other.notes)

    def sorted_records(self) -> list[Record]:
        return sorted(self.records, key=lambda r: r.name)

    @property
    def passed(self) -> int:
        return sum(r.ok for r in self.records)

    @property
    def failed(self) -> int:
        return len(self.records) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def render(self) -> str:
        lines = [f"command: {self.command}"]
        lines += [f"note: {n}" for n in self.notes]
        for r in self.sorted_records():
            lines.append(f"{r.status.upper()} {r.name}  inputs={r.inputs}  "
                         f"expected={r.expected}  got={r.got}")
        lines.append(f"summary: {len(self.records)} checks, {self.passed} passed, "
                     f"{self.failed} failed")
        return "\n".join(lines) + "\n"

    def render_machine(self) -> str:
        q = shlex.quote
        lines = [f"command={q(self.command)}"]
        for r in self.sorted_records():
            lines.append(f"record name={q(r.name)} status={r.status} inputs={q(r.inputs)} "
                         f"expected={q(r.expected)} got={q(r.got)}")
        lines.append(f"summary total={len(self.records)} passed={self.passed} "
                     f"failed={self.failed}")
        return "\n".join(lines) + "\n"


def parse_machine(text: str) -> list[dict]:
    """Read the machine form back into dictionaries (one per line)."""
    out = []
    for line in text.splitlines():
        parts = shlex.split(line)
        d = {"kind": parts[0].split("=")[0] if "=" in parts[0] else parts[0]}
        for p in parts if "=" in parts[0] else parts[1:]:
            k, _, v = p.partition("=")
            d[k] = v
        out.append(d)
    return out
