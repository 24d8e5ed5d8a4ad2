"""Verification reports shared by all checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    detail: str = ""

    def __str__(self) -> str:
        tail = f": {self.detail}" if self.detail else ""
        return f"[{self.kind}] {self.where}{tail}"


@dataclass
class VerificationReport:
    ok: bool = True
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0
    details: dict = field(default_factory=dict)

    def fail(self, kind: str, where: str, detail: str = "") -> None:
        self.ok = False
        self.violations.append(Violation(kind, where, detail))

    def tick(self, n: int = 1) -> None:
        self.checked += n

    def merge(self, other: "VerificationReport") -> None:
        self.ok = self.ok and other.ok
        self.violations.extend(other.violations)
        self.checked += other.checked

    def summary(self) -> str:
        if self.ok:
            return f"accept ({self.checked} constraints checked)"
        head = f"reject ({len(self.violations)} violations of {self.checked} checks)"
        body = "\n".join("  " + str(v) for v in self.violations[:20])
        more = "" if len(self.violations) <= 20 else f"\n  ... {len(self.violations) - 20} more"
        return f"{head}\n{body}{more}"
