"""Pass/fail records shared by the verification suites."""

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    """One verified claim. ``details`` holds JSON-ready evidence."""

    name: str
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "details": self.details}


@dataclass
class SuiteReport:
    """Ordered checks of one suite."""

    suite: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, **details: Any) -> Check:
        check = Check(name, bool(passed), details)
        self.checks.append(check)
        return check

    def extend(self, other: "SuiteReport") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "total": len(self.checks),
            "failed": len(self.failures),
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_table(self) -> str:
        width = max((len(c.name) for c in self.checks), default=4)
        lines = [f"{'check'.ljust(width)}  result"]
        lines.extend(f"{c.name.ljust(width)}  {'pass' if c.passed else 'FAIL'}" for c in self.checks)
        lines.append(f"{self.suite}: {len(self.checks) - len(self.failures)}/{len(self.checks)} passed")
        return "\n".join(lines)
