"""Pass/fail records shared by every verifier in the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "pass": self.passed}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    """An ordered collection of checks; passes iff every check passes."""

    checks: list = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.passed

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    @property
    def witness(self):
        bad = self.failures
        return (bad[0].name, bad[0].witness) if bad else None

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list:
        return [c.name for c in self.checks]

    def to_json(self) -> list:
        return [c.to_json() for c in self.checks]


def _jsonable(obj):
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    return str(obj)
