"""Small result records returned by the check_* functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a single identity check.

    ``witness`` holds the first counterexample found (or None on success);
    ``message`` names the identity that failed.
    """

    ok: bool
    witness: Any = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "pass": self.ok,
            "witness": None if self.witness is None else repr(self.witness),
            "message": self.message,
        }


@dataclass(frozen=True)
class SuiteReport:
    """Outcome of a randomized trial suite."""

    name: str
    trials: int
    seed: int
    failures: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def reproduce(self) -> str:
        return f"gpd check {self.name} --trials {self.trials} --seed {self.seed}"

    def to_dict(self) -> dict:
        return {
            "check": self.name,
            "trials": self.trials,
            "seed": self.seed,
            "pass": self.ok,
            "failures": [
                {"trial": t, "detail": repr(w)} for (t, w) in self.failures
            ],
            "reproduce": self.reproduce(),
        }
