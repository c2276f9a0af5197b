"""
Verdict type returned by every checkable property.
"""
from dataclasses import dataclass, field
from typing import Any, Optional

from ..errors import InvariantBreach


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check: whether it holds, and a witness when it does not."""

    holds: bool
    witness: Optional[Any] = None
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    @classmethod
    def ok(cls, detail: str = "", **extra) -> "Verdict":
        """A passing verdict."""
        return cls(True, None, detail, dict(extra))

    @classmethod
    def fail(cls, witness: Any, detail: str = "", **extra) -> "Verdict":
        """A failing verdict with its witness."""
        return cls(False, witness, detail, dict(extra))

    def or_raise(self, check: str) -> "Verdict":
        """Raise InvariantBreach carrying the witness if the check failed."""
        if not self.holds:
            raise InvariantBreach(check, self.witness, self.detail)
        return self

    def to_dict(self) -> dict:
        data = {"holds": self.holds}
        if self.witness is not None:
            data["witness"] = self.witness
        if self.detail:
            data["detail"] = self.detail
        data.update(self.extra)
        return data


def first_failure(*verdicts: Verdict) -> Verdict:
    """Return the first failed verdict, or a passing one when all hold."""
    for verdict in verdicts:
        if not verdict.holds:
            return verdict
    return Verdict.ok()
