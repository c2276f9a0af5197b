"""
Structured command results, rendered as JSON or text.
"""
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..algebra.verdict import Verdict


@dataclass
class CheckResult:
    """One named check on one subject."""

    name: str
    subject: str
    holds: bool
    witness: Any = None
    detail: str = ""
    seconds: float = 0.0

    def to_dict(self, timings: bool = True) -> Dict[str, Any]:
        data: Dict[str, Any] = {"name": self.name, "subject": self.subject, "holds": self.holds}
        if not self.holds:
            data["witness"] = self.witness
            data["detail"] = self.detail
        if timings:
            data["seconds"] = round(self.seconds, 4)
        return data


@dataclass
class Report:
    """Facts and checks produced by one command."""

    command: str
    facts: Dict[str, Any] = field(default_factory=dict)
    checks: List[CheckResult] = field(default_factory=list)
    seed: Optional[int] = None

    def add(self, name: str, verdict: Verdict, subject: str = "", seconds: float = 0.0) -> CheckResult:
        result = CheckResult(name, subject, verdict.holds, verdict.witness, verdict.detail, seconds)
        self.checks.append(result)
        return result

    def extend(self, other: "Report"):
        """Append the checks of another report; facts already present are kept."""
        self.checks.extend(other.checks)
        for key, value in other.facts.items():
            self.facts.setdefault(key, value)

    @property
    def passed(self) -> bool:
        return all(c.holds for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.holds]

    def to_dict(self, timings: bool = True) -> Dict[str, Any]:
        data = {
            "command": self.command,
            "passed": self.passed,
            "facts": self.facts,
            "checks": [c.to_dict(timings) for c in self.checks],
        }
        if self.seed is not None:
            data["seed"] = self.seed
        return data

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2, ensure_ascii=False, default=str)

    def to_text(self) -> str:
        """Facts, the pass count and every failure with its witness."""
        lines = [f"{self.command}: {'PASS' if self.passed else 'FAIL'}"]
        for key, value in self.facts.items():
            lines.append(f"  {key}: {_inline(value)}")
        total = len(self.checks)
        if total:
            lines.append(f"  checks: {total - len(self.failures)}/{total} passed")
        for check in self.failures:
            subject = f"[{check.subject}] " if check.subject else ""
            lines.append(f"  FAIL {subject}{check.name}: {check.detail}")
            lines.append(f"       witness: {_inline(check.witness)}")
        return "\n".join(lines)


def _inline(value: Any) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, ensure_ascii=False, default=str)
    return str(value)
