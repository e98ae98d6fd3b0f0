"""
Report Models
Pydantic models for check results and command reports
"""
import json
from typing import Any, Literal

from pydantic import BaseModel, Field, model_validator


class CheckResult(BaseModel):
    """One named claim: pass iff expected equals observed exactly."""

    check_id: str
    status: Literal["pass", "fail"] = "fail"
    expected: Any = None
    observed: Any = None
    detail: str | None = None
    runtime_ms: float = Field(default=0.0, exclude=True)

    @model_validator(mode="after")
    def _status_matches(self):
        self.status = "pass" if _canonical(self.expected) == _canonical(self.observed) else "fail"
        return self

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class SuiteReport(BaseModel):
    command: str
    q_list: list[int]
    heavy: bool
    results: list[CheckResult]

    @property
    def failed(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_json(self) -> str:
        return dump_json(self.model_dump())


def _canonical(value: Any) -> str:
    return json.dumps(value, sort_keys=True, default=str)


def dump_json(data: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, default=str) + "\n"
