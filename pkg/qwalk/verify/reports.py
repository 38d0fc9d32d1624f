"""Report models for the verification suite."""

import uuid
from datetime import datetime
from typing import Any, Dict, List

from pydantic import BaseModel, Field


class CheckResult(BaseModel):
    """Outcome of one planned check."""
    id: str
    category: str
    description: str = ""
    passed: bool
    wall_time_ms: float = Field(default=0.0, ge=0)
    details: Dict[str, Any] = Field(default_factory=dict)
    failures: List[str] = Field(default_factory=list)


class SuiteReport(BaseModel):
    """All check results of one verify run."""
    run_id: str = Field(default_factory=lambda: str(uuid.uuid4()))
    level: str
    results: List[CheckResult] = Field(default_factory=list)
    started_at: datetime = Field(default_factory=datetime.now)
    total_time_ms: float = Field(default=0.0, ge=0)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> List[str]:
        return [f"{r.id}: {f}" for r in self.results if not r.passed for f in (r.failures or ["failed"])]
