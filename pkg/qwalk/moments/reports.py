"""Report models for moment computations."""

import uuid
from datetime import datetime
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class MomentReport(BaseModel):
    """A character moment computed by one method."""
    report_id: str = Field(default_factory=lambda: str(uuid.uuid4()))
    method: str = Field(..., description="spectral, cesaro, multiset, group, montecarlo, phase-sum, truncated")
    model: Optional[str] = None
    p: int = Field(..., ge=1)
    params: Dict[str, Any] = Field(default_factory=dict)
    value: float
    uncertainty: float = Field(default=0.0, ge=0, description="0 for exact methods")
    seed: Optional[int] = None
    wall_time_ms: float = Field(default=0.0, ge=0)
    extras: Dict[str, Any] = Field(default_factory=dict)
    created_at: datetime = Field(default_factory=datetime.now)

    def csv_row(self) -> Dict[str, Any]:
        """Row for the (p, method, value, uncertainty, seed, time_ms) table."""
        return {
            "p": self.p,
            "method": self.method,
            "value": self.value,
            "uncertainty": self.uncertainty,
            "seed": "" if self.seed is None else self.seed,
            "time_ms": round(self.wall_time_ms, 3),
        }


CSV_COLUMNS = ["p", "method", "value", "uncertainty", "seed", "time_ms"]


class DualityReport(BaseModel):
    """Worst defect of gamma_p^r(U) = gamma_r^p(U') over a grid of (p, r)."""
    passed: bool
    model: str
    tol: float
    worst_defect: float = Field(..., ge=0)
    worst_pair: List[int] = Field(default_factory=list)
    values: Dict[str, float] = Field(default_factory=dict)


class BoundReport(BaseModel):
    """|c_p^r(W)| <= c_p^r(U) c_p^r(V) for W = U deformed by Q with V."""
    holds: bool
    p: int
    r: int
    c_w: float
    c_u: float
    c_v: float
    slack: float
    positivity_ok: bool
    positivity_detail: Dict[str, float] = Field(default_factory=dict)
