"""Report models for walk moments and representation checks."""

import uuid
from datetime import datetime
from fractions import Fraction
from typing import Any, Dict, List

from pydantic import BaseModel, Field


class WalkReport(BaseModel):
    """Exact character moment from an enumeration."""
    report_id: str = Field(default_factory=lambda: str(uuid.uuid4()))
    method: str = Field(..., description="multiset or group")
    x: str
    y: str
    p: int = Field(..., ge=1)
    count: int = Field(..., ge=0, description="number of tuples satisfying the condition")
    numerator: int
    denominator: int = Field(..., ge=1)
    value: float
    wall_time_ms: float = Field(default=0.0, ge=0)
    created_at: datetime = Field(default_factory=datetime.now)

    @property
    def exact(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


class ProbeReport(BaseModel):
    """Projective faithfulness probe over sampled nontrivial T-words."""
    passed: bool
    n_words: int
    detected: int
    seed: int
    tol: float
    min_spread: float = Field(..., ge=0, description="smallest best-k diagonal spread over all words")
    max_offdiagonal: float = Field(default=0.0, ge=0)
    undetected: List[List[List[int]]] = Field(default_factory=list)


class RepReport(BaseModel):
    """Deviation of the model action on eps_ke from the theta-shift."""
    passed: bool
    tol: float
    max_deviation: float = Field(..., ge=0)
    worst_case: Dict[str, Any] = Field(default_factory=dict)
