"""Report models for structural checks on magic models."""

from typing import Dict, Optional

from pydantic import BaseModel, Field


class MagicReport(BaseModel):
    """Worst defects of the magic invariants (operator norm)."""
    passed: bool
    model: str
    tol: float
    worst_defects: Dict[str, float] = Field(default_factory=dict)


class ProjectiveReport(BaseModel):
    """Magic checks of a model and of its flip dual."""
    passed: bool
    model: MagicReport
    dual: Optional[MagicReport] = None


class PositivityReport(BaseModel):
    """Smallest transfer-matrix entry over p <= p_max."""
    positive: bool
    worst_entry: float
    worst_p: int
    p_max: int
    max_imaginary: float = Field(default=0.0, ge=0)


class WreathReport(BaseModel):
    """Deviations of the two block-sum factorizations of a model over X x Y."""
    passed: bool
    tol: float
    column_sum_deviation: float = Field(..., ge=0, description="sum over a of W_{ia,jb} vs b")
    row_sum_deviation: float = Field(..., ge=0, description="sum over j of W_{ia,jb} vs (i, a-b)")

    @property
    def worst_deviation(self) -> float:
        return max(self.column_sum_deviation, self.row_sum_deviation)
