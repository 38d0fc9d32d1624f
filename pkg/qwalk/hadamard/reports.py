"""Report models for Hadamard validation."""

from pydantic import BaseModel, Field


class HadamardReport(BaseModel):
    """Outcome of validate_hadamard."""
    is_hadamard: bool
    dimension: int
    max_modulus_defect: float = Field(..., ge=0, description="max | |H_ij| - 1 |")
    max_orthogonality_defect: float = Field(..., ge=0, description="max |<H_i, H_j>| over i != j")
    tol: float
