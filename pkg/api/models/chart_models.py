"""Pydantic models for chart verification and residual output."""
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field


class ChartReportModel(BaseModel):
    """Verification report for one chart."""
    target: str = Field(..., description="R_12_123, R1_123 or R123_123")
    dim: int = Field(..., description="Dimension of X")
    mode: str = Field(..., description="'substituted' or 'symbolic-w'")
    variables: List[str] = Field(..., description="Chart parameters entering the Jacobian")
    rank: int = Field(..., description="Rank of the linear parts at the special point")
    dimension: int = Field(..., description="Number of variables minus rank")
    expected_dimension: int = Field(..., description="3·dim")
    paper_contained: bool = Field(..., description="Every quoted generator lies in the computed ideal")
    extras_absorbed: Optional[bool] = Field(None, description="Every computed generator lies in the quoted ideal")
    free_variables: List[str] = Field(..., description="Non-pivot variables")
    expected_free_variables: List[str] = Field(..., description="Quoted coordinates of the smooth locus")
    free_variable_check: bool = Field(..., description="Jacobian invertible on the complement of the quoted coordinates")
    replay_identities_hold: Optional[bool] = Field(None, description="Quoted division steps hold modulo the inner basis")
    computed_generators: List[str] = Field(..., description="Coefficient conditions of the divisions")
    quoted_generators: List[str] = Field(..., description="Quoted generators, w substituted in substituted mode")
    missing_generators: List[str] = Field(default_factory=list, description="Quoted generators outside the computed ideal")
    unabsorbed_generators: List[str] = Field(default_factory=list, description="Computed generators outside the quoted ideal")
    notes: List[str] = Field(default_factory=list, description="Mode remarks")
    passed: bool = Field(..., description="Overall verdict")

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "target": "R1_123",
            "dim": 2,
            "mode": "substituted",
            "rank": 8,
            "dimension": 6,
            "expected_dimension": 6,
            "paper_contained": True,
            "extras_absorbed": True,
            "free_variables": ["u1", "v1", "e", "f", "i", "j"],
            "passed": True
        }
    })


class VerifyChartsResponse(BaseModel):
    reports: List[ChartReportModel] = Field(..., description="One report per target")


class IdealModel(BaseModel):
    """Ideal document, readable back by ideal_from_json."""
    vars: List[str] = Field(..., description="Ring variables in ring order")
    gens: List[str] = Field(..., description="Generators as text")


class ResidualResponse(BaseModel):
    ideal: IdealModel = Field(..., description="I")
    by: IdealModel = Field(..., description="J")
    colon: IdealModel = Field(..., description="(I : J) as a reduced Gröbner basis")
