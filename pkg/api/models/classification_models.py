"""Pydantic models for classification, quotient and diagram output."""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from api.models.enrichment_models import EnrichmentModel


class RuleApplicationModel(BaseModel):
    rule: str = Field(..., description="Rule family tag")
    added: Any = Field(..., description="Structure added by the rule")
    witnesses: List[Any] = Field(..., description="Structures the precondition was read from")
    permutation: Optional[List[int]] = Field(None, description="Relabelling from the stated form, when one applies")
    description: str = Field(..., description="Readable form of the step")


class ClassificationResponse(BaseModel):
    """Verdict for one enrichment."""
    input: EnrichmentModel = Field(..., description="Enrichment as given")
    verdict: str = Field(..., description="'admissible' or 'non_admissible'")
    model: Optional[str] = Field(None, description="Matching model in R-notation")
    permutation: Optional[List[int]] = Field(None, description="g with saturate(g·η) equal to the model's saturation")
    closure: Optional[EnrichmentModel] = Field(None, description="saturate(g·η)")
    trace: List[RuleApplicationModel] = Field(default_factory=list, description="Rule applications in order")
    detector: Optional[str] = Field(None, description="Detector that fired for non-admissible input")
    witness: Optional[str] = Field(None, description="Why the detector fired")
    reduced: bool = Field(False, description="Whether levels ≥ 3 were peeled to reach the verdict")

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "input": {"n": 3, "structures": [[1, 2, 3], [1], [2]], "notation": "R_{1,2,123}"},
            "verdict": "non_admissible",
            "trace": [],
            "detector": "ExactList",
            "witness": "conjugate of R_{1,2,123}",
            "reduced": False
        }
    })


class ClassificationSummaryResponse(BaseModel):
    n: int = Field(..., description="Ground-set size")
    max_level: int = Field(..., description="Deepest level enumerated")
    total: int = Field(..., description="Enrichments classified")
    classes: int = Field(..., description="Distinct isomorphism keys among admissible enrichments")
    admissible: int = Field(..., description="Admissible enrichments")
    non_admissible: int = Field(..., description="Non-admissible enrichments")
    incomplete: int = Field(..., description="Enrichments the engine could not decide")
    by_model: Dict[str, int] = Field(..., description="Admissible count per model")
    by_detector: Dict[str, int] = Field(..., description="Non-admissible count per detector")
    certificates: Dict[str, int] = Field(default_factory=dict, description="Replayed certificate length per model")


class QuotientRowModel(BaseModel):
    model: str = Field(..., description="Model in R-notation")
    group: str = Field(..., description="Acting group label")
    quotient: str = Field(..., description="Quotient enrichment in R-notation")
    group_verified: bool = Field(..., description="Whether the acting group was recomputed and matched")
    invariant_status: str = Field(..., description="'verified' or 'repaired'")
    dropped: List[str] = Field(default_factory=list, description="Point structures removed by the repair")
    partial: bool = Field(False, description="Whether the row quotients by a proper subgroup")


class QuotientTableResponse(BaseModel):
    rows: List[QuotientRowModel] = Field(..., description="Rows in model order, partial quotient last")


class DiagramResponse(BaseModel):
    nodes: List[str] = Field(..., description="Models in R-notation")
    edges: List[List[str]] = Field(..., description="Every forgetful morphism [source, target]")
    covering_edges: List[List[str]] = Field(..., description="Transitive reduction of edges")
