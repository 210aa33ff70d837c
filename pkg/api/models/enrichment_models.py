"""Pydantic models for structure, incidence, orbit and group output."""
from typing import Any, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class StructureModel(BaseModel):
    """One canonical structure."""
    literal: Any = Field(..., description="Nested-array form of the structure")
    token: Optional[str] = Field(None, description="Compact token such as '12', '^1' or '^123'")
    signature: List[int] = Field(..., description="Canonical signature, singleton levels stripped")
    level: int = Field(..., ge=1, description="Nesting depth")


class EnrichmentModel(BaseModel):
    """Enrichment as accepted by Enrichment.from_json."""
    n: int = Field(..., ge=1, description="Ground-set size")
    structures: List[Any] = Field(..., description="Member structures as nested arrays, in sequence order")
    notation: Optional[str] = Field(None, description="R-notation when one exists")

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "n": 3,
            "structures": [[1, 2, 3], [1]],
            "notation": "R_{1,123}"
        }
    })


class StructureListResponse(BaseModel):
    n: int = Field(..., description="Ground-set size")
    max_level: int = Field(..., description="Deepest level enumerated")
    count: int = Field(..., description="Number of structures")
    structures: List[StructureModel] = Field(..., description="Structures in canonical order")


class SignatureSplitModel(BaseModel):
    r: int = Field(..., description="Depth of σ above the common inner signature")
    q: List[int] = Field(..., description="Outer part of σ's signature")
    p: List[int] = Field(..., description="Common inner signature (empty for points)")
    n: List[int] = Field(..., description="Size of each target read inside the inner signature")


class IncidenceModel(BaseModel):
    sigma: Any = Field(..., description="Structure that is covered")
    targets: List[Any] = Field(..., description="Covering structures")
    description: str = Field(..., description="Readable form, e.g. 'σ_12 ⊂ σ_123'")
    split: SignatureSplitModel = Field(..., description="Signature split witnessing the incidence")


class IncidenceResponse(BaseModel):
    enrichment: EnrichmentModel = Field(..., description="Input enrichment")
    max_arity: int = Field(..., description="Largest 1 + number of targets scanned")
    count: int = Field(..., description="Number of incidences found")
    relations: List[IncidenceModel] = Field(..., description="Incidences in scan order")


class OrbitResponse(BaseModel):
    enrichment: EnrichmentModel = Field(..., description="Input enrichment")
    size: int = Field(..., description="Number of distinct relabellings")
    orbit: List[EnrichmentModel] = Field(..., description="Distinct images under S_n")


class GroupModel(BaseModel):
    elements: List[List[int]] = Field(..., description="Permutations as image lists")
    label: str = Field(..., description="Isomorphism label, e.g. S_2")
    order: int = Field(..., description="Number of elements")


class GroupsResponse(BaseModel):
    enrichment: EnrichmentModel = Field(..., description="Input enrichment")
    stabilizer: GroupModel = Field(..., description="G_η: permutations fixing η as a set")
    pointwise: GroupModel = Field(..., description="H_η: permutations fixing every member")
    normal: bool = Field(..., description="Whether H_η is normal in G_η")
    acting: str = Field(..., description="Label of the acting group G_η/H_η")
    acting_representatives: List[List[int]] = Field(..., description="Least coset representatives of G_η/H_η")

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "enrichment": {"n": 3, "structures": [[1, 2, 3]], "notation": "R_123"},
            "stabilizer": {"elements": [[1, 2, 3]], "label": "S_1", "order": 1},
            "pointwise": {"elements": [[1, 2, 3]], "label": "S_1", "order": 1},
            "normal": True,
            "acting": "S_1",
            "acting_representatives": [[1, 2, 3]]
        }
    })
