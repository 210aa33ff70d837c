"""Pydantic models for stratification output."""
from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict, Field

from api.models.enrichment_models import EnrichmentModel


class StratumConfigModel(BaseModel):
    """One element of Conf(η), readable back by StratumConfig.from_json."""
    f: Dict[str, str] = Field(..., description="Shape in {3,2,c,g} per Σ_{3,2,…,2} member")
    g: Dict[str, str] = Field(..., description="Shape in {2,1} per Σ_{2,…,2} member")
    P: Dict[str, List[Any]] = Field(..., description="Coincidence subset per signature class")
    label: str = Field(..., description="Compact one-line form")

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "f": {"[1,2,3]": "3"},
            "g": {},
            "P": {"1": [], "3": []},
            "label": "f[123]=3"
        }
    })


class StrataResponse(BaseModel):
    enrichment: EnrichmentModel = Field(..., description="Input enrichment")
    total: int = Field(..., description="|Conf(η)|, or the number of consistent configs when filtered")
    consistent_only: bool = Field(..., description="Whether the consistency filter was applied")
    general: StratumConfigModel = Field(..., description="General stratum")
    special: StratumConfigModel = Field(..., description="Special stratum")
    shown: int = Field(..., description="Number of configs listed")
    configs: List[StratumConfigModel] = Field(..., description="Configs in canonical order")


class PreimageResponse(BaseModel):
    source: EnrichmentModel = Field(..., description="Enrichment η the config lives over")
    target: EnrichmentModel = Field(..., description="Enrichment η′ ⊇ η")
    config: StratumConfigModel = Field(..., description="Config over η")
    count: int = Field(..., description="Number of configs over η′ restricting to it")
    preimages: List[StratumConfigModel] = Field(..., description="The fiber in canonical order")
