"""Shared result type and converters for the subcommand handlers."""
import json
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel

from api.exceptions import ValidationError
from api.models.enrichment_models import EnrichmentModel, StructureModel
from services.enrichments import Enrichment, notation
from services.structures import Structure


@dataclass
class CommandResult:
    """What a handler produced; main picks the rendering named by --format."""
    payload: BaseModel
    text: str
    dot: Optional[str] = None

    def render(self, output_format: str, command: str) -> str:
        if output_format == "json":
            return json.dumps(self.payload.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"
        if output_format == "dot":
            if self.dot is None:
                raise ValidationError(f"'{command}' has no DOT output", field="format")
            return self.dot
        return self.text if self.text.endswith("\n") else self.text + "\n"


def structure_model(s: Structure) -> StructureModel:
    return StructureModel(literal=s.to_literal(), token=s.token, signature=list(s.signature), level=s.level)


def enrichment_model(eta: Enrichment) -> EnrichmentModel:
    return EnrichmentModel(n=eta.n, structures=[s.to_literal() for s in eta.structures], notation=notation(eta))


def table(rows: Sequence[Dict[str, Any]], columns: List[str]) -> str:
    """Plain-text table; an empty table prints its header only."""
    frame = pd.DataFrame(list(rows), columns=columns)
    if frame.empty:
        return "  ".join(columns)
    return frame.to_string(index=False)
