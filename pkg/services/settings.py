"""Workbench settings: caps and defaults shared by the services."""
import logging

from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from api.exceptions import ValidationError

logger = logging.getLogger(__name__)


class WorkbenchSettings(BaseModel):
    """Tunable limits. Every value can be overridden from the command line only."""
    max_level: int = Field(3, ge=1, le=6, description="Deepest enrichment level accepted by saturation")
    incidence_max_arity: int = Field(4, ge=1, le=6, description="Largest tuple size scanned by incidence_closure")
    max_total_degree: int = Field(12, ge=1, description="Largest total degree allowed during Buchberger")
    max_terms: int = Field(5000, ge=1, description="Largest number of terms allowed in one polynomial")
    max_pair_count: int = Field(20000, ge=1, description="Largest number of S-pairs processed by one Buchberger run")
    random_orders: int = Field(100, ge=1, description="Randomized rule orders used by confluence checks")
    seed: int = Field(0, ge=0, description="Seed for randomized checks and random chart parameters")

    model_config = ConfigDict(frozen=True, json_schema_extra={
        "example": {
            "max_level": 3,
            "incidence_max_arity": 4,
            "max_total_degree": 12,
            "max_terms": 5000,
            "max_pair_count": 20000,
            "random_orders": 100,
            "seed": 0
        }
    })


DEFAULT_SETTINGS = WorkbenchSettings()


def get_settings(**overrides) -> WorkbenchSettings:
    """Build settings from defaults plus explicit overrides.

    Args:
        **overrides: Field values; None entries are ignored.

    Returns:
        Validated settings instance.
    """
    values = {key: value for key, value in overrides.items() if value is not None}
    if not values:
        return DEFAULT_SETTINGS
    try:
        settings = WorkbenchSettings(**values)
    except PydanticValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(loc) for loc in first["loc"])
        raise ValidationError(first["msg"], field=field)
    logger.debug(f"Using settings overrides: {values}")
    return settings
