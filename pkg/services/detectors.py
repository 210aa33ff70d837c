"""Non-admissibility detectors for enrichments over {1,2,3}."""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, FrozenSet, List, Optional, Tuple

from services.enrichments import Enrichment, enrichment_from_name
from services.structures import POINTS, Structure
from services.symmetry_service import act, all_permutations

logger = logging.getLogger(__name__)


class DetectorTag(str, Enum):
    EXACT_LIST = "ExactList"
    UNIQUE_DOUBLE_DOUBLE_WITH_POINT = "UniqueDoubleDoubleWithPoint"
    TWO_DOUBLE_DOUBLES_NO_DOUBLET = "TwoDoubleDoublesNoDoublet"
    LEVEL_THREE_LOW_PART = "LevelThreeLowPart"


@dataclass(frozen=True)
class Detection:
    tag: DetectorTag
    witness: str


# enrichments known not to be admissible, up to relabelling
EXACT_NONADMISSIBLE = (
    "R_{1,2,123}",
    "R_{1,2,3,123}",
    "R^123_{1,2,123}",
    "R^123_{1,2,3,123}",
)

LEVEL_THREE_BOUND = "R^1_{1,2,3,12,13,123}"


@lru_cache(maxsize=None)
def _conjugates(name: str) -> Tuple[FrozenSet[Structure], ...]:
    eta = enrichment_from_name(name, 3)
    return tuple({act(g, eta).as_set for g in all_permutations(3)})


def _is_doublet(s: Structure) -> bool:
    return s.is_leaf and len(s.items) == 2


def _double_doubles(eta: Enrichment) -> List[Structure]:
    return [s for s in eta.structures if s.signature == (2, 2)]


def _doublets(eta: Enrichment) -> List[Structure]:
    return [s for s in eta.structures if _is_doublet(s)]


def _level_three_low_part(eta: Enrichment) -> Optional[str]:
    if eta.level < 3:
        return None
    low = frozenset(s for s in eta.structures if s.level <= 2)
    if any(low <= bound for bound in _conjugates(LEVEL_THREE_BOUND)):
        return f"levels one and two lie inside a conjugate of {LEVEL_THREE_BOUND}"
    return None


def _exact_list(eta: Enrichment) -> Optional[str]:
    if eta.level >= 3:
        return None
    for name in EXACT_NONADMISSIBLE:
        if eta.as_set in _conjugates(name):
            return f"conjugate of {name}"
    return None


def _unique_double_double_with_point(eta: Enrichment) -> Optional[str]:
    # σ^i must be the only level-two member, so σ^123 excludes it
    if eta.level >= 3:
        return None
    double_doubles = _double_doubles(eta)
    has_triple = any(s.signature == (3, 2) for s in eta.structures)
    points = [s for s in eta.structures if s.signature == POINTS]
    if len(double_doubles) == 1 and not _doublets(eta) and not has_triple and points:
        return (f"{double_doubles[0].describe()} is the only doublet-type structure, "
                f"with point {points[0].describe()}")
    return None


def _two_double_doubles_no_doublet(eta: Enrichment) -> Optional[str]:
    if eta.level >= 3:
        return None
    double_doubles = _double_doubles(eta)
    if len(double_doubles) >= 2 and not _doublets(eta):
        return f"{double_doubles[0].describe()} and {double_doubles[1].describe()} without any doublet"
    return None


# checked in this order; the conditions are pairwise exclusive
DETECTORS: Tuple[Tuple[DetectorTag, Callable[[Enrichment], Optional[str]]], ...] = (
    (DetectorTag.LEVEL_THREE_LOW_PART, _level_three_low_part),
    (DetectorTag.EXACT_LIST, _exact_list),
    (DetectorTag.UNIQUE_DOUBLE_DOUBLE_WITH_POINT, _unique_double_double_with_point),
    (DetectorTag.TWO_DOUBLE_DOUBLES_NO_DOUBLET, _two_double_doubles_no_doublet),
)


def matching_detectors(eta: Enrichment) -> List[Detection]:
    """Every detector whose condition holds. Only enrichments over {1,2,3} are inspected."""
    if eta.n != 3:
        return []
    found = []
    for tag, condition in DETECTORS:
        witness = condition(eta)
        if witness is not None:
            found.append(Detection(tag, witness))
    return found


def detect_nonadmissible(eta: Enrichment) -> Optional[Detection]:
    """First matching detector, or None."""
    found = matching_detectors(eta)
    if found:
        logger.debug(f"{eta.describe()}: {found[0].tag.value}")
        return found[0]
    return None
