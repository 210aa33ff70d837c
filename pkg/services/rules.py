"""Identifiability rules and saturation.

Each rule adds one structure to an enrichment without changing its isomorphism class:

- Residual:          a = b ∪ {x} with b one element short of a      -> add x
- PairToDouble:      σ_ij, σ_ik                                    -> add σ^i
- DoubleFromTriple:  σ_ij, σ^123                                   -> add σ^k
- TripleFromDouble:  σ_ij, σ^k                                     -> add σ^123
- Level3Triple:      s_l present (l ≥ 2), s_{l+1} within the level -> add s_{l+1}
- Level3Residual:    e = s_l, g ∈ [e] at level l ≥ 3               -> add [e] − {g}

where s_l is the unique member of Σ_{3,2,…,2} of level l over {1,2,3}.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from api.exceptions import LevelCapExceededError
from services.enrichments import Enrichment
from services.incidence_service import elements_at, incidence
from services.settings import DEFAULT_SETTINGS, WorkbenchSettings
from services.structures import POINTS, Structure, structure_order
from services.symmetry_service import Permutation, conjugating_permutation

logger = logging.getLogger(__name__)


class RuleTag(str, Enum):
    """Rule families."""
    RESIDUAL = "Residual"
    PAIR_TO_DOUBLE = "PairToDouble"
    DOUBLE_FROM_TRIPLE = "DoubleFromTriple"
    TRIPLE_FROM_DOUBLE = "TripleFromDouble"
    LEVEL3_TRIPLE = "Level3Triple"
    LEVEL3_RESIDUAL = "Level3Residual"
    UNIVERSAL_LEVEL_ONE = "UniversalLevelOne"
    UNIVERSAL_LEVEL_TWO = "UniversalLevelTwo"


IDENTIFIABILITY_RULES = (
    RuleTag.RESIDUAL,
    RuleTag.PAIR_TO_DOUBLE,
    RuleTag.DOUBLE_FROM_TRIPLE,
    RuleTag.TRIPLE_FROM_DOUBLE,
    RuleTag.LEVEL3_TRIPLE,
    RuleTag.LEVEL3_RESIDUAL,
)


@dataclass(frozen=True)
class RuleApplication:
    """One rule instance: the added structure, its witnesses and the relabelling from the stated form."""
    rule: RuleTag
    added: Structure
    witnesses: Tuple[Structure, ...]
    permutation: Optional[Permutation] = None

    def describe(self) -> str:
        witnesses = ", ".join(w.describe() for w in self.witnesses)
        return f"{self.rule.value}: +{self.added.describe()} from {witnesses}"

    def to_json(self) -> Dict[str, object]:
        return {
            "rule": self.rule.value,
            "added": self.added.to_literal(),
            "witnesses": [w.to_literal() for w in self.witnesses],
            "permutation": self.permutation.to_json() if self.permutation else None,
        }


def doublet(i: int, j: int) -> Structure:
    return Structure.leaf((i, j))


def double_double(k: int) -> Structure:
    """σ^k = {σ_ik, σ_jk} over {1,2,3}."""
    return Structure.node(doublet(i, k) for i in (1, 2, 3) if i != k)


def triple_doublet() -> Structure:
    """σ^123 = {σ_12, σ_13, σ_23}."""
    return Structure.node((doublet(1, 2), doublet(1, 3), doublet(2, 3)))


def twos_structures(level: int) -> List[Structure]:
    """The three members of Σ_{2,…,2} of the given level over {1,2,3}."""
    if level == 1:
        return [doublet(1, 2), doublet(1, 3), doublet(2, 3)]
    lower = twos_structures(level - 1)
    return structure_order(Structure.node(pair) for pair in ((lower[0], lower[1]), (lower[0], lower[2]), (lower[1], lower[2])))


def top_structure(level: int) -> Structure:
    """s_l: the member of Σ_{3,2,…,2} of the given level over {1,2,3} (s_1 = σ_123)."""
    if level == 1:
        return Structure.leaf((1, 2, 3))
    return Structure.node(twos_structures(level - 1))


def _is_doublet(s: Structure) -> bool:
    return s.is_leaf and len(s.items) == 2


def _is_twos(s: Structure) -> bool:
    return all(p == 2 for p in s.signature)


def _is_top(s: Structure) -> bool:
    return s.signature[0] == 3 and all(p == 2 for p in s.signature[1:]) and s.carrier == frozenset({1, 2, 3})


def _residual(a: Structure, b: Structure) -> Optional[Structure]:
    base = POINTS if a.is_leaf else a.items[0].signature
    members = elements_at(a, base)
    smaller = elements_at(b, base)
    if smaller is None or len(smaller) != len(members) - 1 or not smaller <= members:
        return None
    (missing,) = members - smaller
    return missing


def _pair_to_double(d1: Structure, d2: Structure) -> Optional[Structure]:
    if not (_is_doublet(d1) and _is_doublet(d2)) or d1 == d2:
        return None
    if len(set(d1.items) & set(d2.items)) != 1:
        return None
    return Structure.node((d1, d2))


def _double_from_triple(d: Structure, t: Structure) -> Optional[Structure]:
    if not _is_doublet(d) or t != triple_doublet() or d not in t.items:
        return None
    return Structure.node(c for c in t.items if c != d)


def _triple_from_double(d: Structure, dd: Structure) -> Optional[Structure]:
    if not _is_doublet(d) or dd.signature != (2, 2) or dd.carrier != frozenset({1, 2, 3}):
        return None
    if d in dd.items:
        return None
    return triple_doublet()


def _level3_residual(e: Structure, g: Structure) -> Optional[Structure]:
    if e.level < 3 or not _is_top(e) or g not in e.items:
        return None
    return Structure.node(c for c in e.items if c != g)


def _conjugate(n: int, stated: Tuple[Structure, ...], actual: Tuple[Structure, ...]) -> Optional[Permutation]:
    return conjugating_permutation(n, stated, actual)


@lru_cache(maxsize=1 << 16)
def _extensions_of(n: int, members: frozenset) -> Tuple[RuleApplication, ...]:
    ordered = structure_order(members)
    found: List[RuleApplication] = []

    def offer(rule: RuleTag, added: Optional[Structure], witnesses: Tuple[Structure, ...],
              stated: Optional[Tuple[Structure, ...]] = None):
        if added is None or added in members:
            return
        permutation = _conjugate(n, stated, witnesses) if stated else None
        found.append(RuleApplication(rule, added, witnesses, permutation))

    for a in ordered:
        if a.signature == POINTS:
            continue
        for b in ordered:
            if b != a:
                offer(RuleTag.RESIDUAL, _residual(a, b), (a, b))

    if n == 3:
        top_level = max(s.level for s in members)
        doublets = [s for s in ordered if _is_doublet(s)]
        for index, d1 in enumerate(doublets):
            for d2 in doublets[index + 1:]:
                offer(RuleTag.PAIR_TO_DOUBLE, _pair_to_double(d1, d2), (d1, d2),
                      (doublet(1, 2), doublet(1, 3)))
        level_two = [s for s in ordered if s.level == 2]
        for d in doublets:
            for s in level_two:
                if s.signature == (3, 2):
                    offer(RuleTag.DOUBLE_FROM_TRIPLE, _double_from_triple(d, s), (d, s),
                          (doublet(1, 2), triple_doublet()))
                elif s.signature == (2, 2):
                    offer(RuleTag.TRIPLE_FROM_DOUBLE, _triple_from_double(d, s), (d, s),
                          (doublet(1, 2), double_double(3)))

        present_tops = [l for l in range(2, top_level + 1) if top_structure(l) in members]
        if present_tops and present_tops[-1] + 1 <= top_level:
            l0 = present_tops[-1]
            offer(RuleTag.LEVEL3_TRIPLE, top_structure(l0 + 1), (top_structure(l0),))

        for e in ordered:
            if e.level >= 3 and _is_top(e):
                for g in ordered:
                    if g.level == e.level - 1 and _is_twos(g):
                        offer(RuleTag.LEVEL3_RESIDUAL, _level3_residual(e, g), (e, g))

    return tuple(found)


def extensions(eta: Enrichment) -> List[RuleApplication]:
    """Every single-rule addition available on eta."""
    return list(_extensions_of(eta.n, eta.as_set))


def validate_application(application: RuleApplication, eta: Enrichment) -> bool:
    """Whether the application's precondition holds on eta."""
    if not all(w in eta for w in application.witnesses) or application.added in eta:
        return False
    if application.rule in (RuleTag.UNIVERSAL_LEVEL_ONE, RuleTag.UNIVERSAL_LEVEL_TWO):
        step = universal_step(eta, application.added)
        return step is not None and step.rule == application.rule
    return any(
        candidate.rule == application.rule
        and candidate.added == application.added
        and candidate.witnesses == application.witnesses
        for candidate in _extensions_of(eta.n, eta.as_set)
    )


def universal_step(eta: Enrichment, sigma: Structure) -> Optional[RuleApplication]:
    """Universal-family addition: a point inside a present level-one structure, or a doublet inside a present level-two one."""
    if sigma in eta:
        return None
    if sigma.signature == POINTS:
        for theta in eta.structures:
            if theta.level == 1 and theta != sigma and incidence(sigma, [theta]):
                return RuleApplication(RuleTag.UNIVERSAL_LEVEL_ONE, sigma, (theta,))
    if _is_doublet(sigma):
        for theta in eta.structures:
            if theta.level == 2 and incidence(sigma, [theta]):
                return RuleApplication(RuleTag.UNIVERSAL_LEVEL_TWO, sigma, (theta,))
    return None


def saturate(eta: Enrichment,
             rng: Optional[np.random.Generator] = None,
             settings: WorkbenchSettings = DEFAULT_SETTINGS) -> Tuple[Enrichment, Tuple[RuleApplication, ...]]:
    """Least fixpoint of the identifiability rules.

    Args:
        eta: Starting enrichment.
        rng: When given, the next application is drawn at random instead of taking the first.
        settings: Supplies the level cap.

    Returns:
        (closure, trace) where closure extends eta in application order.
    """
    if eta.level > settings.max_level:
        raise LevelCapExceededError(eta.level, settings.max_level)
    current = eta
    trace: List[RuleApplication] = []
    while True:
        available = _extensions_of(current.n, current.as_set)
        if not available:
            break
        if rng is None:
            application = available[0]
        else:
            application = available[int(rng.integers(len(available)))]
        logger.debug(f"Applying {application.describe()}")
        trace.append(application)
        current = current.extended([application.added])
    return current, tuple(trace)
