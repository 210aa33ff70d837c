"""Incidence predicate on tuples of structures.

A structure σ is incident to targets σ_1..σ_s when, for some common inner signature p, every
element of σ read inside Σ_p is covered by the elements of the targets read inside Σ_p.
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from api.exceptions import ValidationError
from services.enrichments import Enrichment
from services.structures import POINTS, Signature, Structure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SignatureSplit:
    """σ ∈ Σ_{q,p} and σ_i ∈ Σ_{n_i,p}; p = () means the targets are read as sets of points."""
    r: int
    q: Tuple[int, ...]
    p: Tuple[int, ...]
    target_sizes: Tuple[int, ...]

    @property
    def base(self) -> Signature:
        return self.p or POINTS

    def to_json(self) -> Dict[str, object]:
        return {"r": self.r, "q": list(self.q), "p": list(self.p), "n": list(self.target_sizes)}


@dataclass(frozen=True)
class IncidenceRelation:
    sigma: Structure
    targets: Tuple[Structure, ...]
    split: SignatureSplit

    def describe(self) -> str:
        return f"{self.sigma.describe()} ⊂ {' ∪ '.join(t.describe() for t in self.targets)}"


def elements_at(s: Structure, base: Signature) -> Optional[FrozenSet[Structure]]:
    """The set [s] of elements of Σ_base that s collects, or None when s is not in any Σ_{k,base}."""
    if base == POINTS:
        return frozenset(s.points()) if s.is_leaf else None
    if s.signature == base:
        return frozenset((s,))
    if not s.is_leaf and s.items[0].signature == base:
        return frozenset(s.items)
    return None


def _descendants(s: Structure, depth: int) -> List[Structure]:
    layer = [s]
    for _ in range(depth):
        layer = [child for parent in layer for child in parent.children]
    return layer


def _candidate_splits(sigma: Structure) -> List[Tuple[Signature, Tuple[int, ...]]]:
    signature = sigma.signature
    candidates = [(POINTS, signature)]
    for k in range(1, len(signature)):
        candidates.append((signature[k:], signature[:k]))
    if signature != POINTS:
        candidates.append((signature, (1,)))
    return candidates


def signature_splits(sigma: Structure, targets: Sequence[Structure]) -> List[SignatureSplit]:
    """Every split compatible with the canonical signatures of σ and the targets."""
    splits = []
    for base, q in _candidate_splits(sigma):
        sizes = []
        for target in targets:
            members = elements_at(target, base)
            if members is None:
                break
            sizes.append(len(members))
        else:
            p = () if base == POINTS else base
            splits.append(SignatureSplit(len(q), q, p, tuple(sizes)))
    return splits


def _holds(sigma: Structure, targets: Sequence[Structure], split: SignatureSplit) -> bool:
    covered = frozenset().union(*(elements_at(t, split.base) for t in targets))
    for part in _descendants(sigma, split.r - 1):
        members = elements_at(part, split.base)
        if members is None or not members <= covered:
            return False
    return True


def incidence_witness(sigma: Structure, targets: Sequence[Structure]) -> Optional[SignatureSplit]:
    """First split under which σ is incident to the targets, or None."""
    if not targets:
        raise ValidationError("incidence needs at least one target", field="targets")
    for split in signature_splits(sigma, targets):
        if _holds(sigma, targets, split):
            return split
    return None


def incidence(sigma: Structure, targets: Sequence[Structure]) -> bool:
    return incidence_witness(sigma, targets) is not None


def incidence_closure(eta: Enrichment, max_arity: int = 4) -> List[IncidenceRelation]:
    """All true incidences (σ, targets) among members of eta with 1 + len(targets) ≤ max_arity."""
    if max_arity < 1:
        raise ValidationError("max_arity must be at least 1", field="max_arity")
    relations = []
    for sigma in eta.structures:
        others = [s for s in eta.structures if s != sigma]
        for size in range(1, min(max_arity - 1, len(others)) + 1):
            for targets in combinations(others, size):
                split = incidence_witness(sigma, targets)
                if split is not None:
                    relations.append(IncidenceRelation(sigma, targets, split))
    logger.debug(f"Found {len(relations)} incidences in {eta.describe()} (arity ≤ {max_arity})")
    return relations
