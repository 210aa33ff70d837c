"""Symmetric-group action on structures and enrichments."""
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from api.exceptions import NotASubgroupOfStabilizerError, ValidationError
from services.enrichments import Enrichment, set_equal
from services.structures import Structure

logger = logging.getLogger(__name__)

ORDER_LABELS = {1: "S_1", 2: "S_2", 3: "C_3", 6: "S_3"}


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..n} stored as its image tuple: images[i-1] = g(i)."""
    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValidationError(f"{list(self.images)} is not a permutation", field="permutation")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycle(cls, n: int, *cycle: int) -> "Permutation":
        images = list(range(1, n + 1))
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            images[a - 1] = b
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """self ∘ other."""
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> "Permutation":
        images = [0] * self.n
        for i, image in enumerate(self.images, start=1):
            images[image - 1] = i
        return Permutation(tuple(images))

    def cycles(self) -> str:
        seen = set()
        parts = []
        for start in range(1, self.n + 1):
            if start in seen or self(start) == start:
                continue
            cycle = [start]
            seen.add(start)
            current = self(start)
            while current != start:
                cycle.append(current)
                seen.add(current)
                current = self(current)
            parts.append("(" + " ".join(str(i) for i in cycle) + ")")
        return "".join(parts) or "id"

    def to_json(self) -> List[int]:
        return list(self.images)

    def __repr__(self) -> str:
        return self.cycles()


@dataclass(frozen=True)
class GroupDescriptor:
    """Explicit list of permutations with an isomorphism label."""
    elements: Tuple[Permutation, ...]
    label: str

    @property
    def order(self) -> int:
        return len(self.elements)

    def to_json(self) -> Dict[str, object]:
        return {"elements": [g.to_json() for g in self.elements], "label": self.label}


def label_for_order(order: int) -> str:
    return ORDER_LABELS.get(order, f"order-{order}")


def describe_group(elements: Iterable[Permutation]) -> GroupDescriptor:
    members = tuple(sorted(set(elements), key=lambda g: g.images))
    return GroupDescriptor(members, label_for_order(len(members)))


@lru_cache(maxsize=None)
def all_permutations(n: int) -> Tuple[Permutation, ...]:
    """S_n in lexicographic order of image tuples; the identity comes first."""
    return tuple(Permutation(p) for p in permutations(range(1, n + 1)))


def act(g: Permutation, target: Union[Structure, Enrichment]):
    """Relabel a structure, or every member of an enrichment keeping positions."""
    if isinstance(target, Structure):
        return target.relabel(g)
    if g.n != target.n:
        raise ValidationError(f"permutation of {g.n} letters cannot act on n={target.n}", field="permutation")
    return Enrichment(target.n, tuple(s.relabel(g) for s in target.structures))


def orbit(eta: Enrichment) -> List[Enrichment]:
    """Distinct (as sets) images of eta under S_n, canonically ordered."""
    images: Dict[frozenset, Enrichment] = {}
    for g in all_permutations(eta.n):
        image = act(g, eta)
        images.setdefault(image.as_set, image.canonical())
    return sorted(images.values(), key=lambda e: e.canonical_text())


def stabilizer_G(eta: Enrichment) -> GroupDescriptor:
    return describe_group(g for g in all_permutations(eta.n) if set_equal(act(g, eta), eta))


def pointwise_stabilizer_H(eta: Enrichment) -> GroupDescriptor:
    return describe_group(
        g for g in all_permutations(eta.n) if all(act(g, s) == s for s in eta.structures)
    )


def is_normal_subgroup(h: GroupDescriptor, g: GroupDescriptor) -> bool:
    members = set(h.elements)
    return all(x.compose(y).compose(x.inverse()) in members for x in g.elements for y in h.elements)


def acting_group(eta: Enrichment) -> GroupDescriptor:
    """G_η/H_η as lexicographically least coset representatives."""
    big = stabilizer_G(eta)
    small = pointwise_stabilizer_H(eta)
    cosets = {}
    for g in big.elements:
        key = frozenset(g.compose(h) for h in small.elements)
        cosets.setdefault(key, g)
    representatives = tuple(sorted(cosets.values(), key=lambda g: g.images))
    return GroupDescriptor(representatives, label_for_order(len(representatives)))


def is_closed(elements: Sequence[Permutation]) -> bool:
    members = set(elements)
    return all(a.compose(b) in members for a in members for b in members)


def invariant_substructures(eta: Enrichment,
                            group: Union[GroupDescriptor, Iterable[Permutation]]) -> Enrichment:
    """Sub-sequence of members fixed by every element of a subgroup of G_η.

    Args:
        eta: Enrichment.
        group: Subgroup of the stabilizer G_η.

    Returns:
        Enrichment of the fixed members (always contains the full structure).
    """
    elements = tuple(group.elements if isinstance(group, GroupDescriptor) else group)
    if not elements:
        raise NotASubgroupOfStabilizerError("empty group")
    stabilizer = set(stabilizer_G(eta).elements)
    outside = [g for g in elements if g not in stabilizer]
    if outside:
        raise NotASubgroupOfStabilizerError(
            f"{', '.join(g.cycles() for g in outside)} not in the stabilizer of {eta.describe()}"
        )
    if not is_closed(elements):
        raise NotASubgroupOfStabilizerError("given permutations are not closed under composition")
    return eta.restricted(lambda s: all(act(g, s) == s for g in elements))


def conjugating_permutation(n: int, source: Sequence[Structure],
                             target: Sequence[Structure]) -> Optional[Permutation]:
    """First g in S_n with act(g, source[i]) == target[i] for every i."""
    for g in all_permutations(n):
        if all(act(g, s) == t for s, t in zip(source, target)):
            return g
    return None
