"""Canonical nested-set structures over {1..n}.

A structure is either a leaf (a nonempty subset of {1..n}) or a node (a set of at least two
distinct structures sharing one signature). Singleton levels are identified with their unique
element, so canonical signatures never contain the entry 1 except for the point signature (1,).
"""
import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from api.exceptions import EmptySetError, MixedSignatureError, OutOfRangeError, ValidationError

logger = logging.getLogger(__name__)

Signature = Tuple[int, ...]
POINTS: Signature = (1,)


def normalize_signature(levels: Iterable[int]) -> Signature:
    """Strip singleton levels; the all-ones signature becomes the point signature (1,)."""
    levels = tuple(levels)
    for p in levels:
        if not isinstance(p, int) or isinstance(p, bool) or p < 1:
            raise ValidationError(f"signature entries must be positive integers, got {levels}", field="signature")
    stripped = tuple(p for p in levels if p != 1)
    return stripped or POINTS


@dataclass(frozen=True)
class Structure:
    """Canonical structure. Build with Structure.leaf / Structure.node or mk_structure."""
    items: Tuple[Any, ...]
    signature: Signature = field(compare=False)

    @classmethod
    def leaf(cls, labels: Iterable[int]) -> "Structure":
        values = tuple(sorted(set(labels)))
        if not values:
            raise EmptySetError()
        return cls(values, (len(values),))

    @classmethod
    def node(cls, children: Iterable["Structure"]) -> "Structure":
        distinct = sorted(set(children), key=lambda s: s.sort_key)
        if not distinct:
            raise EmptySetError()
        if len(distinct) == 1:
            return distinct[0]
        signatures = {child.signature for child in distinct}
        if len(signatures) > 1:
            raise MixedSignatureError(sorted(signatures))
        (child_signature,) = signatures
        if child_signature == POINTS:
            # a set of points is a plain subset
            return cls.leaf(label for child in distinct for label in child.items)
        return cls(tuple(distinct), (len(distinct),) + child_signature)

    @property
    def is_leaf(self) -> bool:
        return len(self.signature) == 1

    @property
    def level(self) -> int:
        return len(self.signature)

    @property
    def children(self) -> Tuple["Structure", ...]:
        if self.is_leaf:
            return ()
        return self.items

    @cached_property
    def sort_key(self) -> tuple:
        if self.is_leaf:
            return (1, self.signature, self.items)
        return (self.level, self.signature, tuple(child.sort_key for child in self.items))

    @cached_property
    def carrier(self) -> frozenset:
        if self.is_leaf:
            return frozenset(self.items)
        return frozenset().union(*(child.carrier for child in self.items))

    def points(self) -> Tuple["Structure", ...]:
        """The leaf's labels as point structures."""
        return tuple(Structure.leaf((label,)) for label in self.items)

    def relabel(self, mapping: Union[Mapping[int, int], Callable[[int], int]]) -> "Structure":
        image = mapping if callable(mapping) else mapping.__getitem__
        if self.is_leaf:
            return Structure.leaf(image(label) for label in self.items)
        return Structure.node(child.relabel(image) for child in self.items)

    def to_literal(self) -> list:
        if self.is_leaf:
            return list(self.items)
        return [child.to_literal() for child in self.items]

    def to_text(self) -> str:
        return json.dumps(self.to_literal(), separators=(",", ":"))

    @cached_property
    def token(self) -> Optional[str]:
        """Compact notation token: '12' for leaves, '^k' / '^123' for the level-two structures over {1,2,3}."""
        if self.is_leaf:
            if all(label <= 9 for label in self.items):
                return "".join(str(label) for label in self.items)
            return None
        if self.level != 2 or self.carrier != frozenset({1, 2, 3}):
            return None
        if self.signature == (3, 2):
            return "^123"
        if self.signature == (2, 2):
            (common,) = set(self.items[0].items) & set(self.items[1].items)
            return f"^{common}"
        return None

    def describe(self) -> str:
        token = self.token
        if token is None:
            return self.to_text()
        return f"σ{token}" if token.startswith("^") else f"σ_{token}"

    def __repr__(self) -> str:
        return self.describe()


def structure_order(structures: Iterable[Structure]) -> List[Structure]:
    """Sort structures in the canonical total order."""
    return sorted(structures, key=lambda s: s.sort_key)


def _parse_literal(literal: Any, n: int) -> Structure:
    if isinstance(literal, Structure):
        return literal
    if isinstance(literal, bool) or not isinstance(literal, (list, tuple, set, frozenset)):
        raise ValidationError(f"expected a nested set, got {literal!r}", field="structure")
    elements = list(literal)
    if not elements:
        raise EmptySetError()
    integer_flags = [isinstance(e, int) and not isinstance(e, bool) for e in elements]
    if all(integer_flags):
        for value in elements:
            if value < 1 or value > n:
                raise OutOfRangeError(value, n)
        return Structure.leaf(elements)
    if any(integer_flags):
        raise ValidationError(f"ragged nest {literal!r} mixes labels and sets", field="structure")
    return Structure.node(_parse_literal(e, n) for e in elements)


def mk_structure(literal: Any, n: int) -> Structure:
    """Build the canonical structure of a nested integer literal.

    Args:
        literal: Nested lists/sets of integers in 1..n.
        n: Ground-set size.

    Returns:
        The canonical Structure.
    """
    if n < 1:
        raise ValidationError("ground-set size must be positive", field="n")
    structure = _parse_literal(literal, n)
    if max(structure.carrier) > n:
        raise OutOfRangeError(max(structure.carrier), n)
    return structure


def carrier(s: Structure) -> frozenset:
    return s.carrier


def enumerate_structures(n: int, max_level: int) -> List[Structure]:
    """All canonical structures over {1..n} of level at most max_level, in canonical order."""
    if n < 1:
        raise ValidationError("ground-set size must be positive", field="n")
    if max_level < 1:
        raise ValidationError("max_level must be positive", field="max_level")

    ground = range(1, n + 1)
    frontier = [Structure.leaf(c) for k in range(1, n + 1) for c in combinations(ground, k)]
    found = list(frontier)
    for level in range(2, max_level + 1):
        classes: Dict[Signature, List[Structure]] = {}
        for s in frontier:
            if s.signature != POINTS:
                classes.setdefault(s.signature, []).append(s)
        frontier = []
        for signature in sorted(classes):
            members = structure_order(classes[signature])
            for size in range(2, len(members) + 1):
                frontier.extend(Structure.node(combo) for combo in combinations(members, size))
        if not frontier:
            break
        found.extend(frontier)
    logger.debug(f"Enumerated {len(found)} structures for n={n}, max_level={max_level}")
    return structure_order(found)


def full_structure(n: int) -> Structure:
    return Structure.leaf(range(1, n + 1))


def parse_token(token: str, n: int) -> Structure:
    """Inverse of Structure.token: '12' -> σ_12, '^1' -> σ^1, '^123' -> σ^123."""
    text = token.strip()
    if not text:
        raise ValidationError("empty structure token", field="token")
    if text.startswith("^"):
        digits = text[1:]
        if n != 3 or not digits.isdigit():
            raise ValidationError(f"superscript token '{text}' is only defined over {{1,2,3}}", field="token")
        if digits == "123":
            return Structure.node(Structure.leaf(pair) for pair in combinations((1, 2, 3), 2))
        if len(digits) == 1 and digits in "123":
            k = int(digits)
            return Structure.node(Structure.leaf((i, k)) for i in (1, 2, 3) if i != k)
        raise ValidationError(f"unknown superscript token '{text}'", field="token")
    if not text.isdigit():
        raise ValidationError(f"unknown structure token '{text}'", field="token")
    return mk_structure([int(ch) for ch in text], n)
