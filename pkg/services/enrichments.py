"""Enrichments: sequences of structures containing the full structure, plus the R-notation."""
import json
import logging
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from api.exceptions import MissingFullStructureError, NotationError, ValidationError
from services.structures import (
    Structure,
    enumerate_structures,
    full_structure,
    mk_structure,
    parse_token,
    structure_order,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Enrichment:
    """Ordered sequence of distinct structures over {1..n}."""
    n: int
    structures: Tuple[Structure, ...]

    @cached_property
    def as_set(self) -> frozenset:
        return frozenset(self.structures)

    @property
    def level(self) -> int:
        return max(s.level for s in self.structures)

    def __len__(self) -> int:
        return len(self.structures)

    def __iter__(self):
        return iter(self.structures)

    def __contains__(self, s: Structure) -> bool:
        return s in self.as_set

    def issubset(self, other: "Enrichment") -> bool:
        return self.n == other.n and self.as_set <= other.as_set

    def extended(self, additions: Iterable[Structure]) -> "Enrichment":
        """Append structures not already present, keeping sequence order."""
        merged = list(self.structures)
        seen = set(merged)
        for s in additions:
            if s not in seen:
                merged.append(s)
                seen.add(s)
        return Enrichment(self.n, tuple(merged))

    def restricted(self, keep) -> "Enrichment":
        """Sub-sequence of members satisfying keep(s)."""
        return Enrichment(self.n, tuple(s for s in self.structures if keep(s)))

    def canonical(self) -> "Enrichment":
        """Same set, members in canonical order."""
        return Enrichment(self.n, tuple(structure_order(self.structures)))

    def by_level(self, level: int) -> List[Structure]:
        return [s for s in self.structures if s.level == level]

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.n, "structures": [s.to_literal() for s in self.structures]}

    @classmethod
    def from_json(cls, data: Union[str, Dict[str, Any]]) -> "Enrichment":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise ValidationError(f"invalid JSON: {e}", field="enrichment")
        if not isinstance(data, dict) or "n" not in data or "structures" not in data:
            raise ValidationError("expected {\"n\": int, \"structures\": [...]}", field="enrichment")
        return mk_enrichment(data["structures"], data["n"])

    def canonical_text(self) -> str:
        """Compact JSON with members sorted; the encoding used for iso keys."""
        return json.dumps(self.canonical().to_json(), separators=(",", ":"))

    def describe(self) -> str:
        return notation(self) or self.canonical_text()

    def __repr__(self) -> str:
        return f"Enrichment({self.describe()})"


def mk_enrichment(items: Iterable[Any], n: int) -> Enrichment:
    """Build an enrichment from structures or nested literals.

    Args:
        items: Structures or nested integer literals.
        n: Ground-set size.

    Returns:
        Enrichment with duplicates dropped (first occurrence kept).
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError("ground-set size must be a positive integer", field="n")
    members: List[Structure] = []
    seen = set()
    for item in items:
        s = item if isinstance(item, Structure) else mk_structure(item, n)
        if max(s.carrier) > n:
            raise ValidationError(f"{s.describe()} does not live over 1..{n}", field="structures")
        if s in seen:
            logger.debug(f"Dropping duplicate structure {s.describe()}")
            continue
        seen.add(s)
        members.append(s)
    if full_structure(n) not in seen:
        raise MissingFullStructureError(n)
    return Enrichment(n, tuple(members))


def set_equal(a: Enrichment, b: Enrichment) -> bool:
    return a.n == b.n and a.as_set == b.as_set


def level(eta: Enrichment) -> int:
    return eta.level


@dataclass(frozen=True)
class ModelName:
    """R-notation: superscript tokens (level two), subscript tokens (level one), or the token max."""
    subscripts: Tuple[str, ...] = ()
    superscripts: Tuple[str, ...] = ()
    is_max: bool = False

    @property
    def text(self) -> str:
        if self.is_max:
            return "R_max"
        sup = f"^{_group(self.superscripts)}" if self.superscripts else ""
        return f"R{sup}_{_group(self.subscripts)}"

    def __str__(self) -> str:
        return self.text


def _group(tokens: Tuple[str, ...]) -> str:
    if len(tokens) == 1:
        return tokens[0]
    return "{" + ",".join(tokens) + "}"


_PREFIX = re.compile(r"^(R|η|eta)")
_PART = re.compile(r"([_^])(\{[^}]*\}|[0-9]+)")


def parse_model_name(text: str) -> ModelName:
    raw = text.strip()
    body = _PREFIX.sub("", raw, count=1)
    if body in ("max", "_max"):
        return ModelName(is_max=True)
    subscripts: Tuple[str, ...] = ()
    superscripts: Tuple[str, ...] = ()
    position = 0
    for match in _PART.finditer(body):
        if match.start() != position:
            raise NotationError(raw, f"unexpected text at position {position}")
        position = match.end()
        group = match.group(2).strip("{}")
        tokens = tuple(t.strip() for t in group.split(",") if t.strip())
        if not tokens:
            raise NotationError(raw, "empty index list")
        if match.group(1) == "_":
            subscripts += tokens
        else:
            superscripts += tokens
    if position != len(body) or not subscripts:
        raise NotationError(raw, "expected R^{...}_{...} with a nonempty subscript")
    return ModelName(subscripts, superscripts)


def enrichment_from_name(name: Union[str, ModelName], n: int = 3) -> Enrichment:
    """Enrichment named by an R-notation string such as 'R^{3,123}_{3,12,123}' or 'max'."""
    model = parse_model_name(name) if isinstance(name, str) else name
    if model.is_max:
        if n != 3:
            raise NotationError(model.text, "R_max is only defined for n = 3")
        return Enrichment(3, tuple(enumerate_structures(3, 2)))
    try:
        members = [parse_token(t, n) for t in model.subscripts]
        members += [parse_token(f"^{t}", n) for t in model.superscripts]
    except ValidationError as e:
        raise NotationError(model.text, e.message)
    return mk_enrichment(members, n)


def notation(eta: Enrichment) -> Optional[str]:
    """R-notation of any enrichment whose members all carry tokens, else None."""
    if eta.n == 3 and len(eta.as_set) == 11 and eta.level == 2:
        return "R_max"
    tokens = [(s, s.token) for s in structure_order(eta.structures)]
    if any(token is None for _, token in tokens):
        return None
    subscripts = tuple(token for s, token in tokens if not token.startswith("^"))
    superscripts = tuple(token[1:] for s, token in tokens if token.startswith("^"))
    return ModelName(subscripts, superscripts).text


MODEL_NOTATIONS = {
    2: ["R_12", "R_{1,12}"],
    3: [
        "R_123",
        "R_{1,123}",
        "R_{1,2,3,12,123}",
        "R_{3,12,123}",
        "R^1_123",
        "R^1_{1,2,3,12,13,123}",
        "R^123_123",
        "R^123_{1,123}",
        "R^{3,123}_{3,12,123}",
        "R^{3,123}_{1,2,3,12,123}",
        "R_max",
    ],
}

LE_BARZ_NOTATION = "R_{1,2,3,12,13,23,123}"


@lru_cache(maxsize=None)
def model_enrichments(n: int) -> Tuple[Tuple[ModelName, Enrichment], ...]:
    """The named model enrichments for n in {2, 3}, in the classification order."""
    if n not in MODEL_NOTATIONS:
        raise ValidationError("models are only known for n in {2, 3}", field="n")
    return tuple((parse_model_name(text), enrichment_from_name(text, n)) for text in MODEL_NOTATIONS[n])


def model_name(eta: Enrichment) -> Optional[ModelName]:
    """The model's name when eta equals a model as a set, else None."""
    if eta.n not in MODEL_NOTATIONS:
        return None
    for name, model in model_enrichments(eta.n):
        if set_equal(model, eta):
            return name
    return None


def parse_enrichment(text: str, n: int = 3) -> Enrichment:
    """Accept JSON ({"n":..,"structures":..} or a bare list of structures) or R-notation."""
    stripped = text.strip()
    if stripped.startswith("{"):
        return Enrichment.from_json(stripped)
    if stripped.startswith("["):
        try:
            literal = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise ValidationError(f"invalid JSON: {e}", field="enrichment")
        return mk_enrichment(literal, n)
    return enrichment_from_name(stripped, n)
