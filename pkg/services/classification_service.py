"""Classification of enrichments against the model list, plus the derived tables."""
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import pandas as pd

from api.exceptions import (
    ClassificationIncompleteError,
    LevelCapExceededError,
    ValidationError,
    VerificationMismatchError,
)
from services.detectors import Detection, detect_nonadmissible
from services.enrichments import (
    Enrichment,
    ModelName,
    enrichment_from_name,
    model_enrichments,
    parse_model_name,
    set_equal,
)
from services.rules import RuleApplication, extensions, saturate, top_structure, universal_step
from services.settings import DEFAULT_SETTINGS, WorkbenchSettings
from services.structures import POINTS, Structure, enumerate_structures, full_structure, parse_token
from services.symmetry_service import (
    Permutation,
    act,
    acting_group,
    all_permutations,
    describe_group,
    invariant_substructures,
    stabilizer_G,
)

logger = logging.getLogger(__name__)


class ClassificationStatus(str, Enum):
    ADMISSIBLE = "admissible"
    NON_ADMISSIBLE = "non_admissible"


@dataclass(frozen=True)
class ClassificationReport:
    input: Enrichment
    status: ClassificationStatus
    model: Optional[ModelName] = None
    permutation: Optional[Permutation] = None
    closure: Optional[Enrichment] = None
    trace: Tuple[RuleApplication, ...] = ()
    detection: Optional[Detection] = None
    reduced: bool = False

    @property
    def is_admissible(self) -> bool:
        return self.status == ClassificationStatus.ADMISSIBLE


@dataclass
class ClassificationSummary:
    n: int
    max_level: int
    reports: List[ClassificationReport]
    classes: int
    incomplete: int
    by_model: Dict[str, int]
    by_detector: Dict[str, int]

    @property
    def total(self) -> int:
        return len(self.reports) + self.incomplete

    @property
    def admissible(self) -> int:
        return sum(1 for r in self.reports if r.is_admissible)

    @property
    def non_admissible(self) -> int:
        return len(self.reports) - self.admissible

    def to_frame(self) -> pd.DataFrame:
        rows = [{"verdict": "admissible", "name": name, "count": count} for name, count in self.by_model.items()]
        rows += [{"verdict": "non_admissible", "name": tag, "count": count} for tag, count in self.by_detector.items()]
        return pd.DataFrame(rows, columns=["verdict", "name", "count"])


@dataclass(frozen=True)
class QuotientRow:
    model: str
    group: str
    quotient: str
    group_verified: bool
    invariant_status: str
    dropped: Tuple[Structure, ...] = ()
    partial: bool = False


@dataclass(frozen=True)
class DiagramGraph:
    nodes: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]
    covering_edges: Tuple[Tuple[str, str], ...]

    def has_edge(self, source: str, target: str) -> bool:
        return (source, target) in self.edges

    def to_dot(self) -> str:
        lines = ["digraph forgetful {"]
        for node in self.nodes:
            lines.append(f'  "{node}";')
        for source, target in self.covering_edges:
            lines.append(f'  "{source}" -> "{target}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


# (model, acting group, quotient) in classification order
QUOTIENT_TABLE = (
    ("R_123", "S_1", "R_123"),
    ("R_{1,123}", "S_1", "R_{1,123}"),
    ("R_{1,2,3,12,123}", "S_2", "R_{3,12,123}"),
    ("R_{3,12,123}", "S_1", "R_{3,12,123}"),
    ("R^1_123", "S_1", "R^1_123"),
    ("R^1_{1,2,3,12,13,123}", "S_2", "R^1_123"),
    ("R^123_123", "S_1", "R^123_123"),
    ("R^123_{1,123}", "S_1", "R^123_{1,123}"),
    ("R^{3,123}_{3,12,123}", "S_1", "R^{3,123}_{3,12,123}"),
    ("R^{3,123}_{1,2,3,12,123}", "S_2", "R^{3,123}_{3,12,123}"),
    ("R_max", "S_3", "R^123_123"),
)

PARTIAL_QUOTIENT = ("R_max", "S_2", "R^{3,123}_{3,12,123}", ((2, 1, 3),))

# enrichments whose admissibility comes from an explicit chart computation
BASE_ADMISSIBLE = ("R_123", "R_{12,123}", "R^1_123", "R^123_123")

# model -> (admissible base, structures added one at a time)
DOMINATION_CERTIFICATES = {
    "R_123": ("R_123", ()),
    "R_{1,123}": ("R_123", ("1",)),
    "R_{1,2,3,12,123}": ("R_{12,123}", ("1", "2", "3")),
    "R_{3,12,123}": ("R_{12,123}", ("3",)),
    "R^1_123": ("R^1_123", ()),
    "R^1_{1,2,3,12,13,123}": ("R^1_123", ("12", "13", "2", "3", "1")),
    "R^123_123": ("R^123_123", ()),
    "R^123_{1,123}": ("R^123_123", ("1",)),
    "R^{3,123}_{3,12,123}": ("R^123_123", ("12", "3", "^3")),
    "R^{3,123}_{1,2,3,12,123}": ("R^{3,123}_{3,12,123}", ("1", "2")),
    "R_max": ("R^123_123", ("12", "^3", "13", "23", "1", "2", "3", "^1", "^2")),
}


def iter_enrichments(n: int, max_level: int = 2) -> Iterator[Enrichment]:
    """Every enrichment over {1..n} of level ≤ max_level (members in canonical order)."""
    full = full_structure(n)
    optional = [s for s in enumerate_structures(n, max_level) if s != full]
    for mask in range(1 << len(optional)):
        chosen = [s for bit, s in enumerate(optional) if mask >> bit & 1]
        yield Enrichment(n, tuple(sorted(chosen + [full], key=lambda s: s.sort_key)))


class ClassificationService:
    """Runs the rule engine against the model list."""

    def __init__(self, settings: WorkbenchSettings = DEFAULT_SETTINGS):
        self.settings = settings
        self._model_cache: Dict[int, Tuple[Tuple[ModelName, Enrichment, Enrichment, bytes], ...]] = {}

    def models(self, n: int) -> Tuple[Tuple[ModelName, Enrichment, Enrichment, bytes], ...]:
        """(name, model, saturated model, iso key) for each model."""
        if n not in self._model_cache:
            rows = []
            for name, model in model_enrichments(n):
                closure, _ = saturate(model, settings=self.settings)
                rows.append((name, model, closure, self._key_of_closure(closure)))
            self._model_cache[n] = tuple(rows)
        return self._model_cache[n]

    @staticmethod
    def _key_of_closure(closure: Enrichment) -> bytes:
        return min(act(g, closure).canonical_text() for g in all_permutations(closure.n)).encode()

    def iso_key(self, eta: Enrichment) -> bytes:
        """Lexicographically least canonical encoding of a relabelled saturation."""
        closure, _ = saturate(eta, settings=self.settings)
        return self._key_of_closure(closure)

    def _match(self, closure: Enrichment) -> Optional[Tuple[ModelName, Permutation]]:
        if closure.n not in (2, 3):
            return None
        key = self._key_of_closure(closure)
        for name, _, model_closure, model_key in self.models(closure.n):
            if key != model_key:
                continue
            for g in all_permutations(closure.n):
                if set_equal(act(g, closure), model_closure):
                    return name, g
        return None

    def _admissible(self, eta: Enrichment, name: ModelName, g: Permutation, reduced: bool) -> ClassificationReport:
        closure, trace = saturate(act(g, eta), settings=self.settings)
        return ClassificationReport(eta, ClassificationStatus.ADMISSIBLE, model=name, permutation=g,
                                    closure=closure, trace=trace, reduced=reduced)

    def classify(self, eta: Enrichment) -> ClassificationReport:
        """Admissible with the matching model, or non-admissible with the detector that fired.

        Args:
            eta: Enrichment over {1,2} or {1,2,3}.

        Returns:
            ClassificationReport.
        """
        if eta.n not in (2, 3):
            raise ValidationError("classification is only available for n in {2, 3}", field="n")
        if eta.level > self.settings.max_level:
            raise LevelCapExceededError(eta.level, self.settings.max_level)

        detection = detect_nonadmissible(eta)
        if detection is not None:
            return ClassificationReport(eta, ClassificationStatus.NON_ADMISSIBLE, detection=detection)

        closure, _ = saturate(eta, settings=self.settings)
        if closure.level <= 2:
            match = self._match(closure)
            if match is not None:
                return self._admissible(eta, *match, reduced=False)
            raise ClassificationIncompleteError(eta.describe())

        detection = detect_nonadmissible(closure)
        if detection is not None:
            return ClassificationReport(eta, ClassificationStatus.NON_ADMISSIBLE, detection=detection)
        lower = self._peel(closure)
        if lower is not None:
            lower_closure, _ = saturate(lower, settings=self.settings)
            match = self._match(lower_closure)
            if match is not None:
                logger.warning(f"{eta.describe()} classified through level reduction to {match[0]}")
                return self._admissible(eta, *match, reduced=True)
        raise ClassificationIncompleteError(eta.describe())

    @staticmethod
    def _peel(closure: Enrichment) -> Optional[Enrichment]:
        """Strip levels ≥ 3 whose members are recoverable from lower ones, or None."""
        current = set(closure.structures)
        for lvl in range(closure.level, 2, -1):
            top = top_structure(lvl)
            layer = [s for s in current if s.level == lvl]
            for s in layer:
                if s == top:
                    if top_structure(lvl - 1) not in current:
                        return None
                elif all(p == 2 for p in s.signature) and top in current:
                    missing = [g for g in top.items if g not in s.items]
                    if len(missing) != 1 or missing[0] not in current:
                        return None
                else:
                    return None
            current.difference_update(layer)
        return closure.restricted(lambda s: s in current)

    def classify_all(self, n: int, max_level: int = 2) -> ClassificationSummary:
        """Classify every enrichment over {1..n} of level ≤ max_level."""
        if n not in (2, 3):
            raise ValidationError("classification is only available for n in {2, 3}", field="n")
        reports = []
        incomplete = 0
        for eta in iter_enrichments(n, max_level):
            try:
                reports.append(self.classify(eta))
            except ClassificationIncompleteError as e:
                logger.warning(e.message)
                incomplete += 1

        by_model: Counter = Counter()
        by_detector: Counter = Counter()
        keys = set()
        for report in reports:
            if report.is_admissible:
                by_model[report.model.text] += 1
                keys.add(self._key_of_closure(report.closure))
            else:
                by_detector[report.detection.tag.value] += 1

        order = [name.text for name, *_ in self.models(n)]
        summary = ClassificationSummary(
            n=n,
            max_level=max_level,
            reports=reports,
            classes=len(keys),
            incomplete=incomplete,
            by_model={name: by_model[name] for name in order if by_model[name]},
            by_detector=dict(sorted(by_detector.items())),
        )
        logger.info(f"Classified {summary.total} enrichments for n={n}: {summary.classes} classes, "
                    f"{summary.non_admissible} non-admissible, {incomplete} incomplete")
        return summary

    def forgetful_diagram(self, names: Optional[Sequence[str]] = None) -> DiagramGraph:
        """Forgetful morphisms between models: a -> b when a relabelled b sits inside a's saturation."""
        rows = [(name.text, model, closure) for name, model, closure, _ in self.models(3)]
        if names is not None:
            wanted = {parse_model_name(text).text for text in names}
            rows = [row for row in rows if row[0] in wanted]

        edges = []
        for source, _, source_closure in rows:
            for target, target_model, _ in rows:
                if source == target:
                    continue
                if any(act(g, target_model).as_set <= source_closure.as_set for g in all_permutations(3)):
                    edges.append((source, target))

        edge_set = set(edges)
        covering = [
            (a, c) for a, c in edges
            if not any((a, b) in edge_set and (b, c) in edge_set for b, *_ in rows if b not in (a, c))
        ]
        return DiagramGraph(tuple(row[0] for row in rows), tuple(edges), tuple(covering))

    def _repair(self, fixed: Enrichment, target: Enrichment) -> Optional[Tuple[Structure, ...]]:
        if detect_nonadmissible(fixed) is None:
            return None
        points = [s for s in fixed.structures if s.signature == POINTS]
        for size in range(1, len(points) + 1):
            for dropped in combinations(points, size):
                candidate = fixed.restricted(lambda s: s not in dropped)
                if detect_nonadmissible(candidate) is None and set_equal(candidate, target):
                    return dropped
        return None

    def _quotient_row(self, name: str, label: str, quotient: str, group, partial: bool) -> QuotientRow:
        eta = enrichment_from_name(name)
        target = enrichment_from_name(quotient)
        if partial:
            group_verified = group.label == label and all(g in stabilizer_G(eta).elements for g in group.elements)
        else:
            group_verified = acting_group(eta).label == label
        if not group_verified:
            raise VerificationMismatchError(f"acting group of {name} is not {label}",
                                            {"model": name, "expected": label})

        fixed = invariant_substructures(eta, group)
        if set_equal(fixed, target):
            return QuotientRow(name, label, quotient, True, "verified", partial=partial)
        dropped = self._repair(fixed, target)
        if dropped is None:
            raise VerificationMismatchError(f"fixed structures of {name} do not give {quotient}",
                                            {"model": name, "fixed": fixed.canonical_text()})
        logger.warning(f"Quotient of {name} repaired by dropping {', '.join(s.describe() for s in dropped)}")
        return QuotientRow(name, label, quotient, True, "repaired", dropped=dropped, partial=partial)

    def quotient_table(self) -> List[QuotientRow]:
        """Quotients by the acting groups, each row re-derived from the enrichments."""
        rows = []
        for name, label, quotient in QUOTIENT_TABLE:
            rows.append(self._quotient_row(name, label, quotient, stabilizer_G(enrichment_from_name(name)), False))

        name, label, quotient, generators = PARTIAL_QUOTIENT
        subgroup = describe_group([Permutation.identity(3)] + [Permutation(images) for images in generators])
        rows.append(self._quotient_row(name, label, quotient, subgroup, True))
        return rows

    def replay_certificate(self, name: str) -> List[RuleApplication]:
        """Replay the domination chain of a model, validating every step."""
        model_text = parse_model_name(name).text
        if model_text not in DOMINATION_CERTIFICATES:
            raise ValidationError(f"no certificate stored for {name}", field="model")
        base_name, tokens = DOMINATION_CERTIFICATES[model_text]
        current = enrichment_from_name(base_name)
        steps = []
        for token in tokens:
            sigma = parse_token(token, 3)
            step = next((a for a in extensions(current) if a.added == sigma), None)
            if step is None:
                step = universal_step(current, sigma)
            if step is None:
                raise VerificationMismatchError(f"step +{sigma.describe()} of {model_text} has no valid rule",
                                                {"model": model_text, "state": current.canonical_text()})
            steps.append(step)
            current = current.extended([sigma])
        if not set_equal(current, enrichment_from_name(model_text)):
            raise VerificationMismatchError(f"certificate of {model_text} ends at {current.describe()}")
        return steps

    def certificates(self) -> Dict[str, int]:
        """Number of replayed steps per model."""
        return {name: len(self.replay_certificate(name)) for name in DOMINATION_CERTIFICATES}
