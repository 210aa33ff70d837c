"""Stratification index sets Conf(η), restriction along inclusions, and stratum preimages."""
import json
import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from api.exceptions import NotASubEnrichmentError, ValidationError
from services.enrichments import Enrichment
from services.structures import POINTS, Signature, Structure, full_structure, mk_structure

logger = logging.getLogger(__name__)


class ThreeShape(str, Enum):
    """Shape of the length-3 subscheme carried by a Σ_{3,2,…,2} member."""
    THREE = "3"
    TWO = "2"
    CURVILINEAR = "c"
    FAT = "g"


class TwoShape(str, Enum):
    """Shape of the length-2 subscheme carried by a Σ_{2,…,2} member."""
    TWO = "2"
    ONE = "1"


def e3_members(eta: Enrichment) -> List[Structure]:
    """Members of signature (3,2,…,2), σ_123 included."""
    return [s for s in eta.structures if s.signature[0] == 3 and all(p == 2 for p in s.signature[1:])]


def e2_members(eta: Enrichment) -> List[Structure]:
    """Members of signature (2,…,2)."""
    return [s for s in eta.structures if all(p == 2 for p in s.signature)]


def signature_classes(eta: Enrichment) -> Dict[Signature, Tuple[Structure, ...]]:
    classes: Dict[Signature, List[Structure]] = {}
    for s in eta.structures:
        classes.setdefault(s.signature, []).append(s)
    return {sig: tuple(sorted(members, key=lambda s: s.sort_key)) for sig, members in sorted(classes.items())}


def canonical_subset(members) -> Tuple[Structure, ...]:
    """Coincidence subsets of size below two impose nothing and become empty."""
    ordered = tuple(sorted(set(members), key=lambda s: s.sort_key))
    return ordered if len(ordered) >= 2 else ()


def subset_options(members: Sequence[Structure]) -> List[Tuple[Structure, ...]]:
    """The empty set followed by every subset of size ≥ 2, by size then position."""
    options: List[Tuple[Structure, ...]] = [()]
    for size in range(2, len(members) + 1):
        options.extend(tuple(c) for c in combinations(members, size))
    return options


def _signature_key(signature: Signature) -> str:
    return ",".join(str(p) for p in signature)


@dataclass(frozen=True)
class StratumConfig:
    """One index (f, g, P) of Conf(η); eta is kept in canonical order."""
    eta: Enrichment
    f: Tuple[Tuple[Structure, ThreeShape], ...]
    g: Tuple[Tuple[Structure, TwoShape], ...]
    P: Tuple[Tuple[Signature, Tuple[Structure, ...]], ...]

    @property
    def f_map(self) -> Dict[Structure, ThreeShape]:
        return dict(self.f)

    @property
    def g_map(self) -> Dict[Structure, TwoShape]:
        return dict(self.g)

    @property
    def P_map(self) -> Dict[Signature, Tuple[Structure, ...]]:
        return dict(self.P)

    def label(self) -> str:
        parts = [f"f[{s.token or s.to_text()}]={shape.value}" for s, shape in self.f]
        parts += [f"g[{s.token or s.to_text()}]={shape.value}" for s, shape in self.g]
        parts += [
            "P[" + _signature_key(sig) + "]={" + ",".join(s.token or s.to_text() for s in subset) + "}"
            for sig, subset in self.P if subset
        ]
        return " ".join(parts)

    def to_json(self) -> Dict[str, object]:
        return {
            "f": {s.to_text(): shape.value for s, shape in self.f},
            "g": {s.to_text(): shape.value for s, shape in self.g},
            "P": {_signature_key(sig): [s.to_literal() for s in subset] for sig, subset in self.P},
        }

    @classmethod
    def from_json(cls, data: Union[str, Dict[str, object]], eta: Enrichment) -> "StratumConfig":
        """Read a config document back and check it indexes Conf(eta)."""
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise ValidationError(f"config is not valid JSON: {e}", field="config")
        if not isinstance(data, dict):
            raise ValidationError("config must be a JSON object", field="config")
        try:
            f = {mk_structure(json.loads(key), eta.n): ThreeShape(value) for key, value in data.get("f", {}).items()}
            g = {mk_structure(json.loads(key), eta.n): TwoShape(value) for key, value in data.get("g", {}).items()}
            subsets = {
                tuple(int(p) for p in key.split(",")): [mk_structure(lit, eta.n) for lit in value]
                for key, value in data.get("P", {}).items()
            }
        except (ValueError, AttributeError, TypeError) as e:
            raise ValidationError(f"malformed config: {e}", field="config")
        return make_config(eta, f, g, subsets)


def make_config(eta: Enrichment,
                f: Dict[Structure, ThreeShape],
                g: Dict[Structure, TwoShape],
                subsets: Optional[Dict[Signature, Sequence[Structure]]] = None) -> StratumConfig:
    """Validated config over eta; missing P classes default to the empty subset."""
    eta = eta.canonical()
    subsets = subsets or {}
    e3, e2 = e3_members(eta), e2_members(eta)
    if set(f) != set(e3):
        raise ValidationError("f must be defined exactly on the Σ_{3,2,…,2} members", field="f")
    if set(g) != set(e2):
        raise ValidationError("g must be defined exactly on the Σ_{2,…,2} members", field="g")
    classes = signature_classes(eta)
    unknown = set(subsets) - set(classes)
    if unknown:
        raise ValidationError(f"no signature class {sorted(unknown)} in {eta.describe()}", field="P")
    P = []
    for sig, members in classes.items():
        chosen = subsets.get(sig, ())
        if not set(chosen) <= set(members):
            raise ValidationError(f"P subset for signature {sig} leaves its class", field="P")
        P.append((sig, canonical_subset(chosen)))
    return StratumConfig(
        eta,
        tuple((s, ThreeShape(f[s])) for s in e3),
        tuple((s, TwoShape(g[s])) for s in e2),
        tuple(P),
    )


def _components(eta: Enrichment):
    classes = signature_classes(eta)
    return e3_members(eta), e2_members(eta), classes


def iter_conf_space(eta: Enrichment) -> Iterator[StratumConfig]:
    eta = eta.canonical()
    e3, e2, classes = _components(eta)
    f_choices = product(list(ThreeShape), repeat=len(e3))
    for f_values in f_choices:
        for g_values in product(list(TwoShape), repeat=len(e2)):
            for subsets in product(*(subset_options(members) for members in classes.values())):
                yield StratumConfig(
                    eta,
                    tuple(zip(e3, f_values)),
                    tuple(zip(e2, g_values)),
                    tuple(zip(classes.keys(), subsets)),
                )


def conf_space_size(eta: Enrichment) -> int:
    e3, e2, classes = _components(eta)
    size = 4 ** len(e3) * 2 ** len(e2)
    for members in classes.values():
        size *= len(subset_options(members))
    return size


def conf_space(eta: Enrichment) -> List[StratumConfig]:
    """Full enumeration of Conf(eta) in canonical order."""
    configs = list(iter_conf_space(eta))
    logger.debug(f"Conf({eta.describe()}) has {len(configs)} configs")
    return configs


def _require_inclusion(eta: Enrichment, eta_prime: Enrichment):
    if not eta.issubset(eta_prime):
        raise NotASubEnrichmentError(f"{eta.describe()} is not contained in {eta_prime.describe()}")


def restrict_config(config: StratumConfig, eta: Enrichment) -> StratumConfig:
    """Image of a config over η′ in Conf(η) for η ⊆ η′."""
    _require_inclusion(eta, config.eta)
    eta = eta.canonical()
    f, g, subsets = config.f_map, config.g_map, config.P_map
    classes = signature_classes(eta)
    return StratumConfig(
        eta,
        tuple((s, f[s]) for s in e3_members(eta)),
        tuple((s, g[s]) for s in e2_members(eta)),
        tuple((sig, canonical_subset(set(subsets.get(sig, ())) & set(members))) for sig, members in classes.items()),
    )


def preimage_strata(config: StratumConfig, eta_prime: Enrichment) -> List[StratumConfig]:
    """All configs over η′ restricting to config."""
    _require_inclusion(config.eta, eta_prime)
    eta_prime = eta_prime.canonical()
    e3, e2, classes = _components(eta_prime)
    f, g, subsets = config.f_map, config.g_map, config.P_map

    f_options = [[f[s]] if s in f else list(ThreeShape) for s in e3]
    g_options = [[g[s]] if s in g else list(TwoShape) for s in e2]
    p_options = []
    for sig, members in classes.items():
        low = set(members) & set(config.eta.as_set)
        wanted = set(subsets.get(sig, ()))
        p_options.append([
            option for option in subset_options(members)
            if set(canonical_subset(set(option) & low)) == wanted
        ])

    found = [
        StratumConfig(eta_prime, tuple(zip(e3, fv)), tuple(zip(e2, gv)), tuple(zip(classes.keys(), pv)))
        for fv in product(*f_options)
        for gv in product(*g_options)
        for pv in product(*p_options)
    ]
    logger.debug(f"Preimage of [{config.label()}] in {eta_prime.describe()}: {len(found)} configs")
    return found


def general_stratum(eta: Enrichment) -> StratumConfig:
    """f ≡ 3, g ≡ 2, no coincidences."""
    eta = eta.canonical()
    e3, e2, classes = _components(eta)
    return StratumConfig(
        eta,
        tuple((s, ThreeShape.THREE) for s in e3),
        tuple((s, TwoShape.TWO) for s in e2),
        tuple((sig, ()) for sig in classes),
    )


def special_stratum(eta: Enrichment) -> StratumConfig:
    """f ≡ g (fat point), g ≡ 1, every class fully coincident."""
    eta = eta.canonical()
    e3, e2, classes = _components(eta)
    return StratumConfig(
        eta,
        tuple((s, ThreeShape.FAT) for s in e3),
        tuple((s, TwoShape.ONE) for s in e2),
        tuple((sig, canonical_subset(members)) for sig, members in classes.items()),
    )


def is_consistent(config: StratumConfig) -> bool:
    """Heuristic filter on configs that cannot index a nonempty stratum.

    - three distinct points on the full structure rule out coincidences and length-2 collapses;
    - a curvilinear or fat full structure forces every point to coincide and every pair to collapse;
    - a collapsed doublet σ_ij forces its present points σ_i, σ_j to coincide.
    """
    f, g, subsets = config.f_map, config.g_map, config.P_map
    points = subsets.get(POINTS, ())
    full = full_structure(config.eta.n)
    if full in f:
        if f[full] == ThreeShape.THREE:
            if any(subset for subset in subsets.values()) or any(v != TwoShape.TWO for v in g.values()):
                return False
        elif f[full] in (ThreeShape.CURVILINEAR, ThreeShape.FAT):
            present = [s for s in config.eta.structures if s.signature == POINTS]
            if set(points) != set(canonical_subset(present)):
                return False
            if any(v != TwoShape.ONE for v in g.values()):
                return False
    for s, shape in g.items():
        if shape == TwoShape.ONE and s.is_leaf:
            present = [p for p in s.points() if p in config.eta]
            if len(present) == 2 and not set(present) <= set(points):
                return False
    return True


def consistent_conf_space(eta: Enrichment) -> List[StratumConfig]:
    return [c for c in iter_conf_space(eta) if is_consistent(c)]


def sample_configs(eta: Enrichment, count: int, rng: np.random.Generator) -> List[StratumConfig]:
    """Independent uniform draws from Conf(eta), component by component."""
    eta = eta.canonical()
    e3, e2, classes = _components(eta)
    shapes3, shapes2 = list(ThreeShape), list(TwoShape)
    options = {sig: subset_options(members) for sig, members in classes.items()}
    samples = []
    for _ in range(count):
        samples.append(StratumConfig(
            eta,
            tuple((s, shapes3[int(rng.integers(len(shapes3)))]) for s in e3),
            tuple((s, shapes2[int(rng.integers(len(shapes2)))]) for s in e2),
            tuple((sig, opts[int(rng.integers(len(opts)))]) for sig, opts in options.items()),
        ))
    return samples


def preimage_dot(config: StratumConfig, preimages: Sequence[StratumConfig]) -> str:
    """Fiber of the restriction map as a DOT graph, c′ -> c."""
    lines = ["digraph strata {", f'  "{config.label()}" [shape=box];']
    for upper in preimages:
        lines.append(f'  "{upper.label()}" -> "{config.label()}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
