"""Tests for canonical structures and enrichments."""
import json
from collections import Counter

import pytest

from api.exceptions import (
    EmptySetError,
    MissingFullStructureError,
    MixedSignatureError,
    NotationError,
    OutOfRangeError,
    ValidationError,
)
from services.classification_service import iter_enrichments
from services.enrichments import (
    Enrichment,
    LE_BARZ_NOTATION,
    MODEL_NOTATIONS,
    enrichment_from_name,
    mk_enrichment,
    model_enrichments,
    model_name,
    notation,
    parse_enrichment,
    parse_model_name,
    set_equal,
)
from services.structures import (
    POINTS,
    Structure,
    enumerate_structures,
    full_structure,
    mk_structure,
    normalize_signature,
    parse_token,
)
from services.symmetry_service import Permutation, act


def shuffled_literal(literal, rng):
    """Same nest with every level in random order, leaves included."""
    if all(isinstance(e, int) for e in literal):
        return [literal[i] for i in rng.permutation(len(literal))]
    children = [shuffled_literal(child, rng) for child in literal]
    return [children[i] for i in rng.permutation(len(children))]


class TestStructures:
    """Canonical form and enumeration of nested sets."""

    def test_singleton_levels_collapse(self):
        """A set of points is the plain subset."""
        assert mk_structure([[1], [2]], 3) == mk_structure([1, 2], 3)
        assert mk_structure([[1], [2]], 3).signature == (2,)

    def test_duplicate_children_collapse(self):
        assert mk_structure([[1, 2], [2, 1]], 3) == Structure.leaf((1, 2))

    def test_double_doublet(self):
        s = mk_structure([[1, 2], [1, 3]], 3)
        assert s.signature == (2, 2)
        assert s.level == 2
        assert s.token == "^1"
        assert s.describe() == "σ^1"
        assert s == parse_token("^1", 3)

    def test_child_order_is_irrelevant(self):
        assert mk_structure([[1, 3], [1, 2]], 3) == mk_structure([[1, 2], [1, 3]], 3)

    def test_triple_doublet_token(self):
        s = parse_token("^123", 3)
        assert s.signature == (3, 2)
        assert s.carrier == frozenset({1, 2, 3})
        assert s.to_literal() == [[1, 2], [1, 3], [2, 3]]

    def test_mixed_signature_rejected(self):
        with pytest.raises(MixedSignatureError):
            mk_structure([[1, 2], [3]], 3)

    def test_out_of_range_label(self):
        with pytest.raises(OutOfRangeError):
            mk_structure([4], 3)

    def test_empty_set(self):
        with pytest.raises(EmptySetError):
            mk_structure([], 3)

    def test_ragged_nest(self):
        with pytest.raises(ValidationError):
            mk_structure([1, [2, 3]], 3)

    def test_normalize_signature(self):
        assert normalize_signature((1, 2, 1)) == (2,)
        assert normalize_signature((1, 1)) == POINTS
        with pytest.raises(ValidationError):
            normalize_signature((0, 2))

    def test_enumeration_counts(self):
        assert len(enumerate_structures(2, 2)) == 3
        assert len(enumerate_structures(3, 1)) == 7
        assert len(enumerate_structures(3, 2)) == 11
        assert len(enumerate_structures(3, 3)) == 15

    @pytest.mark.parametrize("n,max_level,counts", [
        (2, 3, {1: 3}),
        (3, 3, {1: 7, 2: 4, 3: 4}),
        (4, 2, {1: 15, 2: 68}),
    ])
    def test_counts_per_level(self, n, max_level, counts):
        assert Counter(s.level for s in enumerate_structures(n, max_level)) == counts

    def test_canonical_form_is_idempotent(self, rng):
        """Random nests, shuffled and rebuilt from their literal, keep their canonical form."""
        pool = enumerate_structures(3, 3)
        for _ in range(1000):
            s = pool[int(rng.integers(len(pool)))]
            literal = shuffled_literal(s.to_literal(), rng)
            rebuilt = mk_structure(literal, 3)
            assert rebuilt == s
            assert mk_structure(rebuilt.to_literal(), 3) == rebuilt
            assert rebuilt.signature == s.signature

    def test_enumeration_is_deterministic_and_sorted(self):
        first = enumerate_structures(3, 2)
        assert first == enumerate_structures(3, 2)
        assert first[0] == Structure.leaf((1,))
        assert [s.level for s in first] == sorted(s.level for s in first)
        assert len(set(first)) == len(first)

    def test_relabel(self):
        swap = Permutation.from_cycle(3, 1, 2)
        assert act(swap, parse_token("^1", 3)) == parse_token("^2", 3)
        assert act(swap, parse_token("^123", 3)) == parse_token("^123", 3)

    def test_unknown_tokens(self):
        with pytest.raises(ValidationError):
            parse_token("^4", 3)
        with pytest.raises(ValidationError):
            parse_token("^1", 4)
        with pytest.raises(ValidationError):
            parse_token("a", 3)


class TestEnrichments:
    """Enrichment construction and the R-notation."""

    def test_full_structure_required(self):
        with pytest.raises(MissingFullStructureError):
            mk_enrichment([[1]], 3)

    def test_duplicates_dropped_keeping_first(self):
        eta = mk_enrichment([[1, 2, 3], [1], [1]], 3)
        assert len(eta) == 2
        assert eta.structures[1] == Structure.leaf((1,))

    def test_notation_round_trip_for_models(self):
        for text in MODEL_NOTATIONS[3]:
            assert notation(enrichment_from_name(text)) == text

    def test_notation_ignores_sequence_order(self):
        eta = mk_enrichment([[[1, 3], [2, 3]], [1, 2], [1, 2, 3], [3], [[1, 2], [1, 3], [2, 3]]], 3)
        assert notation(eta) == "R^{3,123}_{3,12,123}"

    def test_notation_absent_for_unnamed_members(self):
        eta = mk_enrichment([[1, 2, 3], [[[1, 2], [1, 3]], [[1, 2], [2, 3]]]], 3)
        assert notation(eta) is None
        assert eta.describe() == eta.canonical_text()

    def test_r_max_is_every_structure_up_to_level_two(self):
        eta = enrichment_from_name("max")
        assert len(eta) == 11
        assert notation(eta) == "R_max"
        assert set_equal(eta, enrichment_from_name("R_max"))

    def test_le_barz_member_list(self):
        eta = enrichment_from_name(LE_BARZ_NOTATION)
        assert len(eta) == 7
        assert eta.level == 1

    def test_model_name_lookup(self):
        assert model_name(enrichment_from_name("R^123_{1,123}")).text == "R^123_{1,123}"
        assert model_name(enrichment_from_name("R_{1,2,123}")) is None

    def test_models_for_two_points(self):
        names = [name.text for name, _ in model_enrichments(2)]
        assert names == ["R_12", "R_{1,12}"]
        with pytest.raises(ValidationError):
            model_enrichments(4)

    def test_parse_enrichment_inputs(self):
        expected = enrichment_from_name("R_{1,123}")
        assert set_equal(parse_enrichment('{"n": 3, "structures": [[1, 2, 3], [1]]}'), expected)
        assert set_equal(parse_enrichment("[[1, 2, 3], [1]]"), expected)
        assert set_equal(parse_enrichment("R_{1,123}"), expected)
        assert set_equal(parse_enrichment("[[1, 2], [1]]", n=2), enrichment_from_name("R_{1,12}", 2))

    def test_json_document_round_trip(self):
        eta = enrichment_from_name("R^{3,123}_{1,2,3,12,123}")
        assert Enrichment.from_json(eta.to_json()) == eta

    @pytest.mark.parametrize("n", [2, 3])
    def test_json_round_trip_for_every_enrichment(self, n):
        for eta in iter_enrichments(n):
            assert Enrichment.from_json(eta.to_json()) == eta
            assert Enrichment.from_json(json.dumps(eta.to_json())) == eta

    @pytest.mark.parametrize("text", ["R_", "Rfoo", "R^1", "R_{}", "R_{1,123}x"])
    def test_bad_notation(self, text):
        with pytest.raises(NotationError):
            parse_model_name(text)

    def test_r_max_needs_three_points(self):
        with pytest.raises(NotationError):
            enrichment_from_name("max", 2)

    def test_full_structure(self):
        assert full_structure(3) == Structure.leaf((1, 2, 3))
