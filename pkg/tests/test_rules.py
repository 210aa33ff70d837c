"""Tests for the identifiability rules, saturation and the detectors."""
import numpy as np
import pytest

from api.exceptions import LevelCapExceededError
from services.classification_service import iter_enrichments
from services.detectors import DetectorTag, detect_nonadmissible, matching_detectors
from services.enrichments import MODEL_NOTATIONS, enrichment_from_name, mk_enrichment, notation, set_equal
from services.rules import (
    RuleTag,
    extensions,
    saturate,
    top_structure,
    triple_doublet,
    universal_step,
    validate_application,
)
from services.settings import get_settings
from services.structures import Structure, parse_token
from services.symmetry_service import Permutation, act


class TestRules:
    """Single rule applications."""

    def test_residual_adds_missing_point(self, named):
        closure, trace = saturate(named("R_{12,123}"))
        assert notation(closure) == "R_{3,12,123}"
        assert [a.rule for a in trace] == [RuleTag.RESIDUAL]
        assert trace[0].added == parse_token("3", 3)

    def test_lone_point_is_saturated(self, named):
        closure, trace = saturate(named("R_{1,123}"))
        assert trace == ()
        assert set_equal(closure, named("R_{1,123}"))

    def test_pair_to_double(self, named):
        applications = extensions(named("R_{12,13,123}"))
        pair = [a for a in applications if a.rule == RuleTag.PAIR_TO_DOUBLE]
        assert [a.added for a in pair] == [parse_token("^1", 3)]
        assert pair[0].permutation is not None and pair[0].permutation.is_identity

    def test_pair_to_double_relabelled(self, named):
        applications = extensions(named("R_{13,23,123}"))
        (pair,) = [a for a in applications if a.rule == RuleTag.PAIR_TO_DOUBLE]
        assert pair.added == parse_token("^3", 3)
        assert act(pair.permutation, parse_token("12", 3)) == pair.witnesses[0]

    def test_double_from_triple(self, named):
        applications = extensions(named("R^123_{12,123}"))
        added = {a.added for a in applications if a.rule == RuleTag.DOUBLE_FROM_TRIPLE}
        assert added == {parse_token("^3", 3)}

    def test_triple_from_double(self, named):
        applications = extensions(named("R^3_{12,123}"))
        assert any(a.rule == RuleTag.TRIPLE_FROM_DOUBLE and a.added == triple_doublet() for a in applications)

    def test_double_containing_the_doublet_gives_no_triple(self, named):
        applications = extensions(named("R^1_{12,123}"))
        assert not any(a.rule == RuleTag.TRIPLE_FROM_DOUBLE for a in applications)

    def test_level_three_rules(self):
        assert top_structure(2) == triple_doublet()
        eta = mk_enrichment([[1, 2, 3], parse_token("^1", 3), top_structure(3)], 3)
        closure, trace = saturate(eta)
        assert any(a.rule == RuleTag.LEVEL3_RESIDUAL for a in trace)
        assert closure.level == 3

    def test_validate_application(self, named):
        eta = named("R_{12,123}")
        (application,) = extensions(eta)
        assert validate_application(application, eta)
        assert not validate_application(application, eta.extended([application.added]))

    def test_universal_steps(self, named):
        eta = named("R^123_123")
        step = universal_step(eta, parse_token("12", 3))
        assert step.rule == RuleTag.UNIVERSAL_LEVEL_TWO
        assert validate_application(step, eta)
        point = universal_step(named("R_123"), parse_token("1", 3))
        assert point.rule == RuleTag.UNIVERSAL_LEVEL_ONE
        assert universal_step(named("R_123"), parse_token("12", 3)) is None

    def test_saturation_respects_level_cap(self):
        first = Structure.node([parse_token("^1", 3), parse_token("^2", 3)])
        second = Structure.node([parse_token("^1", 3), parse_token("^3", 3)])
        deep = Structure.node([first, second])
        eta = mk_enrichment([[1, 2, 3], deep], 3)
        with pytest.raises(LevelCapExceededError):
            saturate(eta)


class TestSaturation:
    """Saturation is a closure operator and does not depend on rule order."""

    @pytest.mark.parametrize("text", MODEL_NOTATIONS[3])
    def test_idempotent(self, text):
        closure, _ = saturate(enrichment_from_name(text))
        again, trace = saturate(closure)
        assert trace == ()
        assert set_equal(again, closure)

    @pytest.mark.parametrize("text", ["R_{12,123}", "R_{12,13,123}", "R^123_{12,123}", "R^3_{12,123}"])
    def test_random_orders_agree(self, text, rng):
        eta = enrichment_from_name(text)
        expected, _ = saturate(eta)
        for _ in range(10):
            closure, _ = saturate(eta, rng=rng)
            assert set_equal(closure, expected)

    def test_equivariant(self, named):
        eta = named("R_{13,23,123}")
        g = Permutation.from_cycle(3, 1, 3)
        left, _ = saturate(act(g, eta))
        right, _ = saturate(eta)
        assert set_equal(left, act(g, right))

    @pytest.mark.performance
    def test_confluence_over_random_orders(self):
        settings = get_settings(seed=11)
        rng = np.random.default_rng(settings.seed)
        for text in ["R_{12,13,123}", "R^123_{12,123}", "R_{1,2,3,12,123}", "R^3_{12,123}"]:
            eta = enrichment_from_name(text)
            expected, _ = saturate(eta)
            for _ in range(settings.random_orders):
                closure, _ = saturate(eta, rng=rng)
                assert set_equal(closure, expected)

    @pytest.mark.performance
    def test_confluence_on_every_enrichment(self, rng):
        for eta in iter_enrichments(3):
            expected, _ = saturate(eta)
            for _ in range(5):
                closure, _ = saturate(eta, rng=rng)
                assert set_equal(closure, expected), eta.describe()

    def test_monotone(self, rng):
        """η ⊆ η′ implies closure(η) ⊆ closure(η′); pairs are drawn as bit masks a ⊆ a | b."""
        everything = list(iter_enrichments(3))
        for _ in range(300):
            low = int(rng.integers(len(everything)))
            high = low | int(rng.integers(len(everything)))
            eta, eta_prime = everything[low], everything[high]
            assert eta.issubset(eta_prime)
            small, _ = saturate(eta)
            large, _ = saturate(eta_prime)
            assert small.issubset(large), (eta.describe(), eta_prime.describe())

    def test_level_two_closures_stay_at_level_two(self):
        for eta in iter_enrichments(3):
            closure, _ = saturate(eta)
            assert closure.level <= 2


class TestDetectors:

    @pytest.mark.parametrize("text", ["R_{1,2,123}", "R_{1,3,123}", "R_{1,2,3,123}", "R^123_{2,3,123}"])
    def test_exact_list_up_to_relabelling(self, text):
        detection = detect_nonadmissible(enrichment_from_name(text))
        assert detection.tag == DetectorTag.EXACT_LIST

    def test_unique_double_double_with_point(self, named):
        detection = detect_nonadmissible(named("R^1_{1,123}"))
        assert detection.tag == DetectorTag.UNIQUE_DOUBLE_DOUBLE_WITH_POINT

    def test_two_double_doubles_without_doublet(self, named):
        detection = detect_nonadmissible(named("R^{1,2}_123"))
        assert detection.tag == DetectorTag.TWO_DOUBLE_DOUBLES_NO_DOUBLET

    def test_triple_doublet_does_not_hide_two_double_doubles(self):
        eta = mk_enrichment([[1, 2, 3], parse_token("^1", 3), parse_token("^2", 3), parse_token("^123", 3)], 3)
        (detection,) = matching_detectors(eta)
        assert detection.tag == DetectorTag.TWO_DOUBLE_DOUBLES_NO_DOUBLET
        assert detect_nonadmissible(eta) == detection

    def test_triple_doublet_excludes_unique_double_double(self, named):
        assert detect_nonadmissible(named("R^{1,123}_{1,123}")) is None

    def test_detectors_are_exclusive(self):
        for eta in iter_enrichments(3):
            assert len(matching_detectors(eta)) <= 1, eta.describe()

    def test_level_three_low_part(self):
        eta = mk_enrichment([[1, 2, 3], top_structure(3)], 3)
        assert detect_nonadmissible(eta).tag == DetectorTag.LEVEL_THREE_LOW_PART

    @pytest.mark.parametrize("text", MODEL_NOTATIONS[3])
    def test_models_pass_every_detector(self, text):
        assert detect_nonadmissible(enrichment_from_name(text)) is None

    def test_only_three_points_inspected(self, named):
        assert detect_nonadmissible(named("R_{1,12}", 2)) is None
