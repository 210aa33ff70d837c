"""Tests for the stratification index sets and their restriction maps."""
from collections import Counter

import pytest

from api.exceptions import NotASubEnrichmentError, ValidationError
from services.enrichments import MODEL_NOTATIONS, enrichment_from_name
from services.strata_service import (
    StratumConfig,
    ThreeShape,
    TwoShape,
    conf_space,
    conf_space_size,
    consistent_conf_space,
    general_stratum,
    is_consistent,
    make_config,
    preimage_dot,
    preimage_strata,
    restrict_config,
    sample_configs,
    special_stratum,
)
from services.structures import POINTS, parse_token
from services.symmetry_service import act, all_permutations


def derived_inclusions():
    """(label, η, name of η′, η′) for every model η′ and every relabelled model η ⊊ η′."""
    models = [(text, enrichment_from_name(text)) for text in MODEL_NOTATIONS[3]]
    found = {}
    for small_text, small in models:
        for big_text, big in models:
            for g in all_permutations(3):
                image = act(g, small)
                if image.as_set < big.as_set:
                    label = small_text if g.is_identity else f"{g.cycles()}{small_text}"
                    found.setdefault((image.as_set, big_text), (label, image, big_text, big))
    return list(found.values())


INCLUSIONS = derived_inclusions()
ENUMERABLE = [pair for pair in INCLUSIONS if conf_space_size(pair[3]) <= 1000]


def pair_id(pair):
    return f"{pair[0]}<{pair[2]}"


class TestConfSpace:

    @pytest.mark.parametrize("text,size", [
        ("R_123", 4),
        ("R_{1,123}", 4),
        ("R_{3,12,123}", 8),
        ("R_{1,2,3,12,123}", 40),
        ("R^1_123", 8),
    ])
    def test_sizes(self, named, text, size):
        eta = named(text)
        assert conf_space_size(eta) == size
        assert len(conf_space(eta)) == size

    def test_r_max_size_without_enumerating(self, named):
        assert conf_space_size(named("max")) == 16 * 64 * 125

    def test_enumeration_is_distinct(self, named):
        configs = conf_space(named("R_{1,2,3,12,123}"))
        assert len(set(configs)) == len(configs)

    def test_general_and_special(self, named):
        eta = named("R_{1,2,3,12,123}")
        general, special = general_stratum(eta), special_stratum(eta)
        assert general in conf_space(eta) and special in conf_space(eta)
        assert set(general.f_map.values()) == {ThreeShape.THREE}
        assert set(special.g_map.values()) == {TwoShape.ONE}
        assert len(special.P_map[POINTS]) == 3
        assert general.P_map[POINTS] == ()

    def test_consistency_filter(self, named):
        eta = named("R_{1,2,3,12,123}")
        consistent = consistent_conf_space(eta)
        assert general_stratum(eta) in consistent
        assert special_stratum(eta) in consistent
        assert 0 < len(consistent) < conf_space_size(eta)
        assert all(is_consistent(c) for c in consistent)

    def test_sampling(self, named, rng):
        eta = named("max")
        samples = sample_configs(eta, 20, rng)
        assert len(samples) == 20
        for config in samples:
            assert config.eta == eta.canonical()
            assert len(config.f) == 2 and len(config.g) == 6


class TestConfigDocuments:

    def test_json_round_trip(self, named):
        eta = named("R^{3,123}_{3,12,123}")
        config = special_stratum(eta)
        assert StratumConfig.from_json(config.to_json(), eta) == config

    def test_label(self, named):
        assert general_stratum(named("R_123")).label() == "f[123]=3"

    def test_make_config_checks_domains(self, named):
        eta = named("R_{3,12,123}")
        with pytest.raises(ValidationError):
            make_config(eta, {}, {parse_token("12", 3): TwoShape.TWO})
        with pytest.raises(ValidationError):
            make_config(eta, {parse_token("123", 3): ThreeShape.THREE}, {})

    def test_bad_document(self, named):
        with pytest.raises(ValidationError):
            StratumConfig.from_json("not json", named("R_123"))
        with pytest.raises(ValidationError):
            StratumConfig.from_json({"f": {"[1,2,3]": "7"}}, named("R_123"))


class TestRestriction:
    """Restriction is functorial and the preimages partition Conf(η′)."""

    def test_derived_inclusions(self, named):
        pairs = {(eta.as_set, big) for _, eta, big, _ in INCLUSIONS}
        assert (named("R_123").as_set, "R_{3,12,123}") in pairs
        assert (named("R_{1,123}").as_set, "R_{1,2,3,12,123}") in pairs
        assert (named("R^123_123").as_set, "R^{3,123}_{3,12,123}") in pairs
        assert (named("R^1_123").as_set, "R_max") in pairs
        assert all(big != "R_123" for _, _, big, _ in INCLUSIONS)
        assert 0 < len(ENUMERABLE) < len(INCLUSIONS)

    @pytest.mark.parametrize("pair", ENUMERABLE, ids=pair_id)
    def test_preimages_partition(self, pair):
        _, eta, _, eta_prime = pair
        counts = Counter()
        for config in conf_space(eta):
            fiber = preimage_strata(config, eta_prime)
            assert all(restrict_config(upper, eta) == config for upper in fiber)
            counts.update(fiber)
        assert sum(counts.values()) == conf_space_size(eta_prime)
        assert set(counts) == set(conf_space(eta_prime))
        assert max(counts.values()) == 1

    @pytest.mark.parametrize("pair", INCLUSIONS, ids=pair_id)
    def test_general_and_special_restrict(self, pair):
        _, eta, _, eta_prime = pair
        assert restrict_config(general_stratum(eta_prime), eta) == general_stratum(eta)
        assert restrict_config(special_stratum(eta_prime), eta) == special_stratum(eta)

    @pytest.mark.parametrize("pair", ENUMERABLE, ids=pair_id)
    def test_general_stratum_lies_over_general_stratum(self, pair):
        _, eta, _, eta_prime = pair
        assert general_stratum(eta_prime) in preimage_strata(general_stratum(eta), eta_prime)
        assert special_stratum(eta_prime) in preimage_strata(special_stratum(eta), eta_prime)

    def test_functorial_along_chains(self, rng):
        """η ⊂ η′ ⊂ η″: restricting in two steps equals restricting once."""
        chains = [
            (low, middle_eta, top_eta)
            for _, low, middle, middle_eta in INCLUSIONS
            for _, upper, _, top_eta in INCLUSIONS
            if upper.as_set == middle_eta.as_set
        ]
        assert chains
        for low, middle, top in chains:
            for config in sample_configs(top, 10, rng):
                assert restrict_config(restrict_config(config, middle), low) == restrict_config(config, low)

    def test_identity_restriction(self, named):
        eta = named("R_{3,12,123}")
        for config in conf_space(eta):
            assert restrict_config(config, eta) == config

    def test_composition(self, named):
        low, middle, high = named("R_123"), named("R_{3,12,123}"), named("R_{1,2,3,12,123}")
        for config in conf_space(high):
            assert restrict_config(restrict_config(config, middle), low) == restrict_config(config, low)

    def test_preimage_of_general_stratum(self, named):
        fiber = preimage_strata(general_stratum(named("R_123")), named("R_{3,12,123}"))
        assert len(fiber) == 2
        dot = preimage_dot(general_stratum(named("R_123")), fiber)
        assert dot.count("->") == 2

    def test_not_an_inclusion(self, named):
        with pytest.raises(NotASubEnrichmentError):
            preimage_strata(general_stratum(named("R_{1,123}")), named("R_{3,12,123}"))
        with pytest.raises(NotASubEnrichmentError):
            restrict_config(general_stratum(named("R_{3,12,123}")), named("R_{1,123}"))
