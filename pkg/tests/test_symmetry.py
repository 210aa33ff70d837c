"""Tests for the symmetric-group action and the stabilizer groups."""
import pytest

from api.exceptions import NotASubgroupOfStabilizerError, ValidationError
from services.classification_service import iter_enrichments
from services.enrichments import notation, set_equal
from services.structures import enumerate_structures
from services.symmetry_service import (
    Permutation,
    act,
    acting_group,
    all_permutations,
    invariant_substructures,
    is_normal_subgroup,
    orbit,
    pointwise_stabilizer_H,
    stabilizer_G,
)


class TestPermutation:

    def test_cycles(self):
        assert Permutation.from_cycle(3, 1, 2, 3).cycles() == "(1 2 3)"
        assert Permutation.identity(3).cycles() == "id"

    def test_compose_inverse(self):
        for g in all_permutations(3):
            assert g.compose(g.inverse()).is_identity

    def test_rejects_non_bijection(self):
        with pytest.raises(ValidationError):
            Permutation((1, 1, 2))

    def test_identity_first(self):
        assert all_permutations(3)[0].is_identity
        assert len(all_permutations(3)) == 6


class TestAction:
    """act is a left action: act(g, act(h, x)) == act(g ∘ h, x)."""

    def test_composes_on_structures(self):
        for s in enumerate_structures(3, 3):
            for g in all_permutations(3):
                for h in all_permutations(3):
                    assert act(g, act(h, s)) == act(g.compose(h), s)

    def test_composes_on_enrichments(self):
        group = all_permutations(3)
        for eta in iter_enrichments(3):
            for g in group:
                for h in group:
                    assert act(g, act(h, eta)) == act(g.compose(h), eta), eta.describe()

    def test_identity_acts_trivially(self):
        for eta in iter_enrichments(3):
            assert act(Permutation.identity(3), eta) == eta

    def test_size_mismatch(self, named):
        with pytest.raises(ValidationError):
            act(Permutation.identity(2), named("R_123"))


class TestStabilizers:
    """G_η, H_η and the acting group G_η/H_η."""

    def test_r_max_is_acted_on_by_s3(self, named):
        eta = named("max")
        assert stabilizer_G(eta).order == 6
        assert pointwise_stabilizer_H(eta).order == 1
        assert acting_group(eta).label == "S_3"

    def test_double_doublet_is_fixed_by_its_swap(self, named):
        eta = named("R^1_123")
        assert stabilizer_G(eta).order == 2
        assert pointwise_stabilizer_H(eta).order == 2
        assert acting_group(eta).label == "S_1"

    @pytest.mark.parametrize("text,label", [
        ("R_123", "S_1"),
        ("R_{1,2,3,12,123}", "S_2"),
        ("R^1_{1,2,3,12,13,123}", "S_2"),
        ("R^{3,123}_{1,2,3,12,123}", "S_2"),
        ("R^123_{1,123}", "S_1"),
    ])
    def test_acting_group_labels(self, named, text, label):
        assert acting_group(named(text)).label == label

    def test_pointwise_stabilizer_is_normal(self):
        for eta in iter_enrichments(3):
            assert is_normal_subgroup(pointwise_stabilizer_H(eta), stabilizer_G(eta)), eta.describe()

    def test_acting_group_order_is_the_index(self):
        for eta in iter_enrichments(3):
            big, small = stabilizer_G(eta), pointwise_stabilizer_H(eta)
            assert acting_group(eta).order * small.order == big.order, eta.describe()
            assert set(small.elements) <= set(big.elements)


class TestOrbitsAndInvariants:

    def test_orbit_sizes(self, named):
        assert len(orbit(named("R_123"))) == 1
        assert len(orbit(named("R_{1,123}"))) == 3
        assert len(orbit(named("R_{1,2,3,12,123}"))) == 3

    def test_orbit_contains_relabelled_images(self, named):
        eta = named("R_{3,12,123}")
        image = act(Permutation.from_cycle(3, 1, 3), eta)
        assert any(set_equal(image, member) for member in orbit(eta))

    def test_invariant_substructures_under_transposition(self, named):
        swap = Permutation.from_cycle(3, 1, 2)
        fixed = invariant_substructures(named("max"), [Permutation.identity(3), swap])
        assert notation(fixed) == "R^{3,123}_{3,12,123}"

    def test_invariants_of_the_full_stabilizer(self, named):
        eta = named("max")
        assert notation(invariant_substructures(eta, stabilizer_G(eta))) == "R^123_123"

    def test_group_outside_stabilizer(self, named):
        with pytest.raises(NotASubgroupOfStabilizerError):
            invariant_substructures(named("R_{1,123}"), [Permutation.identity(3), Permutation.from_cycle(3, 1, 2)])

    def test_group_not_closed(self, named):
        with pytest.raises(NotASubgroupOfStabilizerError):
            invariant_substructures(named("max"), [Permutation.from_cycle(3, 1, 2), Permutation.from_cycle(3, 1, 3)])
