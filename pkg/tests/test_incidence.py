"""Tests for the incidence predicate."""
from itertools import combinations

import pytest

from api.exceptions import ValidationError
from services.enrichments import enrichment_from_name
from services.incidence_service import elements_at, incidence, incidence_closure, incidence_witness
from services.structures import POINTS, Structure, enumerate_structures, parse_token


def _leaves(n):
    return [s for s in enumerate_structures(n, 1)]


def _flatten(s, base):
    """Elements of Σ_base collected anywhere inside s."""
    if base == POINTS:
        return set(s.carrier)
    if s.signature == base:
        return {s}
    return set().union(*(_flatten(child, base) for child in s.children))


def _reads_at(target, base):
    if base == POINTS:
        return target.is_leaf
    return target.signature in (base, target.signature[:1] + base)


def incidence_by_unfolding(sigma, targets):
    """σ ⊂ ∪ targets read at some inner signature shared by every target."""
    signature = sigma.signature
    bases = {POINTS} | {signature[k:] for k in range(len(signature))}
    for base in bases:
        if not all(_reads_at(t, base) for t in targets):
            continue
        covered = set().union(*(_flatten(t, base) for t in targets))
        if _flatten(sigma, base) <= covered:
            return True
    return False


THREE_POINT_STRUCTURES = enumerate_structures(3, 2)


class TestIncidenceOracle:
    """On subsets of {1..n} incidence is containment in the union."""

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_leaf_incidence_is_union_containment(self, n):
        leaves = _leaves(n)
        for sigma in leaves:
            for size in (1, 2):
                for targets in combinations(leaves, size):
                    covered = set().union(*(t.items for t in targets))
                    assert incidence(sigma, targets) == (set(sigma.items) <= covered), (sigma, targets)

    @pytest.mark.parametrize("sigma", THREE_POINT_STRUCTURES, ids=lambda s: s.describe())
    def test_agrees_with_unfolding_up_to_arity_three(self, sigma):
        for size in (1, 2):
            for targets in combinations(THREE_POINT_STRUCTURES, size):
                assert incidence(sigma, targets) == incidence_by_unfolding(sigma, targets), (sigma, targets)


class TestIncidenceExamples:

    def test_doublet_in_triple_doublet(self):
        assert incidence(parse_token("12", 3), [parse_token("^123", 3)])

    def test_doublet_outside_double_doublet(self):
        assert not incidence(parse_token("12", 3), [parse_token("^3", 3)])
        assert incidence(parse_token("13", 3), [parse_token("^3", 3)])

    def test_double_doublet_in_triple_doublet(self):
        split = incidence_witness(parse_token("^3", 3), [parse_token("^123", 3)])
        assert split is not None
        assert split.p == (2,)

    def test_triple_doublet_covered_by_two_double_doublets(self):
        sigma = parse_token("^123", 3)
        assert incidence(sigma, [parse_token("^1", 3), parse_token("^2", 3)])
        assert not incidence(sigma, [parse_token("^1", 3)])

    def test_point_split_reads_targets_as_points(self):
        split = incidence_witness(parse_token("12", 3), [parse_token("1", 3), parse_token("2", 3)])
        assert split.p == ()
        assert split.target_sizes == (1, 1)

    def test_needs_targets(self):
        with pytest.raises(ValidationError):
            incidence(parse_token("1", 3), [])

    def test_elements_at(self):
        triple = parse_token("^123", 3)
        assert elements_at(triple, (2,)) == frozenset(triple.items)
        assert elements_at(triple, POINTS) is None
        assert elements_at(Structure.leaf((1, 2)), POINTS) == frozenset({Structure.leaf((1,)), Structure.leaf((2,))})


class TestIncidenceClosure:

    def test_closure_on_doublet_model(self):
        relations = incidence_closure(enrichment_from_name("R_{3,12,123}"))
        described = {r.describe() for r in relations}
        assert "σ_3 ⊂ σ_123" in described
        assert "σ_12 ⊂ σ_123" in described
        assert "σ_123 ⊂ σ_3 ∪ σ_12" in described

    def test_arity_bounds_target_count(self):
        eta = enrichment_from_name("max")
        assert all(len(r.targets) <= 1 for r in incidence_closure(eta, max_arity=2))
        assert len(incidence_closure(eta, max_arity=3)) > len(incidence_closure(eta, max_arity=2))

    def test_every_relation_holds(self):
        for r in incidence_closure(enrichment_from_name("R^{3,123}_{3,12,123}")):
            assert incidence(r.sigma, r.targets)

    def test_bad_arity(self):
        with pytest.raises(ValidationError):
            incidence_closure(enrichment_from_name("R_123"), max_arity=0)
