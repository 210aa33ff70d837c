"""Tests for the universal-ideal charts and their incidence-locus verifications."""
import pytest

from api.exceptions import NotZeroDimensionalError, ValidationError
from services.chart_service import HILB2_PARAMETERS, HILB3_PARAMETERS, ChartTarget, WMode
from services.ideal_service import Ideal
from services.polynomials import PolyRing


class TestSyzygies:

    def test_solve_w(self, chart_service):
        ring = PolyRing(HILB3_PARAMETERS, "hilb3")
        u, u1, u2, v, v1, v2 = ring.vars(*HILB3_PARAMETERS)
        w = chart_service.solve_w()
        assert w["w"] == u * v1 + v * v2 - v1 ** 2 - u1 * v
        assert w["w1"] == u1 * v1 - v * u2
        assert w["w2"] == u * u2 + u1 * v2 - u1 ** 2 - u2 * v1

    def test_hilb3_chart_has_colength_three(self, chart_service, rng):
        ring = chart_service.plane_ring()
        ideal = Ideal(ring, chart_service.hilb3_generators(ring))
        for _ in range(10):
            values = chart_service.random_parameters(HILB3_PARAMETERS, rng)
            assert chart_service.colength_probe(ideal, values) == 3

    def test_hilb2_chart_has_colength_two(self, chart_service, rng):
        ring = chart_service.plane_ring()
        ideal = Ideal(ring, chart_service.hilb2_generators(ring))
        for _ in range(5):
            values = chart_service.random_parameters(HILB2_PARAMETERS, rng)
            assert chart_service.colength_probe(ideal, values) == 2

    def test_colength_of_plane_ideals(self, chart_service):
        plane = PolyRing(("x", "y"), "plane")
        x, y = plane.vars("x", "y")
        assert chart_service.colength_probe(Ideal(plane, [x ** 2, x * y, y ** 2]), {}) == 3
        assert chart_service.colength_probe(Ideal(plane, [x - 1, y]), {}) == 1
        with pytest.raises(NotZeroDimensionalError):
            chart_service.colength_probe(Ideal(plane, [x]), {})
        with pytest.raises(NotZeroDimensionalError):
            chart_service.colength_probe(Ideal(plane, [plane.zero()]), {})


class TestVerifyChart:

    def test_doublet_of_doublets_in_triple(self, chart_service):
        report = chart_service.verify_chart(ChartTarget.R1_123)
        assert report.jacobian_rank == 8
        assert report.smooth_dimension == 6
        assert report.quoted_generators_contained
        assert report.extra_generators_absorbed
        assert report.replay_identities_hold
        assert report.passed

    def test_doublet_in_triple(self, chart_service):
        report = chart_service.verify_chart(ChartTarget.R_12_123)
        assert report.jacobian_rank == 4
        assert report.smooth_dimension == 6
        assert set(report.free_variables) == {"a", "c", "d", "v", "v1", "v2"}

    @pytest.mark.performance
    def test_triple_doublet_in_triple(self, chart_service):
        report = chart_service.verify_chart(ChartTarget.R123_123)
        assert report.jacobian_rank == 12
        assert report.smooth_dimension == 6

    @pytest.mark.performance
    def test_higher_dimension(self, chart_service):
        report = chart_service.verify_chart(ChartTarget.R_12_123, dim=3)
        assert report.smooth_dimension == 9
        assert report.expected_dimension == 9

    def test_symbolic_w(self, chart_service):
        report = chart_service.build_report(ChartTarget.R1_123, mode=WMode.SYMBOLIC)
        assert report.mode == "symbolic-w"
        assert report.extra_generators_absorbed is None
        assert report.jacobian_rank == 8
        assert report.notes

    @pytest.mark.parametrize("target", [ChartTarget.R1_123, ChartTarget.R123_123])
    def test_inner_bases_are_groebner(self, chart_service, target):
        assert chart_service.inner_basis_is_groebner(chart_service.build_chart(target))

    @pytest.mark.parametrize("target", [ChartTarget.R1_123, ChartTarget.R123_123])
    def test_replay_identities(self, chart_service, target):
        results = chart_service.replay_identities(chart_service.build_chart(target))
        assert results
        assert all(ok for *_, ok in results)

    def test_dimension_errors(self, chart_service):
        with pytest.raises(ValidationError):
            chart_service.build_chart(ChartTarget.R_12_123, dim=1)
        with pytest.raises(ValidationError):
            chart_service.build_chart(ChartTarget.R1_123, dim=3)
