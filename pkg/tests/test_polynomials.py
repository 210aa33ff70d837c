"""Tests for exact polynomials, monomial orders and text parsing."""
from fractions import Fraction

import pytest

from api.exceptions import ValidationError
from services.polynomials import MonomialOrder, PolyRing, default_order, parse_polynomials


@pytest.fixture
def ring():
    return PolyRing(("x", "y", "a", "b"), "test")


class TestPolyRing:

    def test_duplicate_names(self):
        with pytest.raises(ValidationError):
            PolyRing(("x", "x"))

    def test_invalid_name(self):
        with pytest.raises(ValidationError):
            PolyRing(("x", "1y"))

    def test_unknown_variable(self, ring):
        with pytest.raises(ValidationError):
            ring.var("z")

    def test_extend_keeps_order(self, ring):
        assert ring.extend(["t", "x"]).names == ("x", "y", "a", "b", "t")


class TestParsing:

    def test_caret_and_products(self, ring):
        x, a, b = ring.vars("x", "a", "b")
        assert ring.parse("x^2 + a*x + b") == x ** 2 + a * x + b

    def test_rational_coefficients(self, ring):
        x = ring.var("x")
        assert ring.parse("x/2 - 3/4") == x * Fraction(1, 2) - Fraction(3, 4)

    def test_expands_products(self, ring):
        x, y = ring.vars("x", "y")
        assert ring.parse("(x + y)^2") == x ** 2 + 2 * x * y + y ** 2

    def test_text_round_trip(self, ring):
        p = ring.parse("2*x^2*a - y*b + 1/3")
        assert ring.parse(str(p)) == p

    def test_single_letter_names_are_plain_symbols(self):
        ring = PolyRing(("e", "i", "q"))
        e, i, q = ring.vars("e", "i", "q")
        assert ring.parse("e*i - q") == e * i - q

    @pytest.mark.parametrize("text", ["x +* y", "z + x", "x^(1/2)", "1/x"])
    def test_rejects_non_polynomials(self, ring, text):
        with pytest.raises(ValidationError):
            ring.parse(text)

    def test_parse_list(self, ring):
        assert len(parse_polynomials(ring, ["x", "y - a"])) == 2


class TestArithmetic:

    def test_zero_terms_dropped(self, ring):
        x = ring.var("x")
        assert (x - x).is_zero
        assert not (x - x)

    def test_scalar_operations(self, ring):
        x = ring.var("x")
        assert 1 - x == -(x - 1)
        assert 2 * x == x + x
        assert (x + 1).constant_value() == 1

    def test_different_rings(self, ring):
        other = PolyRing(("x", "y"))
        with pytest.raises(ValidationError):
            ring.var("x") + other.var("x")

    def test_substitute(self, ring):
        x, y, a = ring.vars("x", "y", "a")
        p = x ** 2 + a * y
        assert p.substitute({"x": y + 1}) == y ** 2 + 2 * y + 1 + a * y
        assert p.substitute({"x": 2, "a": Fraction(1, 2)}) == 4 + y * Fraction(1, 2)

    def test_to_ring_needs_only_used_variables(self, ring):
        small = PolyRing(("a", "x"))
        p = ring.parse("x*a + 1")
        assert p.to_ring(small) == small.parse("a*x + 1")
        with pytest.raises(ValidationError):
            ring.parse("y").to_ring(small)

    def test_linear_part_and_degree(self, ring):
        p = ring.parse("3*x - y + x*a + 5")
        assert p.linear_part() == {"x": 3, "y": -1}
        assert p.total_degree() == 2
        assert p.variables() == ["x", "y", "a"]

    def test_sympy_round_trip(self, ring):
        p = ring.parse("x^3 - 2*a*b + 1/5")
        assert ring.from_sympy(p.to_sympy()) == p


class TestMonomialOrder:

    def test_lex_and_grlex(self, ring):
        lex = MonomialOrder.lex("x", "y").key_function(ring)
        grlex = MonomialOrder.grlex("x", "y").key_function(ring)
        x_term, y2_term = (1, 0, 0, 0), (0, 2, 0, 0)
        assert lex(x_term) > lex(y2_term)
        assert grlex(y2_term) > grlex(x_term)

    def test_complete(self, ring):
        order = MonomialOrder.lex("b").complete(ring)
        assert order.precedence == ("b", "x", "y", "a")
        assert default_order(ring).kind == "grlex"

    def test_invalid(self):
        with pytest.raises(ValidationError):
            MonomialOrder("revlex", ("x",))
        with pytest.raises(ValidationError):
            MonomialOrder.lex("x", "x")
