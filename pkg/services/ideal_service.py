"""Ideals over exact rational polynomial rings.

Reduction is done relative to an inner-variable subset: the order compares only inner monomials
and every other variable is carried in the coefficients. With every variable inner this is the
usual multivariate division.
"""
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy

from api.exceptions import NonUnitLeadingCoefficientError, ResourceBudgetExceededError, ValidationError
from services.polynomials import Exponent, MonomialOrder, PolyRing, Polynomial, default_order
from services.settings import DEFAULT_SETTINGS, WorkbenchSettings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DivisionResult:
    remainder: Polynomial
    quotients: Tuple[Polynomial, ...]


def _inner_order(f: Polynomial, inner: Optional[Sequence[str]], order: MonomialOrder) -> MonomialOrder:
    if inner is None:
        return order
    missing = [name for name in inner if name not in order.precedence]
    if missing:
        raise ValidationError(f"order {order.describe()} does not rank inner variables {missing}", field="order")
    return MonomialOrder(order.kind, tuple(name for name in order.precedence if name in set(inner)))


def split_inner(f: Polynomial, positions: Sequence[int]) -> Dict[Exponent, Polynomial]:
    """Group f by inner monomial; keys are full exponent tuples supported on the inner positions."""
    inner = set(positions)
    groups: Dict[Exponent, Dict[Exponent, Fraction]] = {}
    for e, c in f.terms.items():
        inner_part = tuple(k if i in inner else 0 for i, k in enumerate(e))
        outer_part = tuple(0 if i in inner else k for i, k in enumerate(e))
        groups.setdefault(inner_part, {})[outer_part] = c
    return {key: Polynomial(f.ring, terms) for key, terms in groups.items()}


def leading(f: Polynomial, order: MonomialOrder) -> Tuple[Exponent, Polynomial]:
    """Leading inner monomial of f and its coefficient (a polynomial in the other variables)."""
    if f.is_zero:
        raise ValidationError("the zero polynomial has no leading monomial", field="polynomial")
    key = order.key_function(f.ring)
    groups = split_inner(f, order.positions(f.ring))
    top = max(groups, key=key)
    return top, groups[top]


def _divides(small: Exponent, big: Exponent) -> bool:
    return all(a <= b for a, b in zip(small, big))


def _marked(basis: Sequence[Polynomial], order: MonomialOrder):
    marked = []
    for b in basis:
        if b.is_zero:
            continue
        lead, coefficient = leading(b, order)
        if not coefficient.is_constant:
            raise NonUnitLeadingCoefficientError(str(b))
        marked.append((b, lead, coefficient.constant_value()))
    return marked


def divide(f: Polynomial,
           basis: Sequence[Polynomial],
           inner: Optional[Sequence[str]] = None,
           order: Optional[MonomialOrder] = None,
           settings: WorkbenchSettings = DEFAULT_SETTINGS) -> DivisionResult:
    """Division with remainder and cofactors: f = Σ q_i·b_i + remainder.

    Args:
        f: Dividend.
        basis: Divisors; their leading inner coefficients must be nonzero constants.
        inner: Variables compared by the order (defaults to the order's variables).
        order: Monomial order on the inner variables (defaults to grlex over the whole ring).
        settings: Supplies the term cap.

    Returns:
        DivisionResult whose remainder has no inner monomial divisible by a leading monomial.
    """
    ring = f.ring
    order = _inner_order(f, inner, order or default_order(ring))
    key = order.key_function(ring)
    positions = order.positions(ring)
    marked = _marked(basis, order)
    index_of = {id(b): i for i, b in enumerate(basis)}
    quotients = [ring.zero() for _ in basis]

    p, remainder = f, ring.zero()
    while not p.is_zero:
        if len(p.terms) > settings.max_terms:
            raise ResourceBudgetExceededError(f"division produced more than {settings.max_terms} terms")
        groups = split_inner(p, positions)
        top = max(groups, key=key)
        coefficient = groups[top]
        for b, lead, lc in marked:
            if _divides(lead, top):
                shift = ring.monomial(tuple(t - l for t, l in zip(top, lead)))
                factor = coefficient * shift * (1 / lc)
                p = p - factor * b
                quotients[index_of[id(b)]] = quotients[index_of[id(b)]] + factor
                break
        else:
            term = coefficient * ring.monomial(top)
            remainder = remainder + term
            p = p - term
    return DivisionResult(remainder, tuple(quotients))


def normal_form(f: Polynomial,
                basis: Sequence[Polynomial],
                inner: Optional[Sequence[str]] = None,
                order: Optional[MonomialOrder] = None,
                settings: WorkbenchSettings = DEFAULT_SETTINGS) -> Polynomial:
    return divide(f, basis, inner, order, settings).remainder


def coeff_conditions(f: Polynomial, inner: Sequence[str], order: Optional[MonomialOrder] = None) -> List[Polynomial]:
    """Coefficients of f read as a polynomial in the inner variables, highest inner monomial first."""
    if f.is_zero:
        return []
    order = order or MonomialOrder("grlex", tuple(inner))
    order = _inner_order(f, inner, order)
    groups = split_inner(f, order.positions(f.ring))
    key = order.key_function(f.ring)
    return [groups[m] for m in sorted(groups, key=key, reverse=True)]


def monic(f: Polynomial, order: MonomialOrder) -> Polynomial:
    _, coefficient = leading(f, order)
    return f * (1 / coefficient.constant_value())


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    lead_f, lc_f = leading(f, order)
    lead_g, lc_g = leading(g, order)
    lcm = tuple(max(a, b) for a, b in zip(lead_f, lead_g))
    ring = f.ring
    left = ring.monomial(tuple(m - a for m, a in zip(lcm, lead_f)), 1 / lc_f.constant_value())
    right = ring.monomial(tuple(m - b for m, b in zip(lcm, lead_g)), 1 / lc_g.constant_value())
    return left * f - right * g


def buchberger(gens: Sequence[Polynomial],
               order: Optional[MonomialOrder] = None,
               settings: WorkbenchSettings = DEFAULT_SETTINGS,
               reduce: bool = True) -> List[Polynomial]:
    """Gröbner basis of the ideal generated by gens.

    Pairs with coprime leading monomials are skipped. Exceeding the degree, term or pair caps raises
    ResourceBudgetExceeded.
    """
    nonzero = [g for g in gens if not g.is_zero]
    if not nonzero:
        return []
    ring = nonzero[0].ring
    order = (order or default_order(ring)).complete(ring)
    basis = [monic(g, order) for g in nonzero]
    leads = [leading(g, order)[0] for g in basis]
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    processed = 0
    while pairs:
        i, j = pairs.pop(0)
        processed += 1
        if processed > settings.max_pair_count:
            raise ResourceBudgetExceededError(f"more than {settings.max_pair_count} S-pairs")
        if all(a == 0 or b == 0 for a, b in zip(leads[i], leads[j])):
            continue
        r = normal_form(s_polynomial(basis[i], basis[j], order), basis, order=order, settings=settings)
        if r.is_zero:
            continue
        if r.total_degree() > settings.max_total_degree:
            raise ResourceBudgetExceededError(
                f"basis element of degree {r.total_degree()} exceeds the cap {settings.max_total_degree}")
        basis.append(monic(r, order))
        leads.append(leading(basis[-1], order)[0])
        pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
        logger.debug(f"Buchberger: basis size {len(basis)}, {len(pairs)} pairs pending")

    minimal = []
    for k, g in enumerate(basis):
        if any(_divides(leads[m], leads[k]) and (leads[m] != leads[k] or m < k) for m in range(len(basis)) if m != k):
            continue
        minimal.append(g)
    if reduce:
        minimal = [
            monic(normal_form(g, [h for h in minimal if h is not g], order=order, settings=settings), order)
            for g in minimal
        ]
    key = order.key_function(ring)
    return sorted(minimal, key=lambda g: key(leading(g, order)[0]), reverse=True)


def is_groebner_basis(basis: Sequence[Polynomial], order: MonomialOrder,
                      settings: WorkbenchSettings = DEFAULT_SETTINGS) -> bool:
    """Every S-polynomial reduces to zero."""
    return all(
        normal_form(s_polynomial(f, g, order), basis, order=order, settings=settings).is_zero
        for i, f in enumerate(basis) for g in basis[i + 1:]
    )


class Ideal:
    """Generator list with Gröbner bases cached per monomial order."""

    def __init__(self, ring: PolyRing, gens: Sequence[Polynomial]):
        self.ring = ring
        self.gens: Tuple[Polynomial, ...] = tuple(g.to_ring(ring) for g in gens if not g.is_zero)
        self._bases: Dict[MonomialOrder, List[Polynomial]] = {}

    def groebner(self, order: Optional[MonomialOrder] = None,
                 settings: WorkbenchSettings = DEFAULT_SETTINGS) -> List[Polynomial]:
        order = (order or default_order(self.ring)).complete(self.ring)
        if order not in self._bases:
            self._bases[order] = buchberger(self.gens, order, settings)
        return self._bases[order]

    def contains(self, f: Polynomial, order: Optional[MonomialOrder] = None,
                 settings: WorkbenchSettings = DEFAULT_SETTINGS) -> bool:
        order = (order or default_order(self.ring)).complete(self.ring)
        basis = self.groebner(order, settings)
        return normal_form(f.to_ring(self.ring), basis, order=order, settings=settings).is_zero

    @property
    def is_unit(self) -> bool:
        return any(g.is_constant for g in self.groebner())

    def to_json(self) -> Dict[str, object]:
        return {"vars": list(self.ring.names), "gens": [str(g) for g in self.gens]}

    def __repr__(self) -> str:
        return f"Ideal({', '.join(str(g) for g in self.gens)})"


def ideal_from_json(data: Union[str, Dict[str, object]], namespace: str = "") -> Ideal:
    """Read {"vars": [...], "gens": [...]}."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise ValidationError(f"ideal is not valid JSON: {e}", field="ideal")
    if not isinstance(data, dict) or not isinstance(data.get("vars"), list) or not isinstance(data.get("gens"), list):
        raise ValidationError('expected {"vars": [...], "gens": [...]}', field="ideal")
    ring = PolyRing(tuple(str(v) for v in data["vars"]), namespace)
    return Ideal(ring, [ring.parse(str(text)) for text in data["gens"]])


def ideal_member(f: Polynomial, ideal: Ideal, order: Optional[MonomialOrder] = None,
                 settings: WorkbenchSettings = DEFAULT_SETTINGS) -> bool:
    return ideal.contains(f, order, settings)


def ideal_contains(big: Ideal, small: Ideal, order: Optional[MonomialOrder] = None,
                   settings: WorkbenchSettings = DEFAULT_SETTINGS) -> List[Polynomial]:
    """Generators of small lying outside big (empty when small ⊆ big)."""
    return [g for g in small.gens if not big.contains(g, order, settings)]


def ideal_equal(first: Ideal, second: Ideal, order: Optional[MonomialOrder] = None,
                settings: WorkbenchSettings = DEFAULT_SETTINGS) -> bool:
    """Mutual membership of generators."""
    return not ideal_contains(first, second, order, settings) and not ideal_contains(second, first, order, settings)


def _with_tag(ring: PolyRing) -> Tuple[PolyRing, str]:
    tag = "t"
    while tag in ring.names:
        tag += "_"
    return ring.extend([tag]), tag


def intersect(first: Ideal, second: Ideal, settings: WorkbenchSettings = DEFAULT_SETTINGS) -> Ideal:
    """I ∩ J by eliminating t from t·I + (1 − t)·J."""
    ring = first.ring
    big, tag = _with_tag(ring)
    t = big.var(tag)
    gens = [t * g.to_ring(big) for g in first.gens] + [(1 - t) * g.to_ring(big) for g in second.gens]
    order = MonomialOrder("lex", (tag,) + ring.names)
    basis = buchberger(gens, order, settings)
    tag_index = big.index(tag)
    kept = [g for g in basis if all(e[tag_index] == 0 for e in g.terms)]
    return Ideal(ring, [Polynomial(ring, {e[:tag_index] + e[tag_index + 1:]: c for e, c in g.terms.items()})
                        for g in kept])


def exact_quotient(f: Polynomial, g: Polynomial, settings: WorkbenchSettings = DEFAULT_SETTINGS) -> Polynomial:
    result = divide(f, [g], settings=settings)
    if not result.remainder.is_zero:
        raise ValidationError(f"{g} does not divide {f}", field="polynomial")
    return result.quotients[0]


def colon_ideal(first: Ideal, second: Ideal, settings: WorkbenchSettings = DEFAULT_SETTINGS) -> Ideal:
    """(I : J) = {f : f·J ⊆ I}, as the intersection of the (I : g) over the generators g of J."""
    ring = first.ring
    result: Optional[Ideal] = None
    for g in second.gens:
        g = g.to_ring(ring)
        if g.is_constant:
            part = Ideal(ring, first.gens)
        else:
            meet = intersect(first, Ideal(ring, [g]), settings)
            part = Ideal(ring, [exact_quotient(h, g, settings) for h in meet.gens])
        result = part if result is None else intersect(result, part, settings)
    if result is None:
        return Ideal(ring, [ring.const(1)])
    return Ideal(ring, buchberger(result.gens, settings=settings))


def _rational(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


@dataclass(frozen=True)
class JacobianRank:
    rank: int
    pivots: Tuple[str, ...]
    free: Tuple[str, ...]


def jacobian_rank_at_origin(gens: Sequence[Polynomial], variables: Sequence[str],
                            preferred_free: Sequence[str] = ()) -> JacobianRank:
    """Rank of the linear parts at the origin, with a pivot set and its complement.

    Columns outside preferred_free are eliminated first, so when the system is invertible on the
    complement of preferred_free those variables are exactly the pivots.
    """
    columns = [v for v in variables if v not in set(preferred_free)] + [v for v in variables if v in set(preferred_free)]
    rows = []
    for g in gens:
        part = g.linear_part()
        rows.append([_rational(part.get(v, Fraction(0))) for v in columns])
    if not rows:
        return JacobianRank(0, (), tuple(variables))
    _, pivot_columns = sympy.Matrix(rows).rref()
    pivots = {columns[k] for k in pivot_columns}
    return JacobianRank(
        len(pivot_columns),
        tuple(v for v in variables if v in pivots),
        tuple(v for v in variables if v not in pivots),
    )
