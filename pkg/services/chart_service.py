"""Universal-ideal charts and the incidence-locus verifications built on them.

Three targets are checked:

- R_12_123: the locus of Hilb² × Hilb³ over which I_123 ⊂ I_12, around (x², y) ⊂ (x², xy, y²);
- R1_123: the locus over which J ⊂ I^1 (a doublet of doublets inside the triple);
- R123_123: the locus over which J ⊂ I^123 (the triple doublet inside the triple).

The Hilb³ chart carries w, w1, w2 which are functions of u, u1, u2, v, v1, v2; they are recovered
from the two syzygies of the universal ideal.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from api.exceptions import (
    InconsistentSyzygyError,
    NotZeroDimensionalError,
    ValidationError,
    VerificationMismatchError,
)
from services.ideal_service import (
    Ideal,
    JacobianRank,
    buchberger,
    coeff_conditions,
    is_groebner_basis,
    jacobian_rank_at_origin,
    leading,
    normal_form,
    split_inner,
)
from services.polynomials import MonomialOrder, PolyRing, Polynomial
from services.settings import DEFAULT_SETTINGS, WorkbenchSettings

logger = logging.getLogger(__name__)

HILB3_PARAMETERS = ("u", "u1", "u2", "v", "v1", "v2")
W_NAMES = ("w", "w1", "w2")
HILB2_PARAMETERS = ("a", "b", "c", "d")


class ChartTarget(str, Enum):
    R_12_123 = "R_12_123"
    R1_123 = "R1_123"
    R123_123 = "R123_123"


class WMode(str, Enum):
    SUBSTITUTED = "substituted"
    SYMBOLIC = "symbolic-w"


# the locus over which I_123 ⊂ I_12, as quoted; J for the other two targets
J_GENERATORS = ("u - a + c*v", "b - d*v - w", "u1 - a*c + c*v1 + d", "2*c*d + c*v2 + u2 - a*c^2")

QUOTED_GENERATORS = {
    ChartTarget.R_12_123: J_GENERATORS,
    ChartTarget.R1_123: (
        "e - v", "u - f", "g - l*v", "h - w - v*m", "l + v1 - f - e*i", "m + u1 - e*j",
        "i*(l - v1) + 2*m + v2 - e*j", "j*(l - v1) + u2",
    ),
    ChartTarget.R123_123: (
        "e", "g - u", "f - v", "v*o - h", "v*p - i", "v*q + w - j", "o - f", "p + v1 - g", "q + u1",
        "(2*o - f)*l + 2*p - g", "(2*o - f)*m + 2*q + v2", "(2*o - f)*n + u2",
    ),
}

INNER_BASES = {
    ChartTarget.R1_123: ("a - e*c - f", "b - g*c - h", "c^2 - i*c - j", "d - l*c - m"),
    ChartTarget.R123_123: ("a - e*c^2 - f*c - g", "b - h*c^2 - i*c - j", "c^3 - l*c^2 - m*c - n", "d - o*c^2 - p*c - q"),
}

INNER_ORDERS = {
    ChartTarget.R1_123: MonomialOrder.grlex("a", "b", "d", "c"),
    ChartTarget.R123_123: MonomialOrder.lex("a", "b", "d", "c"),
}

CHART_PARAMETERS = {
    ChartTarget.R1_123: ("e", "f", "g", "h", "i", "j", "l", "m"),
    ChartTarget.R123_123: ("e", "f", "g", "h", "i", "j", "l", "m", "n", "o", "p", "q"),
}

EXPECTED_FREE = {
    ChartTarget.R_12_123: ("a", "c", "d", "v", "v1", "v2"),
    ChartTarget.R1_123: ("u1", "v1", "e", "f", "i", "j"),
    ChartTarget.R123_123: ("l", "m", "n", "o", "p", "q"),
}

# lex orders in which both sides of each ideal equality have a quick Gröbner basis
ELIMINATION_ORDERS = {
    ChartTarget.R_12_123: ("b", "u2", "u1", "u"),
    ChartTarget.R1_123: ("h", "g", "v2", "u2", "l", "m", "u", "v", "e", "f", "i", "j", "u1", "v1"),
    ChartTarget.R123_123: ("j", "h", "i", "u", "v1", "g", "u1", "v2", "u2", "v", "f", "e",
                           "l", "m", "n", "o", "p", "q"),
}

# intermediate division identities: lhs ≡ rhs modulo the inner basis
REPLAY_IDENTITIES = {
    ChartTarget.R1_123: (
        ("c*v + u - a", "(u - f) + c*(v - e)"),
        ("d*v + w - b", "l*c*v + m*v + w - g*c - h"),
        ("d + c*v1 + u1 - a*c", "l*c + m + c*v1 + u1 - f*c - e*i*c - e*j"),
    ),
    ChartTarget.R123_123: (
        ("c*v + u - a", "c*v + u - e*c^2 - f*c - g"),
        ("d*v + w - b", "v*o*c^2 + p*c*v + q*v + w - h*c^2 - i*c - j"),
    ),
}


def extra_coordinates(dim: int) -> List[int]:
    return list(range(3, dim + 1))


@dataclass(frozen=True)
class Chart:
    """A pair of universal ideals and the division data for their incidence locus."""
    target: ChartTarget
    dim: int
    ring: PolyRing
    inner: Tuple[str, ...]
    order: MonomialOrder
    outer_gens: Tuple[Polynomial, ...]
    inner_basis: Tuple[Polynomial, ...]
    parameters: Tuple[str, ...]
    expected_free: Tuple[str, ...]
    quoted_generators: Tuple[Polynomial, ...]
    elimination: Tuple[str, ...]

    def ideal(self, gens: Sequence[Polynomial]) -> Ideal:
        return Ideal(self.ring, gens)


@dataclass
class VerificationReport:
    target: str
    dim: int
    mode: str
    variables: List[str]
    computed_generators: List[str]
    quoted_generators: List[str]
    quoted_generators_contained: bool
    missing_generators: List[str]
    extra_generators_absorbed: Optional[bool]
    unabsorbed_generators: List[str]
    jacobian_rank: int
    smooth_dimension: int
    expected_dimension: int
    free_variables: List[str]
    expected_free_variables: List[str]
    free_variable_check: bool
    replay_identities_hold: Optional[bool] = None
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.quoted_generators_contained
            and self.extra_generators_absorbed is not False
            and self.smooth_dimension == self.expected_dimension
            and self.free_variable_check
            and self.replay_identities_hold is not False
        )


def _solve_linear(equations: Sequence[Polynomial], unknowns: Sequence[str]) -> Dict[str, Polynomial]:
    """Solve Σ a_j·W_j + b = 0 for constant a_j and polynomial b."""
    ring = equations[0].ring
    positions = [ring.index(name) for name in unknowns]
    rows = []
    for eq in equations:
        coefficients = [Fraction(0)] * len(unknowns)
        rest = {}
        for e, c in eq.terms.items():
            degrees = [e[p] for p in positions]
            if not any(degrees):
                rest[e] = c
            elif sum(degrees) == 1 and sum(e) == 1:
                coefficients[degrees.index(1)] = c
            else:
                raise InconsistentSyzygyError(f"syzygy condition {eq} is not linear in {list(unknowns)}")
        rows.append([coefficients, -Polynomial(ring, rest)])

    solution: Dict[str, Polynomial] = {}
    pending = list(rows)
    pivots = []
    for col in range(len(unknowns)):
        pivot = next((row for row in pending if row[0][col] != 0), None)
        if pivot is None:
            raise InconsistentSyzygyError(f"{unknowns[col]} is not determined by the syzygies")
        pending = [row for row in pending if row is not pivot]
        scale = pivot[0][col]
        pivot[0] = [c / scale for c in pivot[0]]
        pivot[1] = pivot[1] * (1 / scale)
        for row in pending + pivots:
            factor = row[0][col]
            if factor:
                row[0] = [a - factor * b for a, b in zip(row[0], pivot[0])]
                row[1] = row[1] - pivot[1] * factor
        pivots.append(pivot)
    for coefficients, rhs in pending:
        if any(coefficients) or not rhs.is_zero:
            raise InconsistentSyzygyError(f"syzygy conditions disagree: 0 = {rhs}")
    for pivot in pivots:
        col = next(k for k, c in enumerate(pivot[0]) if c)
        solution[unknowns[col]] = pivot[1]
    return solution


class ChartService:
    """Builds the charts and runs their verifications."""

    def __init__(self, settings: WorkbenchSettings = DEFAULT_SETTINGS):
        self.settings = settings
        self._w: Optional[Dict[str, Polynomial]] = None

    def solve_w(self) -> Dict[str, Polynomial]:
        """w, w1, w2 as polynomials in u, u1, u2, v, v1, v2.

        Both syzygies y·F1 − x·F2 and y·F2 − x·F3 must reduce to zero modulo (F1, F2, F3); the
        x and y coefficients of the remainders are linear in the unknown constant terms, and the
        constant coefficients must then vanish identically.
        """
        if self._w is not None:
            return self._w
        unknowns = ("W0", "W1", "W2")
        ring = PolyRing(("x", "y") + HILB3_PARAMETERS + unknowns, "syzygy")
        x, y = ring.vars("x", "y")
        u, u1, u2, v, v1, v2 = ring.vars(*HILB3_PARAMETERS)
        w0, w1, w2 = ring.vars(*unknowns)
        basis = [x ** 2 + u * x + v * y + w0, x * y + u1 * x + v1 * y + w1, y ** 2 + u2 * x + v2 * y + w2]
        order = MonomialOrder.grlex("x", "y")
        x_key = next(iter(x.terms))
        y_key = next(iter(y.terms))

        linear, constant = [], []
        for syzygy in (y * basis[0] - x * basis[1], y * basis[1] - x * basis[2]):
            remainder = normal_form(syzygy, basis, inner=("x", "y"), order=order, settings=self.settings)
            groups = split_inner(remainder, (0, 1))
            linear += [groups.get(x_key, ring.zero()), groups.get(y_key, ring.zero())]
            constant.append(groups.get((0,) * ring.nvars, ring.zero()))
            if set(groups) - {x_key, y_key, (0,) * ring.nvars}:
                raise InconsistentSyzygyError(f"syzygy remainder {remainder} is not linear in x, y")

        solution = _solve_linear(linear, unknowns)
        values = {name: solution[name] for name in unknowns}
        for condition in linear + constant:
            if not condition.substitute(values).is_zero:
                raise InconsistentSyzygyError(f"condition {condition} does not vanish")

        target = PolyRing(HILB3_PARAMETERS, "hilb3")
        self._w = {name: solution[unknown].to_ring(target) for name, unknown in zip(W_NAMES, unknowns)}
        logger.debug("Derived " + ", ".join(f"{k} = {p}" for k, p in self._w.items()))
        return self._w

    def w_values(self, ring: PolyRing) -> Dict[str, Polynomial]:
        return {name: p.to_ring(ring) for name, p in self.solve_w().items()}

    def hilb3_generators(self, ring: PolyRing, substituted: bool = True) -> List[Polynomial]:
        """F1, F2, F3 of the Hilb³ chart around (x², xy, y²)."""
        x, y = ring.vars("x", "y")
        u, u1, u2, v, v1, v2 = ring.vars(*HILB3_PARAMETERS)
        if substituted:
            w = self.w_values(ring)
            w0, w1, w2 = w["w"], w["w1"], w["w2"]
        else:
            w0, w1, w2 = ring.vars(*W_NAMES)
        return [x ** 2 + u * x + v * y + w0, x * y + u1 * x + v1 * y + w1, y ** 2 + u2 * x + v2 * y + w2]

    @staticmethod
    def hilb2_generators(ring: PolyRing) -> List[Polynomial]:
        """x² + ax + b, y − cx − d: the Hilb² chart around (x², y)."""
        x, y = ring.vars("x", "y")
        a, b, c, d = ring.vars(*HILB2_PARAMETERS)
        return [x ** 2 + a * x + b, y - c * x - d]

    def plane_ring(self) -> PolyRing:
        return PolyRing(("x", "y") + HILB2_PARAMETERS + HILB3_PARAMETERS + W_NAMES, "plane")

    def build_chart(self, target: ChartTarget, dim: int = 2, mode: WMode = WMode.SUBSTITUTED) -> Chart:
        target, mode = ChartTarget(target), WMode(mode)
        if dim < 2:
            raise ValidationError("dim must be at least 2", field="dim")
        if target != ChartTarget.R_12_123 and dim != 2:
            raise ValidationError(f"{target.value} is only available for dim = 2", field="dim")
        substituted = mode == WMode.SUBSTITUTED

        if target == ChartTarget.R_12_123:
            extra = extra_coordinates(dim)
            z_names = tuple(f"z{i}" for i in reversed(extra))
            families = tuple(f"{prefix}{i}" for i in extra for prefix in ("e", "f", "rho", "sigma", "theta"))
            ring = PolyRing(("x", "y") + z_names + HILB2_PARAMETERS + HILB3_PARAMETERS + families + W_NAMES,
                            f"{target.value}/dim{dim}")
            x, y = ring.vars("x", "y")
            c, d = ring.vars("c", "d")
            inner_basis = self.hilb2_generators(ring)
            outer = self.hilb3_generators(ring, substituted)
            quoted = [ring.parse(text) for text in J_GENERATORS]
            for i in extra:
                z, e_i, f_i, rho, sigma, theta = ring.vars(f"z{i}", f"e{i}", f"f{i}", f"rho{i}", f"sigma{i}", f"theta{i}")
                inner_basis.append(z - e_i * x - f_i)
                outer.append(z - rho * x - sigma * y - theta)
                quoted += [e_i - rho - sigma * c, f_i - sigma * d - theta]
            inner = z_names + ("y", "x")
            order = MonomialOrder.grlex(*inner)
            parameters = HILB2_PARAMETERS + HILB3_PARAMETERS + families
            expected_free = EXPECTED_FREE[target] + tuple(
                f"{prefix}{i}" for i in extra for prefix in ("rho", "sigma", "theta"))
            elimination = ELIMINATION_ORDERS[target] + tuple(f"{prefix}{i}" for i in extra for prefix in ("e", "f"))
        else:
            ring = PolyRing(HILB2_PARAMETERS + HILB3_PARAMETERS + CHART_PARAMETERS[target] + W_NAMES, target.value)
            inner_basis = [ring.parse(text) for text in INNER_BASES[target]]
            outer = [ring.parse(text) for text in J_GENERATORS]
            quoted = [ring.parse(text) for text in QUOTED_GENERATORS[target]]
            inner = HILB2_PARAMETERS
            order = INNER_ORDERS[target]
            parameters = HILB3_PARAMETERS + CHART_PARAMETERS[target]
            expected_free = EXPECTED_FREE[target]
            elimination = ELIMINATION_ORDERS[target]

        if substituted:
            values = self.w_values(ring)
            outer = [g.substitute(values) for g in outer]
            quoted = [g.substitute(values) for g in quoted]
        else:
            parameters = parameters + W_NAMES
            elimination = W_NAMES + elimination

        return Chart(target, dim, ring, tuple(inner), order, tuple(outer), tuple(inner_basis), parameters,
                     expected_free, tuple(quoted), elimination)

    def incidence_locus(self, outer: Sequence[Polynomial], inner_basis: Sequence[Polynomial],
                        inner: Sequence[str], order: MonomialOrder) -> Ideal:
        """Ideal of the coefficient conditions of the normal forms of outer modulo inner_basis."""
        conditions: List[Polynomial] = []
        for g in outer:
            remainder = normal_form(g, inner_basis, inner=inner, order=order, settings=self.settings)
            for condition in coeff_conditions(remainder, inner, order):
                if not condition.is_zero and condition not in conditions:
                    conditions.append(condition)
        ring = outer[0].ring if outer else inner_basis[0].ring
        return Ideal(ring, conditions)

    def chart_locus(self, chart: Chart) -> Ideal:
        return self.incidence_locus(chart.outer_gens, chart.inner_basis, chart.inner, chart.order)

    def inner_basis_is_groebner(self, chart: Chart) -> bool:
        return is_groebner_basis(list(chart.inner_basis), chart.order, self.settings)

    def replay_identities(self, chart: Chart) -> List[Tuple[str, str, bool]]:
        """Check each quoted division step as a congruence modulo the inner basis."""
        results = []
        for lhs, rhs in REPLAY_IDENTITIES.get(chart.target, ()):
            difference = chart.ring.parse(lhs) - chart.ring.parse(rhs)
            reduced = normal_form(difference, chart.inner_basis, inner=chart.inner, order=chart.order,
                                  settings=self.settings)
            results.append((lhs, rhs, reduced.is_zero))
        return results

    def build_report(self, target: ChartTarget, dim: int = 2, mode: WMode = WMode.SUBSTITUTED) -> VerificationReport:
        """Run every check for one target without raising on failure."""
        mode = WMode(mode)
        chart = self.build_chart(target, dim, mode)
        computed = self.chart_locus(chart)
        quoted = chart.ideal(chart.quoted_generators)
        order = MonomialOrder("lex", chart.elimination)

        missing = [g for g in quoted.gens if not computed.contains(g, order, self.settings)]
        notes = []
        if mode == WMode.SUBSTITUTED:
            unabsorbed = [g for g in computed.gens if not quoted.contains(g, order, self.settings)]
            absorbed: Optional[bool] = not unabsorbed
            jacobian_source = chart
            jacobian_gens = computed.gens
        else:
            unabsorbed = []
            absorbed = None
            notes.append("w, w1, w2 kept as variables; Jacobian data taken from the substituted chart")
            jacobian_source = self.build_chart(target, dim, WMode.SUBSTITUTED)
            jacobian_gens = self.chart_locus(jacobian_source).gens

        variables = list(jacobian_source.parameters)
        jacobian: JacobianRank = jacobian_rank_at_origin(jacobian_gens, variables, jacobian_source.expected_free)
        complement = [v for v in variables if v not in set(jacobian_source.expected_free)]
        free_check = set(jacobian.pivots) == set(complement) and jacobian.rank == len(complement)

        replay = self.replay_identities(chart)
        report = VerificationReport(
            target=chart.target.value,
            dim=dim,
            mode=mode.value,
            variables=variables,
            computed_generators=[str(g) for g in computed.gens],
            quoted_generators=[str(g) for g in quoted.gens],
            quoted_generators_contained=not missing,
            missing_generators=[str(g) for g in missing],
            extra_generators_absorbed=absorbed,
            unabsorbed_generators=[str(g) for g in unabsorbed],
            jacobian_rank=jacobian.rank,
            smooth_dimension=len(variables) - jacobian.rank,
            expected_dimension=3 * dim,
            free_variables=list(jacobian.free),
            expected_free_variables=list(jacobian_source.expected_free),
            free_variable_check=free_check,
            replay_identities_hold=all(ok for *_, ok in replay) if replay else None,
            notes=notes,
        )
        logger.info(f"Chart {report.target} (dim {dim}, {report.mode}): rank {report.jacobian_rank}, "
                    f"dimension {report.smooth_dimension}, passed={report.passed}")
        return report

    def verify_chart(self, target: ChartTarget, dim: int = 2, mode: WMode = WMode.SUBSTITUTED) -> VerificationReport:
        """Verified report, or VerificationMismatch naming the first failing generator."""
        report = self.build_report(target, dim, mode)
        if report.missing_generators:
            raise VerificationMismatchError(
                f"{report.missing_generators[0]} is not in the computed locus of {report.target}",
                {"target": report.target, "generator": report.missing_generators[0]})
        if report.unabsorbed_generators:
            raise VerificationMismatchError(
                f"{report.unabsorbed_generators[0]} is not in the ideal of the quoted generators of {report.target}",
                {"target": report.target, "generator": report.unabsorbed_generators[0]})
        if not report.passed:
            raise VerificationMismatchError(
                f"{report.target}: dimension {report.smooth_dimension} (expected {report.expected_dimension}), "
                f"free variables {report.free_variables}",
                {"target": report.target, "jacobian_rank": report.jacobian_rank})
        return report

    def colength_probe(self, ideal: Ideal, values: Mapping[str, Fraction],
                       plane: Tuple[str, str] = ("x", "y")) -> int:
        """Dimension of k[x, y]/I after specializing every other variable of the ideal's ring."""
        plane_ring = PolyRing(tuple(plane), "colength")
        specialized = [g.substitute(values).to_ring(plane_ring) for g in ideal.gens]
        order = MonomialOrder.grlex(*plane)
        basis = buchberger(specialized, order, self.settings)
        if not basis:
            raise NotZeroDimensionalError("the zero ideal has infinite colength")
        leads = [leading(g, order)[0] for g in basis]
        if any(not any(e) for e in leads):
            return 0
        bounds = []
        for axis in range(2):
            powers = [e[axis] for e in leads if e[1 - axis] == 0]
            if not powers:
                raise NotZeroDimensionalError(f"no pure power of {plane[axis]} among the leading monomials")
            bounds.append(min(powers))
        return sum(
            1
            for i in range(bounds[0])
            for j in range(bounds[1])
            if not any(e[0] <= i and e[1] <= j for e in leads)
        )

    def random_parameters(self, names: Sequence[str], rng: np.random.Generator) -> Dict[str, Fraction]:
        return {name: Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) for name in names}
