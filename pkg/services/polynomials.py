"""Exact multivariate polynomials over the rationals.

Polynomials live in a PolyRing (an ordered tuple of variable names tagged with a namespace) and
store a map exponent-tuple -> Fraction with no zero coefficients. Text input goes through sympy.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from tokenize import TokenError
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from api.exceptions import ValidationError

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]

_TRANSFORMATIONS = standard_transformations + (convert_xor,)


@dataclass(frozen=True)
class PolyRing:
    """Variable table: names in a fixed ring order, plus the chart they belong to."""
    names: Tuple[str, ...]
    namespace: str = ""

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValidationError(f"duplicate variable names in {list(self.names)}", field="vars")
        for name in self.names:
            if not name.isidentifier():
                raise ValidationError(f"'{name}' is not a valid variable name", field="vars")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._positions()[name]
        except KeyError:
            raise ValidationError(f"unknown variable '{name}' in ring {self.namespace or list(self.names)}",
                                  field="vars")

    def _positions(self) -> Dict[str, int]:
        return _positions(self.names)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def const(self, value: Scalar) -> "Polynomial":
        value = Fraction(value)
        return Polynomial(self, {(0,) * self.nvars: value} if value else {})

    def var(self, name: str) -> "Polynomial":
        exps = [0] * self.nvars
        exps[self.index(name)] = 1
        return Polynomial(self, {tuple(exps): Fraction(1)})

    def vars(self, *names: str) -> List["Polynomial"]:
        return [self.var(name) for name in names]

    def monomial(self, exps: Exponent, coefficient: Scalar = 1) -> "Polynomial":
        coefficient = Fraction(coefficient)
        return Polynomial(self, {tuple(exps): coefficient} if coefficient else {})

    def extend(self, names: Iterable[str], namespace: Optional[str] = None) -> "PolyRing":
        extra = tuple(name for name in names if name not in self._positions())
        return PolyRing(self.names + extra, self.namespace if namespace is None else namespace)

    def symbols(self) -> Tuple[sympy.Symbol, ...]:
        return tuple(sympy.Symbol(name) for name in self.names)

    def parse(self, text: str) -> "Polynomial":
        """Parse text such as "u - a + c*v" or "x^2 + a*x + b"."""
        symbols = self.symbols()
        local = {name: symbol for name, symbol in zip(self.names, symbols)}
        try:
            expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMATIONS, evaluate=True)
        except (SyntaxError, TokenError, TypeError, ValueError, sympy.SympifyError) as e:
            raise ValidationError(f"cannot parse polynomial '{text}': {e}", field="polynomial")
        unknown = {str(s) for s in expr.free_symbols} - set(self.names)
        if unknown:
            raise ValidationError(f"'{text}' uses variables outside the ring: {sorted(unknown)}", field="polynomial")
        return self.from_sympy(expr)

    def from_sympy(self, expr) -> "Polynomial":
        try:
            poly = sympy.Poly(sympy.expand(expr), *self.symbols(), domain="QQ")
        except sympy.PolynomialError as e:
            raise ValidationError(f"'{expr}' is not a polynomial: {e}", field="polynomial")
        terms = {}
        for monom, coeff in poly.terms():
            rational = sympy.Rational(coeff)
            terms[tuple(int(e) for e in monom)] = Fraction(int(rational.p), int(rational.q))
        return Polynomial(self, terms)


@lru_cache(maxsize=None)
def _positions(names: Tuple[str, ...]) -> Dict[str, int]:
    return {name: i for i, name in enumerate(names)}


class Polynomial:
    """Immutable polynomial; arithmetic requires both operands to share the ring."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[Exponent, Fraction]):
        self.ring = ring
        self.terms: Dict[Exponent, Fraction] = {e: Fraction(c) for e, c in terms.items() if c}

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring.names != self.ring.names:
                raise ValidationError("polynomials belong to different rings", field="polynomial")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValidationError("polynomial powers need a non-negative integer exponent", field="exponent")
        result = self.ring.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring.names == other.ring.names and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring.names, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def variables(self) -> List[str]:
        used = {i for e in self.terms for i, k in enumerate(e) if k}
        return [self.ring.names[i] for i in sorted(used)]

    def linear_part(self) -> Dict[str, Fraction]:
        """Coefficients of the degree-one monomials."""
        part = {}
        for e, c in self.terms.items():
            if sum(e) == 1:
                part[self.ring.names[e.index(1)]] = c
        return part

    def scale(self, factor: Scalar) -> "Polynomial":
        return self * Fraction(factor)

    def substitute(self, values: Mapping[str, Union["Polynomial", Scalar]]) -> "Polynomial":
        """Replace variables by polynomials (same ring) or rational numbers."""
        replaced = {self.ring.index(name): (v if isinstance(v, Polynomial) else self.ring.const(v))
                    for name, v in values.items()}
        result = self.ring.zero()
        power_cache: Dict[Tuple[int, int], Polynomial] = {}
        for e, c in self.terms.items():
            kept = list(e)
            term = self.ring.const(c)
            for i, k in enumerate(e):
                if k and i in replaced:
                    kept[i] = 0
                    key = (i, k)
                    if key not in power_cache:
                        power_cache[key] = replaced[i] ** k
                    term = term * power_cache[key]
            result = result + term * self.ring.monomial(tuple(kept))
        return result

    def to_ring(self, ring: PolyRing) -> "Polynomial":
        """Move into another ring containing every variable used here."""
        if ring.names == self.ring.names:
            return self
        positions = {i: ring.index(self.ring.names[i]) for e in self.terms for i, k in enumerate(e) if k}
        terms = {}
        for e, c in self.terms.items():
            image = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    image[positions[i]] = k
            terms[tuple(image)] = c
        return Polynomial(ring, terms)

    def to_sympy(self):
        symbols = self.ring.symbols()
        expr = sympy.Integer(0)
        for e, c in self.terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for symbol, k in zip(symbols, e):
                if k:
                    term *= symbol ** k
            expr += term
        return expr

    def _monomial_text(self, e: Exponent) -> str:
        factors = []
        for name, k in zip(self.ring.names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        return "*".join(factors)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ordered = sorted(self.terms.items(), key=lambda item: (-sum(item[0]), tuple(-k for k in item[0])))
        parts = []
        for e, c in ordered:
            monomial = self._monomial_text(e)
            magnitude = abs(c)
            if not monomial:
                body = str(magnitude)
            elif magnitude == 1:
                body = monomial
            else:
                body = f"{magnitude}*{monomial}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


@dataclass(frozen=True)
class MonomialOrder:
    """Lex or graded-lex order over the listed variables, highest precedence first.

    Variables absent from the precedence list are ignored by the order; such an order compares
    monomials in a designated inner subset and leaves the remaining variables as coefficients.
    """
    kind: str
    precedence: Tuple[str, ...]

    def __post_init__(self):
        if self.kind not in ("lex", "grlex"):
            raise ValidationError(f"unknown monomial order '{self.kind}'", field="order")
        if len(set(self.precedence)) != len(self.precedence):
            raise ValidationError("monomial order lists a variable twice", field="order")

    @classmethod
    def lex(cls, *names: str) -> "MonomialOrder":
        return cls("lex", tuple(names))

    @classmethod
    def grlex(cls, *names: str) -> "MonomialOrder":
        return cls("grlex", tuple(names))

    def positions(self, ring: PolyRing) -> Tuple[int, ...]:
        return tuple(ring.index(name) for name in self.precedence)

    def complete(self, ring: PolyRing) -> "MonomialOrder":
        """Same kind, extended by the ring's remaining variables in ring order."""
        missing = tuple(name for name in ring.names if name not in self.precedence)
        return MonomialOrder(self.kind, self.precedence + missing) if missing else self

    def key_function(self, ring: PolyRing):
        """Sort key on full exponent tuples, looking only at the ordered variables."""
        positions = self.positions(ring)
        if self.kind == "lex":
            return lambda e: tuple(e[i] for i in positions)
        return lambda e: (sum(e[i] for i in positions),) + tuple(e[i] for i in positions)

    def describe(self) -> str:
        return f"{self.kind}({' > '.join(self.precedence)})"


def default_order(ring: PolyRing) -> MonomialOrder:
    return MonomialOrder("grlex", ring.names)


def parse_polynomials(ring: PolyRing, texts: Sequence[str]) -> List[Polynomial]:
    return [ring.parse(text) for text in texts]
