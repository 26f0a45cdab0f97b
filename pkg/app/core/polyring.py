"""Exact sparse multivariate polynomials over the rationals.

``RatPoly`` wraps a sympy ``Poly`` over ``QQ`` together with an explicit,
ordered variable universe. Values are immutable; every operation returns a new
polynomial. Coefficients cross the public boundary as ``fractions.Fraction``.

Term order is lexicographic on the declared variable order; it drives printing
and the sign normalization of gcds and factors.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import sympy
from sympy import QQ, Poly, Symbol
from sympy.polys.polyerrors import ExactQuotientFailed

from app.core.exceptions import (
    ConstantDivisorError,
    DivisionByZeroError,
    NotDivisibleError,
    NotUnivariateError,
    UndeclaredVariableError,
    VariableMismatchError,
    ZeroPolynomialError,
)

Coefficient = Union[int, Fraction]
Monomial = Tuple[int, ...]
# Orders of vanishing are non-negative ints, or math.inf for the zero polynomial.
Order = Union[int, float]
INFINITY = math.inf


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions, "a/b" strings and sympy rationals to a Fraction"""
    if isinstance(value, bool):
        raise TypeError("booleans are not rational numbers")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _sympy_rational(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def _symbols(variables: Sequence[str]) -> Tuple[Symbol, ...]:
    return tuple(Symbol(name) for name in variables)


class SquareFreeDecomposition(NamedTuple):
    content: Fraction
    factors: List[Tuple["RatPoly", int]]


class RatPoly:
    """A polynomial with rational coefficients in a fixed, ordered set of variables"""

    __slots__ = ("_variables", "_poly")

    def __init__(self, poly: Poly, variables: Sequence[str]):
        self._variables = tuple(variables)
        self._poly = poly

    # ============ CONSTRUCTION ============

    @staticmethod
    def check_variables(variables: Sequence[str]) -> Tuple[str, ...]:
        variables = tuple(variables)
        if not variables:
            raise UndeclaredVariableError("a polynomial needs at least one declared variable")
        if len(set(variables)) != len(variables):
            raise VariableMismatchError(f"duplicate variable names in {list(variables)}")
        for name in variables:
            if not name.isidentifier():
                raise UndeclaredVariableError(f"{name!r} is not a valid variable name")
        return variables

    @classmethod
    def from_expr(cls, expr, variables: Sequence[str]) -> "RatPoly":
        variables = cls.check_variables(variables)
        return cls(Poly(expr, *_symbols(variables), domain=QQ), variables)

    @classmethod
    def from_terms(cls, terms: Mapping[Monomial, Coefficient], variables: Sequence[str]) -> "RatPoly":
        variables = cls.check_variables(variables)
        rep = {}
        for monom, coeff in terms.items():
            if len(monom) != len(variables):
                raise VariableMismatchError(f"monomial {monom} does not match variables {list(variables)}")
            coeff = to_fraction(coeff)
            if coeff != 0:
                rep[tuple(monom)] = _sympy_rational(coeff)
        if not rep:
            return cls.zero(variables)
        return cls(Poly.from_dict(rep, *_symbols(variables), domain=QQ), variables)

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "RatPoly":
        return cls.from_expr(0, variables)

    @classmethod
    def constant(cls, value: Coefficient, variables: Sequence[str]) -> "RatPoly":
        return cls.from_expr(_sympy_rational(to_fraction(value)), variables)

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "RatPoly":
        if name not in variables:
            raise UndeclaredVariableError(f"variable {name!r} is not declared in {list(variables)}")
        return cls.from_expr(Symbol(name), variables)

    # ============ INSPECTION ============

    @property
    def variables(self) -> Tuple[str, ...]:
        return self._variables

    @property
    def is_zero(self) -> bool:
        return self._poly.is_zero

    @property
    def is_constant(self) -> bool:
        return all(sum(monom) == 0 for monom in self.terms())

    def terms(self) -> Dict[Monomial, Fraction]:
        if self._poly.is_zero:
            return {}
        return {tuple(monom): to_fraction(coeff) for monom, coeff in self._poly.terms()}

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms in descending lexicographic order of the declared variables"""
        return sorted(self.terms().items(), key=lambda item: item[0], reverse=True)

    def leading_coefficient(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return self.sorted_terms()[0][1]

    def degree(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial"""
        index = self._index(var)
        terms = self.terms()
        if not terms:
            return -1
        return max(monom[index] for monom in terms)

    def total_degree(self) -> int:
        terms = self.terms()
        if not terms:
            return -1
        return max(sum(monom) for monom in terms)

    def active_variables(self) -> Tuple[str, ...]:
        return tuple(name for name in self._variables if self.degree(name) > 0)

    def sort_key(self) -> Tuple[int, str]:
        return (self.total_degree(), self.format())

    def _index(self, var: str) -> int:
        try:
            return self._variables.index(var)
        except ValueError:
            raise UndeclaredVariableError(
                f"variable {var!r} is not declared in {list(self._variables)}"
            ) from None

    # ============ ARITHMETIC ============

    def _coerce(self, other) -> "RatPoly":
        if isinstance(other, RatPoly):
            if other._variables != self._variables:
                raise VariableMismatchError(
                    f"variable universes differ: {list(self._variables)} vs {list(other._variables)}"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RatPoly.constant(other, self._variables)
        raise TypeError(f"cannot combine RatPoly with {type(other).__name__}")

    def __add__(self, other) -> "RatPoly":
        other = self._coerce(other)
        return RatPoly(self._poly + other._poly, self._variables)

    __radd__ = __add__

    def __sub__(self, other) -> "RatPoly":
        other = self._coerce(other)
        return RatPoly(self._poly - other._poly, self._variables)

    def __rsub__(self, other) -> "RatPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatPoly":
        other = self._coerce(other)
        return RatPoly(self._poly * other._poly, self._variables)

    __rmul__ = __mul__

    def __neg__(self) -> "RatPoly":
        return RatPoly(-self._poly, self._variables)

    def __pow__(self, exponent: int) -> "RatPoly":
        if isinstance(exponent, bool) or not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {exponent!r}")
        return RatPoly(self._poly**exponent, self._variables)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self._variables == other._variables and self.terms() == other.terms()

    def __hash__(self) -> int:
        return hash((self._variables, frozenset(self.terms().items())))

    def exact_divide(self, divisor: "RatPoly") -> "RatPoly":
        """Return r with divisor * r == self, or raise NotDivisibleError"""
        divisor = self._coerce(divisor)
        if divisor.is_zero:
            raise DivisionByZeroError("division by the zero polynomial")
        try:
            quotient = self._poly.exquo(divisor._poly)
        except ExactQuotientFailed:
            raise NotDivisibleError(f"{divisor} does not divide {self}") from None
        return RatPoly(quotient, self._variables)

    def divides(self, other: "RatPoly") -> bool:
        try:
            other.exact_divide(self)
        except NotDivisibleError:
            return False
        return True

    # ============ SUBSTITUTION ============

    def substitute(self, var: str, value: "RatPoly", variables: Optional[Sequence[str]] = None) -> "RatPoly":
        """Replace ``var`` by ``value``; the result lives in ``variables`` (default: ours).

        ``value`` must already be expressed in the result universe, which is
        how blow-up charts introduce their new coordinates.
        """
        self._index(var)
        target = RatPoly.check_variables(variables) if variables is not None else self._variables
        if value._variables != target:
            raise VariableMismatchError(
                f"substituted value uses {list(value._variables)}, expected {list(target)}"
            )
        stranded = [name for name in self.active_variables() if name != var and name not in target]
        if stranded:
            raise UndeclaredVariableError(f"variables {stranded} are not declared in {list(target)}")
        expr = self._poly.as_expr().xreplace({Symbol(var): value._poly.as_expr()})
        return RatPoly.from_expr(expr, target)

    def translate(self, point: Mapping[str, Coefficient]) -> "RatPoly":
        """Move ``point`` to the origin: every x becomes x + point[x]"""
        shift = {}
        for name, value in point.items():
            self._index(name)
            value = to_fraction(value)
            if value != 0:
                shift[Symbol(name)] = Symbol(name) + _sympy_rational(value)
        if not shift:
            return self
        return RatPoly.from_expr(self._poly.as_expr().xreplace(shift), self._variables)

    def with_variables(self, variables: Sequence[str]) -> "RatPoly":
        """Re-express the polynomial in another universe containing every variable it uses"""
        variables = RatPoly.check_variables(variables)
        missing = [name for name in self.active_variables() if name not in variables]
        if missing:
            raise UndeclaredVariableError(f"variables {missing} are not declared in {list(variables)}")
        return RatPoly.from_expr(self._poly.as_expr(), variables)

    # ============ ORDERS OF VANISHING ============

    def ord_at_point(self, point: Mapping[str, Coefficient]) -> Order:
        """Lowest total degree after translating ``point`` to the origin"""
        if set(point) != set(self._variables):
            raise VariableMismatchError(
                f"point must assign exactly {list(self._variables)}, got {sorted(point)}"
            )
        if self.is_zero:
            return INFINITY
        moved = self.translate(point)
        return min(sum(monom) for monom in moved.terms())

    def ord_along(self, divisor: "RatPoly") -> Order:
        """Largest k with divisor**k dividing self (divisor taken as prime)"""
        divisor = self._coerce(divisor)
        if divisor.is_constant:
            raise ConstantDivisorError(f"cannot take the order along the constant {divisor}")
        if self.is_zero:
            return INFINITY
        order, current = 0, self
        while True:
            try:
                current = current.exact_divide(divisor)
            except NotDivisibleError:
                return order
            order += 1

    # ============ GCD AND FACTORS ============

    def normalized(self) -> "RatPoly":
        """Associate with coprime integer coefficients and positive leading coefficient"""
        terms = self.terms()
        if not terms:
            return self
        denominator = math.lcm(*(coeff.denominator for coeff in terms.values()))
        numerator = math.gcd(*(int(coeff * denominator) for coeff in terms.values()))
        scale = Fraction(denominator, numerator)
        if self.leading_coefficient() < 0:
            scale = -scale
        return self * scale

    def gcd(self, other: "RatPoly") -> "RatPoly":
        other = self._coerce(other)
        if self.is_zero and other.is_zero:
            raise ZeroPolynomialError("gcd(0, 0) is undefined")
        return RatPoly(self._poly.gcd(other._poly), self._variables).normalized()

    def irreducible_factors(self) -> List[Tuple["RatPoly", int]]:
        """Factors irreducible over QQ with multiplicities, normalized and sorted"""
        if self.is_zero:
            raise ZeroPolynomialError("cannot factor the zero polynomial")
        _, factors = self._poly.factor_list()
        result = []
        for factor, multiplicity in factors:
            factor = RatPoly(factor, self._variables).normalized()
            if not factor.is_constant:
                result.append((factor, int(multiplicity)))
        return sorted(result, key=lambda item: (item[1], item[0].sort_key()))

    def squarefree_decompose(self) -> SquareFreeDecomposition:
        """self == content * prod(part**k); parts square-free and pairwise coprime"""
        if self.is_zero or self.is_constant:
            raise ZeroPolynomialError(f"square-free decomposition needs a non-constant polynomial, got {self}")
        parts: Dict[int, RatPoly] = {}
        for factor, multiplicity in self.irreducible_factors():
            parts[multiplicity] = parts[multiplicity] * factor if multiplicity in parts else factor
        factors = [(part.normalized(), multiplicity) for multiplicity, part in sorted(parts.items())]
        leading = Fraction(1)
        for part, multiplicity in factors:
            leading *= part.leading_coefficient() ** multiplicity
        return SquareFreeDecomposition(self.leading_coefficient() / leading, factors)

    def univariate_rational_roots(self) -> List[Tuple[Fraction, int]]:
        """Rational roots with multiplicities of a polynomial in at most one variable"""
        if self.is_zero:
            raise ZeroPolynomialError("the zero polynomial has every number as a root")
        active = self.active_variables()
        if len(active) > 1:
            raise NotUnivariateError(f"{self} depends on {list(active)}")
        if not active:
            return []
        index = self._index(active[0])
        roots = []
        for factor, multiplicity in self.irreducible_factors():
            if factor.total_degree() != 1:
                continue
            terms = factor.terms()
            slope = next(coeff for monom, coeff in terms.items() if monom[index] == 1)
            offset = terms.get((0,) * len(self._variables), Fraction(0))
            roots.append((-offset / slope, multiplicity))
        return sorted(roots)

    # ============ PRINTING ============

    def format(self) -> str:
        """Canonical text in the input grammar: descending lex terms, exact a/b coefficients"""
        if self.is_zero:
            return "0"
        pieces = []
        for position, (monom, coeff) in enumerate(self.sorted_terms()):
            body = "*".join(
                name if power == 1 else f"{name}^{power}"
                for name, power in zip(self._variables, monom)
                if power
            )
            magnitude = abs(coeff)
            if not body:
                text = format_rational(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{format_rational(magnitude)}*{body}"
            if position == 0:
                pieces.append(f"-{text}" if coeff < 0 else text)
            else:
                pieces.append(f" - {text}" if coeff < 0 else f" + {text}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"RatPoly({self.format()!r}, {list(self._variables)})"
