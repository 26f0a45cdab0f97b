"""Seeded generators of small random inputs for property checks."""
import random
from fractions import Fraction
from typing import List, Sequence, Tuple

from app.core.polyring import RatPoly

DEFAULT_VARIABLES = ("s", "t")


class PolynomialSampler:
    def __init__(self, seed: int, variables: Sequence[str] = DEFAULT_VARIABLES):
        self.rng = random.Random(seed)
        self.variables = tuple(variables)

    def coefficient(self, bound: int = 5, rational: bool = True) -> Fraction:
        numerator = 0
        while numerator == 0:
            numerator = self.rng.randint(-bound, bound)
        denominator = self.rng.choice((1, 1, 1, 2, 3)) if rational else 1
        return Fraction(numerator, denominator)

    def poly(self, max_degree: int = 3, max_terms: int = 4, min_degree: int = 0) -> RatPoly:
        """Random polynomial whose terms have total degree in [min_degree, max_degree]"""
        terms = {}
        for _ in range(self.rng.randint(1, max_terms)):
            degree = self.rng.randint(min_degree, max_degree)
            first = self.rng.randint(0, degree)
            terms[(first, degree - first)] = self.coefficient()
        return RatPoly.from_terms(terms, self.variables)

    def nonzero_poly(self, max_degree: int = 3, max_terms: int = 4) -> RatPoly:
        while True:
            poly = self.poly(max_degree, max_terms)
            if not poly.is_zero:
                return poly

    def nonconstant_poly(self, max_degree: int = 3, max_terms: int = 4) -> RatPoly:
        while True:
            poly = self.poly(max_degree, max_terms)
            if not poly.is_constant:
                return poly

    def linear_form(self, through_origin: bool = False) -> RatPoly:
        """a*s + b*t (+ c); never constant, hence irreducible"""
        a, b = 0, 0
        while a == 0 and b == 0:
            a, b = self.rng.randint(-3, 3), self.rng.randint(-3, 3)
        c = 0 if through_origin else self.rng.randint(-3, 3)
        return RatPoly.from_terms({(1, 0): a, (0, 1): b, (0, 0): c}, self.variables)

    def distinct_lines(self, count: int) -> List[RatPoly]:
        """Pairwise non-proportional lines through the origin"""
        lines: List[RatPoly] = []
        directions = set()
        while len(lines) < count:
            line = self.linear_form(through_origin=True).normalized()
            if line in directions:
                continue
            directions.add(line)
            lines.append(line)
        return lines

    def point(self) -> dict:
        return {name: Fraction(self.rng.randint(-2, 2)) for name in self.variables}

    def isolated_46_12_model(self) -> Tuple[RatPoly, RatPoly]:
        """(f, g) with an isolated (4,6,12) point at the origin.

        Lowest-order parts are products of distinct lines, so no curve through the
        origin carries orders (4,6); higher-order noise keeps the leading forms.
        """
        c_f, c_g = self.coefficient(rational=False), self.coefficient(rational=False)
        if self.rng.random() < 0.5:
            l1, l2 = self.distinct_lines(2)
            f_lead, g_lead = c_f * l1**2 * l2**2, c_g * l1**3 * l2**3
            # (c_f, c_g) = (-3, +-2) would cancel the degree-12 part of the discriminant
            if 4 * c_f**3 + 27 * c_g**2 == 0:
                c_f += 1
                f_lead = c_f * l1**2 * l2**2
        else:
            lines = self.distinct_lines(10)
            f_lead = c_f * lines[0] * lines[1] * lines[2] * lines[3]
            g_lead = c_g * lines[4] * lines[5] * lines[6] * lines[7] * lines[8] * lines[9]
        f = f_lead + self.poly(max_degree=6, max_terms=2, min_degree=5)
        g = g_lead + self.poly(max_degree=8, max_terms=2, min_degree=7)
        return f, g
