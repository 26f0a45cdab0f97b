import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from app.core.polyring import RatPoly, format_rational
from app.models.kodaira import KodairaFiber, Order


class LocationKind(str, enum.Enum):
    POINT = "point"
    INFINITY = "infinity"
    FACTOR = "factor"


@dataclass(frozen=True)
class FiberLocation:
    """Where a fiber sits on the exceptional P^1: u=c, infinity, or the roots of an irreducible factor"""

    kind: LocationKind
    variable: str
    value: Optional[Fraction] = None
    factor: Optional[RatPoly] = None

    @property
    def geometric_points(self) -> int:
        if self.kind == LocationKind.FACTOR:
            return self.factor.degree(self.variable)
        return 1

    @property
    def is_rational(self) -> bool:
        return self.kind != LocationKind.FACTOR

    def sort_key(self):
        if self.kind == LocationKind.POINT:
            return (0, self.value, "")
        if self.kind == LocationKind.INFINITY:
            return (1, Fraction(0), "")
        return (2, Fraction(self.geometric_points), self.factor.format())

    def __str__(self) -> str:
        if self.kind == LocationKind.POINT:
            return f"{self.variable}={format_rational(self.value)}"
        if self.kind == LocationKind.INFINITY:
            return "infinity"
        return f"root_of({self.factor.format()})"


@dataclass(frozen=True)
class FiberPlace:
    location: FiberLocation
    fiber: KodairaFiber

    @property
    def multiplicity_of_places(self) -> int:
        return self.location.geometric_points

    @property
    def euler_total(self) -> Order:
        return self.fiber.euler * self.multiplicity_of_places


@dataclass(frozen=True)
class FiberConfiguration:
    places: Tuple[FiberPlace, ...]
    total_delta_degree: Order

    def symbols(self) -> Tuple[str, ...]:
        """Fiber symbols with each geometric point listed separately"""
        return tuple(
            symbol
            for place in self.places
            for symbol in (place.fiber.symbol,) * place.multiplicity_of_places
        )

    def describe(self) -> str:
        if not self.places:
            return "smooth"
        return ", ".join(
            f"{place.fiber.symbol} at {place.location}"
            + (f" (x{place.multiplicity_of_places})" if place.multiplicity_of_places > 1 else "")
            for place in self.places
        )


@dataclass(frozen=True)
class HomogenizedDegrees:
    """Degrees of f|E, g|E and the discriminant as binary forms on P^1; None for a zero restriction"""

    n_f: Optional[int]
    n_g: Optional[int]
    n_delta: Optional[int]


@dataclass(frozen=True)
class RationalityVerdict:
    rational: bool
    total_delta_degree: Order
    has_46_12_point: bool
    degrees: HomogenizedDegrees
    f_degree_ok: bool
    g_degree_ok: bool
    reason: str


@dataclass(frozen=True)
class SurfaceReport:
    step_label: str
    variable: str
    f_restricted: RatPoly
    g_restricted: RatPoly
    delta_restricted: RatPoly
    config: FiberConfiguration
    rational: bool
    has_46_12_point: bool
    offending_places: Tuple[FiberPlace, ...]
    degrees: HomogenizedDegrees
    isotrivial: bool
    generic_fiber_singular: bool
    infinity_inferred: bool
    charts_agree: bool
    warnings: Tuple[str, ...] = ()

    @property
    def offending_point(self) -> Optional[FiberLocation]:
        return self.offending_places[0].location if self.offending_places else None
