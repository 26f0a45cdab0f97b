import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from app.core.exceptions import RestrictedDeltaZeroError
from app.core.polyring import RatPoly
from app.models.kodaira import Order, OrderTriple
from app.models.resolution import BlowupStep
from app.models.surface import (
    FiberConfiguration,
    FiberLocation,
    FiberPlace,
    HomogenizedDegrees,
    LocationKind,
    RationalityVerdict,
    SurfaceReport,
)
from app.models.weierstrass import WeierstrassChart
from app.services.kodaira import KodairaService, meets_46_threshold
from app.services.weierstrass import discriminant

logger = logging.getLogger(__name__)

# Weights of f, g and the discriminant on the exceptional P^1 after one twist
FORM_DEGREES = (4, 6, 12)
EULER_TOTAL = 12


def exceptional_variable(chart: WeierstrassChart) -> str:
    """Name of the coordinate cutting out the most recent exceptional divisor"""
    divisor, label = chart.exceptional_divisors[-1]
    active = divisor.active_variables()
    if len(active) != 1 or divisor.total_degree() != 1:
        raise RestrictedDeltaZeroError(f"exceptional divisor {label}={divisor} is not a coordinate line")
    return active[0]


def restrict(chart: WeierstrassChart, variable: str) -> Tuple[RatPoly, RatPoly, str]:
    """(f|E, g|E, coordinate on E) for E = {variable = 0}"""
    keep = next(name for name in chart.variables if name != variable)
    zero = RatPoly.zero(chart.variables)
    f_restricted = chart.f.substitute(variable, zero).with_variables((keep,))
    g_restricted = chart.g.substitute(variable, zero).with_variables((keep,))
    return f_restricted, g_restricted, keep


def _is_rational(total: Order, has_46_12_point: bool, generic_fiber_singular: bool) -> bool:
    return total == EULER_TOTAL and not has_46_12_point and not generic_fiber_singular


class SurfaceService:
    def __init__(self, kodaira: Optional[KodairaService] = None):
        self.kodaira = kodaira or KodairaService()

    def extract_surface(self, step: BlowupStep) -> SurfaceReport:
        """Elliptic surface over the exceptional curve of one blow-up"""
        return self.analyze_restriction(step.label, step.chart_u, step.chart_v)

    def analyze_restriction(
        self, label: str, chart_u: WeierstrassChart, chart_v: Optional[WeierstrassChart] = None
    ) -> SurfaceReport:
        """Classify all fibers over E from chart U, taking infinity from chart V when present"""
        f_e, g_e, var = restrict(chart_u, exceptional_variable(chart_u))
        if f_e.is_zero and g_e.is_zero:
            raise RestrictedDeltaZeroError(
                f"f and g both vanish identically on {label}; the model is not minimal along it",
                diagnostics={"chart": chart_u.chart_name},
            )
        delta_e = discriminant(f_e, g_e)
        warnings: List[str] = []

        infinity_data = None
        if chart_v is not None:
            infinity_data = restrict(chart_v, exceptional_variable(chart_v))

        if delta_e.is_zero:
            logger.info("Surface over %s has singular generic fiber", label)
            config = FiberConfiguration(places=(), total_delta_degree=0)
            degrees = self._degrees(f_e, g_e, delta_e, infinity_data)
            return SurfaceReport(
                step_label=label,
                variable=var,
                f_restricted=f_e,
                g_restricted=g_e,
                delta_restricted=delta_e,
                config=config,
                rational=False,
                has_46_12_point=False,
                offending_places=(),
                degrees=degrees,
                isotrivial=False,
                generic_fiber_singular=True,
                infinity_inferred=chart_v is None,
                charts_agree=True,
                warnings=("restricted discriminant vanishes identically: singular generic fiber",),
            )

        places = self._affine_places(f_e, g_e, delta_e, var)
        infinity_place = self._infinity_place(f_e, g_e, delta_e, var, infinity_data)
        if infinity_place is not None:
            places.append(infinity_place)
        if chart_v is None:
            warnings.append("chart V unavailable: fiber at infinity inferred from degree defects")
        if any(place.location.kind == LocationKind.FACTOR for place in places):
            warnings.append("irreducible factors over QQ are treated as prime; each counts its degree in geometric points")

        places.sort(key=lambda place: place.location.sort_key())
        total = sum(place.euler_total for place in places)
        config = FiberConfiguration(places=tuple(places), total_delta_degree=total)
        offending = tuple(place for place in places if meets_46_threshold(place.fiber.triple))
        degrees = self._degrees(f_e, g_e, delta_e, infinity_data)
        if (degrees.n_f not in (None, FORM_DEGREES[0])) or (degrees.n_g not in (None, FORM_DEGREES[1])):
            warnings.append(
                f"homogenized degrees (N_f, N_g) = ({degrees.n_f}, {degrees.n_g}) differ from (4, 6)"
            )
        charts_agree = self._charts_agree(places, infinity_data)
        if not charts_agree:
            warnings.append("chart U and chart V classify a shared point differently")

        rational = _is_rational(total, bool(offending), False)
        logger.info(
            "Surface over %s: %s; total %s; rational=%s", label, config.describe(), total, rational
        )
        return SurfaceReport(
            step_label=label,
            variable=var,
            f_restricted=f_e,
            g_restricted=g_e,
            delta_restricted=delta_e,
            config=config,
            rational=rational,
            has_46_12_point=bool(offending),
            offending_places=offending,
            degrees=degrees,
            isotrivial=self._isotrivial(f_e, g_e, delta_e),
            generic_fiber_singular=False,
            infinity_inferred=chart_v is None,
            charts_agree=charts_agree,
            warnings=tuple(warnings),
        )

    def _affine_places(self, f_e: RatPoly, g_e: RatPoly, delta_e: RatPoly, var: str) -> List[FiberPlace]:
        places: List[FiberPlace] = []
        if delta_e.is_constant:
            return places
        decomposition = delta_e.squarefree_decompose()
        for part, _ in decomposition.factors:
            for factor, _ in part.irreducible_factors():
                triple = OrderTriple(f_e.ord_along(factor), g_e.ord_along(factor), delta_e.ord_along(factor))
                fiber = self.kodaira.classify(triple)
                if factor.degree(var) == 1:
                    root, _ = factor.univariate_rational_roots()[0]
                    location = FiberLocation(LocationKind.POINT, var, value=root)
                else:
                    location = FiberLocation(LocationKind.FACTOR, var, factor=factor)
                places.append(FiberPlace(location, fiber))
        return places

    def _infinity_place(self, f_e, g_e, delta_e, var, infinity_data) -> Optional[FiberPlace]:
        if infinity_data is not None:
            f_v, g_v, v_var = infinity_data
            origin = {v_var: 0}
            triple = OrderTriple(f_v.ord_at_point(origin), g_v.ord_at_point(origin), discriminant(f_v, g_v).ord_at_point(origin))
        else:
            triple = OrderTriple(*(
                self._defect(poly, weight) for poly, weight in zip((f_e, g_e, delta_e), FORM_DEGREES)
            ))
        if triple.d == 0:
            return None
        return FiberPlace(FiberLocation(LocationKind.INFINITY, var), self.kodaira.classify(triple))

    @staticmethod
    def _defect(poly: RatPoly, weight: int) -> Order:
        if poly.is_zero:
            return float("inf")
        return max(weight - poly.total_degree(), 0)

    @staticmethod
    def _degrees(f_e, g_e, delta_e, infinity_data) -> HomogenizedDegrees:
        if infinity_data is None:
            return HomogenizedDegrees(
                *(None if poly.is_zero else weight for poly, weight in zip((f_e, g_e, delta_e), FORM_DEGREES))
            )
        f_v, g_v, v_var = infinity_data
        delta_v = discriminant(f_v, g_v)
        origin = {v_var: 0}

        def homogenized(affine: RatPoly, at_infinity: RatPoly) -> Optional[int]:
            if affine.is_zero:
                return None
            return affine.total_degree() + at_infinity.ord_at_point(origin)

        return HomogenizedDegrees(homogenized(f_e, f_v), homogenized(g_e, g_v), homogenized(delta_e, delta_v))

    def _charts_agree(self, places: List[FiberPlace], infinity_data) -> bool:
        """Re-classify u=c (c != 0) at v=1/c on chart V"""
        if infinity_data is None:
            return True
        f_v, g_v, v_var = infinity_data
        delta_v = discriminant(f_v, g_v)
        for place in places:
            if place.location.kind != LocationKind.POINT or place.location.value == 0:
                continue
            point = {v_var: Fraction(1) / place.location.value}
            triple = OrderTriple(f_v.ord_at_point(point), g_v.ord_at_point(point), delta_v.ord_at_point(point))
            if triple != place.fiber.triple:
                logger.warning("Chart mismatch at %s: %s vs %s", place.location, place.fiber.triple, triple)
                return False
        return True

    @staticmethod
    def _isotrivial(f_e: RatPoly, g_e: RatPoly, delta_e: RatPoly) -> bool:
        """j-invariant constant along E: f|E = 0, g|E = 0, or delta|E proportional to f|E^3"""
        if f_e.is_zero or g_e.is_zero:
            return True
        cube = f_e**3
        return cube.divides(delta_e) and delta_e.exact_divide(cube).is_constant

    def rationality_verdict(self, report: SurfaceReport) -> RationalityVerdict:
        degrees = report.degrees
        f_ok = degrees.n_f is None or degrees.n_f <= FORM_DEGREES[0]
        g_ok = degrees.n_g is None or degrees.n_g <= FORM_DEGREES[1]
        total = report.config.total_delta_degree
        rational = _is_rational(total, report.has_46_12_point, report.generic_fiber_singular)
        if rational:
            reason = "discriminant of degree 12 and no (4,6,12) point on E: rational elliptic surface"
        elif report.generic_fiber_singular:
            reason = "generic fiber over E is singular"
        elif report.has_46_12_point:
            reason = f"(4,6,12) point at {report.offending_point}: not rational, another blow-up is required"
        else:
            reason = f"total discriminant degree {total} != 12"
        return RationalityVerdict(
            rational=rational,
            total_delta_degree=total,
            has_46_12_point=report.has_46_12_point,
            degrees=degrees,
            f_degree_ok=f_ok,
            g_degree_ok=g_ok,
            reason=reason,
        )

    def euler_check(self, config: FiberConfiguration) -> bool:
        return sum(place.euler_total for place in config.places) == EULER_TOTAL
