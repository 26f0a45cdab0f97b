import logging
from typing import Iterable, List, Optional, Sequence, Tuple

from app.core.exceptions import (
    AnalysisError,
    ExitCode,
    NotDivisibleError,
    VariableMismatchError,
    ZeroDiscriminantError,
)
from app.core.polyring import RatPoly
from app.models.kodaira import OrderTriple
from app.models.resolution import LedgerEntry
from app.models.weierstrass import (
    CanonicalBoundVerdict,
    DivisorDiagnostic,
    IsolationMode,
    IsolationVerdict,
    MinimalityVerdict,
    PointOnChart,
    TwistRecord,
    WeierstrassChart,
)
from app.services.kodaira import in_canonical_range, is_46_12_class, meets_46_threshold, reduce_triple

logger = logging.getLogger(__name__)


def discriminant(f: RatPoly, g: RatPoly) -> RatPoly:
    """4*f^3 + 27*g^2 for y^2 = x^3 + f*x + g"""
    return 4 * f**3 + 27 * g**2


def twist_multiplicity(triple: OrderTriple) -> int:
    """Largest k with a >= 4k and b >= 6k"""
    return int(min(triple.a // 4, triple.b // 6))


def _dedupe(divisors: Iterable[Tuple[RatPoly, str]]) -> List[Tuple[RatPoly, str]]:
    seen = set()
    result = []
    for divisor, source in divisors:
        key = divisor.normalized()
        if key in seen:
            continue
        seen.add(key)
        result.append((divisor, source))
    return result


class WeierstrassService:
    def make_model(
        self,
        f: RatPoly,
        g: RatPoly,
        variables: Optional[Sequence[str]] = None,
        chart_name: str = "base",
        exceptional_divisors: Sequence[Tuple[RatPoly, str]] = (),
        twist_log: Sequence[TwistRecord] = (),
    ) -> WeierstrassChart:
        """Build a chart model and cache its discriminant"""
        variables = tuple(variables) if variables is not None else f.variables
        if len(variables) != 2:
            raise VariableMismatchError(f"a chart needs exactly two variables, got {list(variables)}")
        if f.variables != variables or g.variables != variables:
            raise VariableMismatchError(
                f"f and g must use the chart variables {list(variables)}, got {list(f.variables)} and {list(g.variables)}"
            )
        delta = discriminant(f, g)
        if delta.is_zero:
            raise ZeroDiscriminantError(
                f"4f^3 + 27g^2 vanishes identically on chart {chart_name}; not an elliptic fibration",
                diagnostics={"f": f.format(), "g": g.format()},
            )
        return WeierstrassChart(
            chart_name=chart_name,
            variables=variables,
            f=f,
            g=g,
            delta=delta,
            exceptional_divisors=tuple(exceptional_divisors),
            twist_log=tuple(twist_log),
        )

    def orders_at(self, model: WeierstrassChart, point: PointOnChart) -> OrderTriple:
        coordinates = point.as_dict()
        if point.variables != model.variables:
            raise VariableMismatchError(
                f"point {point} is not on chart {model.chart_name} with variables {list(model.variables)}"
            )
        return OrderTriple(
            model.f.ord_at_point(coordinates),
            model.g.ord_at_point(coordinates),
            model.delta.ord_at_point(coordinates),
        )

    def orders_along(self, model: WeierstrassChart, divisor: RatPoly) -> OrderTriple:
        return OrderTriple(
            model.f.ord_along(divisor),
            model.g.ord_along(divisor),
            model.delta.ord_along(divisor),
        )

    def minimalize_along(
        self, model: WeierstrassChart, divisor: RatPoly, label: str
    ) -> Tuple[WeierstrassChart, int]:
        """Divide (f, g) by (d^4k, d^6k) for the largest admissible k"""
        triple = self.orders_along(model, divisor)
        k = twist_multiplicity(triple)
        if k == 0:
            return model, 0
        try:
            f_hat = model.f.exact_divide(divisor ** (4 * k))
            g_hat = model.g.exact_divide(divisor ** (6 * k))
        except NotDivisibleError as exc:
            raise AnalysisError(
                f"twist along {label} failed although orders are {triple}: {exc.detail}",
                exit_code=ExitCode.INTERNAL,
            ) from exc
        logger.debug("Twisted %s along %s=%s with k=%d", model.chart_name, label, divisor, k)
        twisted = self.make_model(
            f_hat,
            g_hat,
            model.variables,
            chart_name=model.chart_name,
            exceptional_divisors=model.exceptional_divisors,
            twist_log=model.twist_log + (TwistRecord(label, k),),
        )
        expected = triple
        for _ in range(k):
            expected = reduce_triple(expected)
        remaining = self.orders_along(twisted, divisor)
        if remaining != expected:
            raise AnalysisError(
                f"twist along {label} left orders {remaining}, expected {expected}",
                exit_code=ExitCode.INTERNAL,
            )
        return twisted, k

    def twist_discrepancy(self, model: WeierstrassChart, divisor: RatPoly, label: str) -> LedgerEntry:
        """Ledger entry for minimalizing along a divisor of the base itself (no blow-up, so base 0)"""
        k = twist_multiplicity(self.orders_along(model, divisor))
        return LedgerEntry(divisor_label=label, base_discrepancy=0, twist_k=k)

    # ============ CANDIDATE DIVISORS ============

    def minimality_candidates(self, model: WeierstrassChart) -> List[RatPoly]:
        """Irreducible factors of gcd(f, g); only these can carry orders >= (4,6)"""
        common = model.f.gcd(model.g)
        if common.is_constant:
            return []
        return [factor for factor, _ in common.irreducible_factors()]

    def factor_candidates(self, model: WeierstrassChart) -> List[RatPoly]:
        factors: List[RatPoly] = []
        for poly in (model.f, model.g):
            if poly.is_zero or poly.is_constant:
                continue
            factors.extend(factor for factor, _ in poly.irreducible_factors())
        return [divisor for divisor, _ in _dedupe((factor, "auto") for factor in factors)]

    def is_minimal(
        self, model: WeierstrassChart, candidate_divisors: Sequence[RatPoly] = ()
    ) -> MinimalityVerdict:
        candidates = _dedupe(
            [(divisor, "user") for divisor in candidate_divisors]
            + [(divisor, "auto") for divisor in self.minimality_candidates(model)]
        )
        diagnostics = []
        witness = None
        for divisor, source in candidates:
            triple = self.orders_along(model, divisor)
            below = not meets_46_threshold(triple)
            diagnostics.append(DivisorDiagnostic(divisor, triple, source, below_threshold=below))
            if not below and witness is None:
                witness = divisor
        if witness is not None:
            logger.info("Model on %s is not minimal: witness %s", model.chart_name, witness)
        return MinimalityVerdict(minimal=witness is None, witness=witness, diagnostics=tuple(diagnostics))

    def is_isolated_46_12(
        self,
        model: WeierstrassChart,
        point: PointOnChart,
        candidate_divisors: Sequence[RatPoly] = (),
        mode: IsolationMode = IsolationMode.CLASS,
    ) -> IsolationVerdict:
        """Orders at the point are admissible for ``mode`` and no candidate divisor through it reaches (4,6).

        CLASS admits the (4,6,12) class only. THRESHOLD also admits 4 <= a < 8, 6 <= b < 12
        with d > 12, whose exceptional surface has a singular generic fiber.
        """
        triple = self.orders_at(model, point)
        coordinates = point.as_dict()
        candidates = _dedupe(
            [(divisor, "user") for divisor in candidate_divisors]
            + [(divisor, "auto") for divisor in self.factor_candidates(model)]
        )
        diagnostics = []
        blocking = []
        for divisor, source in candidates:
            through = divisor.ord_at_point(coordinates) > 0
            if source == "auto" and not through:
                continue
            divisor_triple = self.orders_along(model, divisor)
            below = not meets_46_threshold(divisor_triple)
            diagnostics.append(DivisorDiagnostic(divisor, divisor_triple, source, through, below))
            if through and not below:
                blocking.append(divisor)

        in_class = is_46_12_class(triple)
        admissible = in_class
        if mode == IsolationMode.THRESHOLD:
            admissible = in_class or in_canonical_range(triple)
        if not admissible:
            reason = f"orders {triple} at {point} are not in the (4,6,12) class"
            if mode == IsolationMode.THRESHOLD:
                reason += " nor in the range 4 <= a < 8, 6 <= b < 12"
        elif blocking:
            reason = f"divisor {blocking[0]} through {point} carries orders >= (4,6)"
        elif in_class:
            reason = f"isolated (4,6,12) point; checked {len(diagnostics)} candidate divisors"
        else:
            reason = f"isolated point with orders {triple} (threshold mode); checked {len(diagnostics)} candidate divisors"
        return IsolationVerdict(
            isolated=admissible and not blocking,
            point=point,
            triple=triple,
            in_46_12_class=in_class,
            meets_46_threshold=meets_46_threshold(triple),
            diagnostics=tuple(diagnostics),
            reason=reason,
            mode=mode,
        )

    def canonical_bound_check(self, triples: Sequence[OrderTriple]) -> CanonicalBoundVerdict:
        """All isolated fibers with n < 8 and m < 12 give at worst canonical singularities"""
        for triple in triples:
            if not (triple.a < 8 and triple.b < 12):
                return CanonicalBoundVerdict(
                    met=False,
                    message=f"bound violated by {triple}: needs n < 8 and m < 12",
                    offending=triple,
                )
        return CanonicalBoundVerdict(met=True, message="at worst canonical singularities: n < 8 and m < 12 for every fiber")
