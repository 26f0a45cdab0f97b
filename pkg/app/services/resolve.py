import logging
from collections import deque
from typing import Dict, Optional, Sequence, Tuple

from app.core.config import Settings, settings as default_settings
from app.core.exceptions import AnalysisError, ExitCode, NotIsolatedError
from app.core.polyring import Monomial, RatPoly
from app.models.resolution import (
    BlowupStep,
    DiscrepancyLedger,
    LedgerEntry,
    ResolutionStatus,
    ResolutionTree,
)
from app.models.surface import FiberPlace, LocationKind
from app.models.weierstrass import IsolationMode, PointOnChart, WeierstrassChart
from app.services.surface import SurfaceService
from app.services.weierstrass import WeierstrassService

logger = logging.getLogger(__name__)

# A point blow-up of a smooth surface adds E once to the canonical class
POINT_BLOWUP_DISCREPANCY = 1

STATUS_EXIT_CODES: Dict[ResolutionStatus, ExitCode] = {
    ResolutionStatus.RESOLVED: ExitCode.OK,
    ResolutionStatus.RECURSION_LIMIT: ExitCode.RESOURCE_LIMIT,
    ResolutionStatus.NON_RATIONAL_CENTER: ExitCode.PRECONDITION,
    ResolutionStatus.UNRESOLVED_CENTER: ExitCode.PRECONDITION,
}


def fresh_name(preferred: str, taken: Sequence[str]) -> str:
    name, suffix = preferred, 1
    while name in taken:
        name = f"{preferred}{suffix}"
        suffix += 1
    return name


def chart_overlap_consistent(chart_u: WeierstrassChart, chart_v: WeierstrassChart, k: int) -> bool:
    """Check f_U(1/v, x*v) * v^(4k) == f_V and the same for g with v^(6k), denominators cleared"""
    u_name, _ = chart_u.variables
    x_name, v_name = chart_v.variables
    v_poly = RatPoly.variable(v_name, chart_v.variables)
    for on_u, on_v, weight in ((chart_u.f, chart_v.f, 4 * k), (chart_u.g, chart_v.g, 6 * k)):
        e = max(on_u.degree(u_name), 0)
        # u^i y^j -> v^(e-i) * (x v)^j
        terms: Dict[Monomial, object] = {}
        for (i, j), coeff in on_u.terms().items():
            key = (j, e - i + j)
            terms[key] = terms.get(key, 0) + coeff
        cleared = RatPoly.from_terms(terms, (x_name, v_name))
        if cleared * v_poly**weight != on_v * v_poly**e:
            return False
    return True


class ResolutionService:
    def __init__(
        self,
        settings: Settings = default_settings,
        weierstrass: Optional[WeierstrassService] = None,
        surface: Optional[SurfaceService] = None,
    ):
        self.settings = settings
        self.weierstrass = weierstrass or WeierstrassService()
        self.surface = surface or SurfaceService()

    def blow_up(
        self,
        model: WeierstrassChart,
        point: PointOnChart,
        label: str = "E1",
        depth: int = 1,
        parent_label: Optional[str] = None,
    ) -> BlowupStep:
        """Blow up the base at ``point`` and minimalize both charts along the exceptional curve"""
        x, y = model.variables
        centered = model.f.translate(point.as_dict()), model.g.translate(point.as_dict())

        # Chart U: x = u*y, exceptional divisor y = 0
        u_vars = (fresh_name(self.settings.CHART_U_NAME, (y,)), y)
        u_value = RatPoly.variable(u_vars[0], u_vars) * RatPoly.variable(y, u_vars)
        chart_u, k_u = self._pulled_back_chart(
            model, centered, x, u_value, u_vars, RatPoly.variable(y, u_vars), f"{label}.U", label
        )

        # Chart V: y = x*v, exceptional divisor x = 0
        v_vars = (x, fresh_name(self.settings.CHART_V_NAME, (x,)))
        v_value = RatPoly.variable(x, v_vars) * RatPoly.variable(v_vars[1], v_vars)
        chart_v, k_v = self._pulled_back_chart(
            model, centered, y, v_value, v_vars, RatPoly.variable(x, v_vars), f"{label}.V", label
        )

        if k_u != k_v:
            raise AnalysisError(
                f"twist multiplicities disagree on the charts of {label}: {k_u} vs {k_v}",
                exit_code=ExitCode.INTERNAL,
            )
        consistent = chart_overlap_consistent(chart_u, chart_v, k_u)
        if not consistent:
            logger.warning("Charts of %s do not agree on their overlap", label)
        logger.info("Blew up %s at %s (%s): twist k=%d", model.chart_name, point, label, k_u)
        return BlowupStep(
            label=label,
            depth=depth,
            center=point,
            parent_chart=model.chart_name,
            parent_label=parent_label,
            chart_u=chart_u,
            chart_v=chart_v,
            twist_k=k_u,
            base_discrepancy=POINT_BLOWUP_DISCREPANCY,
            overlap_consistent=consistent,
        )

    def _pulled_back_chart(
        self,
        model: WeierstrassChart,
        centered: Tuple[RatPoly, RatPoly],
        replaced: str,
        value: RatPoly,
        variables: Tuple[str, str],
        exceptional: RatPoly,
        chart_name: str,
        label: str,
    ) -> Tuple[WeierstrassChart, int]:
        f, g = (poly.substitute(replaced, value, variables) for poly in centered)
        pulled = self.weierstrass.make_model(
            f, g, variables, chart_name=chart_name, exceptional_divisors=((exceptional, label),)
        )
        return self.weierstrass.minimalize_along(pulled, exceptional, label)

    def resolve_isolated(
        self,
        model: WeierstrassChart,
        point: PointOnChart,
        candidates: Sequence[RatPoly] = (),
        recursion_limit: Optional[int] = None,
        mode: Optional[IsolationMode] = None,
    ) -> ResolutionTree:
        """Blow up until no exceptional surface carries a (4,6,12) point, breadth first.

        ``recursion_limit`` bounds the depth of the tree: every blow-up at depth d + 1 is centered
        on the exceptional curve of a depth-d blow-up. ``mode`` defaults to ISOLATION_MODE.
        """
        limit = recursion_limit if recursion_limit is not None else self.settings.RECURSION_LIMIT
        mode = mode or self.settings.ISOLATION_MODE
        if limit < 1:
            raise AnalysisError(f"recursion limit must be positive, got {limit}", exit_code=ExitCode.INPUT_ERROR)
        verdict = self.weierstrass.is_isolated_46_12(model, point, candidates, mode)
        if not verdict.isolated:
            raise NotIsolatedError(
                verdict.reason,
                diagnostics={
                    "point": str(point),
                    "orders": str(verdict.triple),
                    "divisors": {d.divisor.format(): str(d.triple) for d in verdict.diagnostics},
                },
            )

        queue = deque([(model, point, None, 1)])
        steps, surfaces = [], []
        status, detail = ResolutionStatus.RESOLVED, ""
        while queue and status == ResolutionStatus.RESOLVED:
            chart, center, parent, depth = queue.popleft()
            if depth > limit:
                status = ResolutionStatus.RECURSION_LIMIT
                detail = (
                    f"blow-up at {center} on {chart.chart_name} would reach depth {depth}, "
                    f"which exceeds the limit of {limit}"
                )
                break
            label = f"E{len(steps) + 1}"
            step = self.blow_up(chart, center, label, depth, parent)
            surface = self.surface.extract_surface(step)
            steps.append(step)
            surfaces.append(surface)

            for place in surface.offending_places:
                status, detail, follow_up = self._next_center(step, place, mode)
                if status != ResolutionStatus.RESOLVED:
                    break
                queue.append((*follow_up, label, depth + 1))

        if status != ResolutionStatus.RESOLVED:
            logger.warning("Resolution stopped with %s: %s", status.value, detail)
        ledger = DiscrepancyLedger(
            tuple(LedgerEntry(step.label, step.base_discrepancy, step.twist_k) for step in steps)
        )
        return ResolutionTree(
            root=model,
            root_point=point,
            steps=tuple(steps),
            ledger=ledger,
            surfaces=tuple(surfaces),
            status=status,
            detail=detail,
        )

    def _next_center(self, step: BlowupStep, place: FiberPlace, mode: IsolationMode = IsolationMode.CLASS):
        """Chart and point for an offending place on E, or the status that stops the recursion"""
        location = place.location
        if not location.is_rational:
            return (
                ResolutionStatus.NON_RATIONAL_CENTER,
                f"(4,6,12) fibers over the irrational points {location} of {step.label}",
                None,
            )
        if location.kind == LocationKind.INFINITY:
            chart = step.chart_v
            center = PointOnChart.origin(chart.variables)
        else:
            chart = step.chart_u
            u_name, y_name = chart.variables
            center = PointOnChart.from_mapping({u_name: location.value, y_name: 0}, chart.variables)

        exceptional = [divisor for divisor, _ in chart.exceptional_divisors]
        verdict = self.weierstrass.is_isolated_46_12(chart, center, exceptional, mode)
        if not verdict.isolated:
            return (
                ResolutionStatus.UNRESOLVED_CENTER,
                f"{location} on {step.label}: {verdict.reason}",
                None,
            )
        logger.debug("Recursing at %s on %s", center, chart.chart_name)
        return ResolutionStatus.RESOLVED, "", (chart, center)

    def ledger_of(self, tree: ResolutionTree) -> DiscrepancyLedger:
        return DiscrepancyLedger(
            tuple(LedgerEntry(step.label, step.base_discrepancy, step.twist_k) for step in tree.steps)
        )
