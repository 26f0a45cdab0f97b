import logging
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from app.core.config import Settings, settings as default_settings
from app.core.exceptions import (
    AnalysisError,
    NotIsolatedError,
    SelfTestFailure,
    ZeroDiscriminantError,
)
from app.core.parser import parse
from app.core.polyring import RatPoly
from app.core.sampling import PolynomialSampler
from app.models.mordell_weil import Dichotomy
from app.models.resolution import ResolutionStatus
from app.models.surface import LocationKind
from app.models.weierstrass import PointOnChart, WeierstrassChart
from app.services.kodaira import KodairaService
from app.services.mwflop import MordellWeilService, rank_from_symbols
from app.services.resolve import STATUS_EXIT_CODES, ResolutionService, chart_overlap_consistent
from app.services.surface import SurfaceService
from app.services.weierstrass import WeierstrassService, discriminant

logger = logging.getLogger(__name__)

VARIABLES = ("s", "t")
TWIN_CURVES = ("(s - t^2)^2*(s + t^2)^2", "(s - t^2)^3*(s + t^2)^3")
NORMAL_CROSSING = ("s^2*t^2", "s^3*t^3")
PENCIL = ("s^4", "t^6")


def expect(condition: bool, message: str) -> None:
    if not condition:
        raise SelfTestFailure(message)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


@dataclass(frozen=True)
class SelftestResult:
    seed: int
    instances: int
    checks: Tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def first_failure(self) -> Optional[CheckResult]:
        return next((check for check in self.checks if not check.passed), None)

    def summary(self) -> str:
        lines = [
            f"{'ok ' if check.passed else 'FAIL'} {check.name:<28} {check.seconds:6.2f}s {check.detail}".rstrip()
            for check in self.checks
        ]
        failure = self.first_failure
        lines.append("selftest passed" if failure is None else f"selftest failed: first failing check {failure.name}")
        return "\n".join(lines)


class SelftestService:
    def __init__(
        self,
        settings: Settings = default_settings,
        kodaira: Optional[KodairaService] = None,
        seed: Optional[int] = None,
        instances: Optional[int] = None,
    ):
        self.settings = settings
        self.seed = seed if seed is not None else settings.SELFTEST_SEED
        self.instances = instances if instances is not None else settings.SELFTEST_INSTANCES
        self.kodaira = kodaira or KodairaService()
        self.weierstrass = WeierstrassService()
        self.surface = SurfaceService(self.kodaira)
        self.resolver = ResolutionService(settings, self.weierstrass, self.surface)
        self._mordell_weil: Optional[MordellWeilService] = None

    @property
    def mordell_weil(self) -> MordellWeilService:
        # built lazily: a broken Kodaira table must fail a check, not the constructor
        if self._mordell_weil is None:
            self._mordell_weil = MordellWeilService(self.settings, self.kodaira)
        return self._mordell_weil

    def checks(self) -> Sequence[Tuple[str, Callable[[], None]]]:
        return (
            ("kodaira-table-totality", self.check_kodaira_totality),
            ("extremal-table", self.check_extremal_table),
            ("minimalization", self.check_minimalization),
            ("twin-curve-resolution", self.check_twin_curves),
            ("normal-crossing-resolution", self.check_normal_crossing),
            ("pencil-resolution", self.check_pencil),
            ("negative-paths", self.check_negative_paths),
            ("ring-axioms", self.check_ring_axioms),
            ("order-additivity", self.check_order_additivity),
            ("parse-round-trip", self.check_round_trip),
            ("square-free-recomposition", self.check_square_free),
            ("twist-equivariance", self.check_twist_equivariance),
            ("chart-overlap", self.check_chart_overlap),
            ("crepancy-ledger", self.check_crepancy),
        )

    def run(self) -> SelftestResult:
        results: List[CheckResult] = []
        for name, check in self.checks():
            started = time.perf_counter()
            try:
                check()
            except AnalysisError as exc:
                logger.error("Selftest check %s failed: %s", name, exc.detail)
                results.append(CheckResult(name, False, f"{exc.kind}: {exc.detail}", time.perf_counter() - started))
            except Exception as exc:
                logger.exception("Selftest check %s crashed", name)
                results.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}", time.perf_counter() - started))
            else:
                results.append(CheckResult(name, True, "", time.perf_counter() - started))
        return SelftestResult(self.seed, self.instances, tuple(results))

    # ============ HELPERS ============

    def _model(self, f: str, g: str) -> WeierstrassChart:
        return self.weierstrass.make_model(parse(f, VARIABLES), parse(g, VARIABLES), VARIABLES)

    def _sampler(self, offset: int) -> PolynomialSampler:
        return PolynomialSampler(self.seed + offset, VARIABLES)

    # ============ TABLES ============

    def check_kodaira_totality(self) -> None:
        report = self.kodaira.scan_totality()
        expect(
            report.ok,
            f"{len(report.unmatched)} unmatched and {len(report.ambiguous)} ambiguous triples, "
            f"first unmatched {report.unmatched[0] if report.unmatched else None}",
        )

    def check_extremal_table(self) -> None:
        for entry in self.mordell_weil.table.values():
            rank, euler = rank_from_symbols(entry.symbols, self.kodaira)
            expect(rank == 0 and euler == 12, f"line {entry.line}: rank {rank}, Euler sum {euler}")

    # ============ WORKED EXAMPLES ============

    def check_minimalization(self) -> None:
        model = self._model("s^4", "s^6")
        twisted, k = self.weierstrass.minimalize_along(model, parse("s", VARIABLES), "s")
        one = RatPoly.constant(1, VARIABLES)
        expect(k == 1 and twisted.f == one and twisted.g == one, f"got k={k}, f={twisted.f}, g={twisted.g}")

    def check_twin_curves(self) -> None:
        model = self._model(*TWIN_CURVES)
        divisors = [parse("s - t^2", VARIABLES), parse("s + t^2", VARIABLES)]
        tree = self.resolver.resolve_isolated(model, PointOnChart.origin(VARIABLES), divisors)
        expect(tree.status == ResolutionStatus.RESOLVED and tree.depth == 2, f"{tree.status.value} at depth {tree.depth}")
        chart = tree.steps[0].chart_u
        expect(
            chart.f == parse("(u - t)^2*(u + t)^2", chart.variables)
            and chart.g == parse("(u - t)^3*(u + t)^3", chart.variables),
            f"first chart U model is ({chart.f}, {chart.g})",
        )
        first, second = tree.surfaces[0], tree.surfaces[-1]
        expect(not first.rational and first.has_46_12_point, "first surface should carry a (4,6,12) point")
        expect(second.rational and second.config.symbols() == ("I0*", "I0*"), f"final surface {second.config.describe()}")
        expect(
            sorted(place.location.value for place in second.config.places if place.location.kind == LocationKind.POINT)
            == [-1, 1],
            "final I0* fibers should sit at u = -1 and u = 1",
        )
        expect(tree.ledger.nets == (0, 0), f"ledger {tree.ledger.nets}")

    def check_normal_crossing(self) -> None:
        model = self._model(*NORMAL_CROSSING)
        divisors = [parse("s", VARIABLES), parse("t", VARIABLES)]
        origin = PointOnChart.origin(VARIABLES)
        verdict = self.weierstrass.is_isolated_46_12(model, origin, divisors)
        expect(
            verdict.isolated and all(str(d.triple) == "(2,3,6)" for d in verdict.diagnostics),
            f"isolation {verdict.reason}",
        )
        tree = self.resolver.resolve_isolated(model, origin, divisors)
        surface = tree.surfaces[0]
        expect(tree.depth == 1 and surface.config.symbols() == ("I0*", "I0*"), surface.config.describe())
        mw = self.mordell_weil.analyze_surface(surface)
        expect(mw.rank == 0 and mw.torsion_order == 4 and mw.census.total == 14, f"rank {mw.rank}, census {mw.census}")
        bounds = self.mordell_weil.model_count_bounds(9, [mw.census])
        expect(
            bounds.lower_product == 387_420_489 and bounds.upper_extremal == 9_225_216,
            f"bounds {bounds.lower_product} / {bounds.upper_extremal}",
        )

    def check_pencil(self) -> None:
        model = self._model(*PENCIL)
        tree = self.resolver.resolve_isolated(model, PointOnChart.origin(VARIABLES))
        surface = tree.surfaces[0]
        places = surface.config.places
        expect(
            tree.depth == 1
            and len(places) == 1
            and places[0].multiplicity_of_places == 12
            and places[0].fiber.symbol == "I1",
            surface.config.describe(),
        )
        mw = self.mordell_weil.analyze_surface(surface)
        expect(mw.rank == 8 and mw.dichotomy == Dichotomy.INFINITE, f"rank {mw.rank}, {mw.dichotomy.value}")

    def check_negative_paths(self) -> None:
        zero = RatPoly.zero(VARIABLES)
        try:
            self.weierstrass.make_model(zero, zero, VARIABLES)
        except ZeroDiscriminantError:
            pass
        else:
            raise SelfTestFailure("f = g = 0 was accepted")

        model = self._model(*NORMAL_CROSSING)
        try:
            self.resolver.resolve_isolated(model, PointOnChart.from_mapping({"s": 1, "t": 1}, VARIABLES))
        except NotIsolatedError:
            pass
        else:
            raise SelfTestFailure("a smooth point was accepted as a (4,6,12) center")

        twin = self._model(*TWIN_CURVES)
        tree = self.resolver.resolve_isolated(twin, PointOnChart.origin(VARIABLES), recursion_limit=1)
        expect(
            tree.status == ResolutionStatus.RECURSION_LIMIT and int(STATUS_EXIT_CODES[tree.status]) == 4,
            f"limit 1 gave {tree.status.value}",
        )

    # ============ PROPERTY SUITES ============

    def check_ring_axioms(self) -> None:
        sampler = self._sampler(1)
        for _ in range(self.instances):
            p, q, r = sampler.poly(), sampler.poly(), sampler.poly()
            expect((p + q) + r == p + (q + r), f"addition not associative on {p}, {q}, {r}")
            expect(p * q == q * p, f"multiplication not commutative on {p}, {q}")
            expect(p * (q + r) == p * q + p * r, f"distributivity fails on {p}, {q}, {r}")
            expect((p + (-1) * p).is_zero, f"additive inverse fails on {p}")
            expect(p**3 == p * p * p, f"p^3 disagrees with repeated multiplication on {p}")

    def check_order_additivity(self) -> None:
        sampler = self._sampler(2)
        for _ in range(self.instances):
            p, q = sampler.nonzero_poly(), sampler.nonzero_poly()
            point = sampler.point()
            expect(
                (p * q).ord_at_point(point) == p.ord_at_point(point) + q.ord_at_point(point),
                f"ord_at_point not additive on {p}, {q} at {point}",
            )
            d = sampler.linear_form()
            p_d, q_d = p * d ** sampler.rng.randint(0, 2), q * d ** sampler.rng.randint(0, 2)
            expect(
                (p_d * q_d).ord_along(d) == p_d.ord_along(d) + q_d.ord_along(d),
                f"ord_along not additive on {p_d}, {q_d} along {d}",
            )
            expect((p * q).exact_divide(q) == p, f"exact division fails on {p}, {q}")

    def check_round_trip(self) -> None:
        sampler = self._sampler(3)
        for _ in range(self.instances):
            p = sampler.poly()
            expect(parse(p.format(), VARIABLES) == p, f"round trip fails on {p}")

    def check_square_free(self) -> None:
        sampler = self._sampler(4)
        for _ in range(self.instances):
            p = sampler.nonconstant_poly() * sampler.nonconstant_poly() ** 2
            decomposition = p.squarefree_decompose()
            rebuilt = RatPoly.constant(decomposition.content, VARIABLES)
            for factor, multiplicity in decomposition.factors:
                rebuilt = rebuilt * factor**multiplicity
            expect(rebuilt == p, f"square-free recomposition fails on {p}")

    def check_twist_equivariance(self) -> None:
        sampler = self._sampler(5)
        for _ in range(self.instances):
            d = sampler.linear_form()
            k = sampler.rng.randint(1, 2)
            f = sampler.nonzero_poly(2, 3) * d ** (4 * k)
            g = sampler.nonzero_poly(2, 3) * d ** (6 * k)
            if discriminant(f, g).is_zero:
                continue
            model = self.weierstrass.make_model(f, g, VARIABLES)
            twisted, twist = self.weierstrass.minimalize_along(model, d, "D")
            expect(twist >= k, f"twist {twist} < {k} along {d}")
            expect(twisted.delta * d ** (12 * twist) == model.delta, f"delta identity fails along {d}")
            expect(
                twisted.delta.ord_along(d) == model.delta.ord_along(d) - 12 * twist,
                f"discriminant order not reduced by 12k along {d}",
            )

    def check_chart_overlap(self) -> None:
        sampler = self._sampler(6)
        for _ in range(self.instances):
            f, g = sampler.poly(4, 4), sampler.poly(6, 4)
            if discriminant(f, g).is_zero:
                continue
            model = self.weierstrass.make_model(f, g, VARIABLES)
            step = self.resolver.blow_up(model, PointOnChart.from_mapping(sampler.point(), VARIABLES))
            expect(
                chart_overlap_consistent(step.chart_u, step.chart_v, step.twist_k),
                f"charts disagree on the overlap for f={f}, g={g}",
            )

    def check_crepancy(self) -> None:
        sampler = self._sampler(7)
        for _ in range(self.instances):
            f, g = sampler.isolated_46_12_model()
            model = self.weierstrass.make_model(f, g, VARIABLES)
            tree = self.resolver.resolve_isolated(model, PointOnChart.origin(VARIABLES))
            expect(tree.ledger.crepant, f"non-crepant ledger {tree.ledger.nets} for f={f}, g={g}")
