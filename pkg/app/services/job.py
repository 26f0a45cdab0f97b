import asyncio
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

from pydantic import ValidationError

from app.core.config import Settings, settings as default_settings
from app.core.exceptions import AnalysisError, ExitCode, JobInputError
from app.core.parser import parse
from app.core.polyring import RatPoly, format_rational
from app.models.resolution import ResolutionStatus
from app.models.weierstrass import IsolationMode, PointOnChart, WeierstrassChart
from app.schemas.job import JobSpec
from app.schemas.report import (
    BoundsOut,
    CanonicalBoundOut,
    DivisorReport,
    ErrorOut,
    FiberOut,
    IsolationOut,
    JobEcho,
    LedgerEntryOut,
    LedgerOut,
    MinimalityOut,
    ModelOut,
    PointReport,
    Report,
    ResolutionOut,
    StepOut,
    SurfaceOut,
    TripleOut,
)
from app.services.kodaira import KodairaService
from app.services.mwflop import MordellWeilService
from app.services.resolve import STATUS_EXIT_CODES, ResolutionService
from app.services.surface import SurfaceService
from app.services.weierstrass import WeierstrassService

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class PreparedJob:
    spec: JobSpec
    model: WeierstrassChart
    points: Tuple[PointOnChart, ...]
    divisors: Tuple[RatPoly, ...]
    recursion_limit: int
    isolation_mode: IsolationMode = IsolationMode.CLASS


class JobService:
    def __init__(self, settings: Settings = default_settings, kodaira: Optional[KodairaService] = None):
        self.settings = settings
        self.kodaira = kodaira or KodairaService()
        self.weierstrass = WeierstrassService()
        self.surface = SurfaceService(self.kodaira)
        self.resolver = ResolutionService(settings, self.weierstrass, self.surface)
        self.mordell_weil = MordellWeilService(settings, self.kodaira)

    # ============ INPUT ============

    @staticmethod
    def load_job(path: Path) -> JobSpec:
        """Read and validate a JSON job file"""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise JobInputError(f"cannot read job file {path}: {exc.strerror}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise JobInputError(
                f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}",
                diagnostics={"line": exc.lineno, "column": exc.colno},
            ) from exc
        try:
            return JobSpec.model_validate(data)
        except ValidationError as exc:
            problems = "; ".join(
                f"{'.'.join(str(part) for part in error['loc']) or 'job'}: {error['msg']}" for error in exc.errors()
            )
            raise JobInputError(f"{path}: {problems}") from exc

    def prepare(self, spec: JobSpec, recursion_limit: Optional[int] = None) -> PreparedJob:
        """Parse polynomials and points; the CLI limit beats the job's, which beats Settings"""
        variables = tuple(spec.variables)
        f = self._parse_field("f", spec.f, variables)
        g = self._parse_field("g", spec.g, variables)
        divisors = tuple(
            self._parse_field(f"divisors[{index}]", text, variables) for index, text in enumerate(spec.divisors)
        )
        model = self.weierstrass.make_model(f, g, variables)
        points = sorted(
            {PointOnChart.from_mapping(dict(zip(variables, values)), variables) for values in spec.parsed_points()},
            key=lambda point: point.values(),
        )
        if recursion_limit is None:
            recursion_limit = spec.recursion_limit or self.settings.RECURSION_LIMIT
        mode = spec.isolation_mode or self.settings.ISOLATION_MODE
        return PreparedJob(spec, model, tuple(points), divisors, recursion_limit, mode)

    @staticmethod
    def _parse_field(field: str, text: str, variables: Sequence[str]) -> RatPoly:
        try:
            return parse(text, variables)
        except AnalysisError as exc:
            exc.detail = f"{field}: {exc.detail}"
            exc.args = (exc.detail,)
            raise

    # ============ COMMANDS ============

    async def run(self, command: str, spec: JobSpec, recursion_limit: Optional[int] = None) -> Report:
        if command == "classify":
            return await self.classify(spec)
        if command == "resolve":
            return await self.resolve(spec, recursion_limit)
        raise JobInputError(f"unknown command {command!r}")

    async def classify(self, spec: JobSpec) -> Report:
        """Orders and Kodaira types at every point and along every divisor"""
        job = self.prepare(spec)
        points = await self._gather(lambda point: self._classify_point(job, point), job.points)
        return self._assemble("classify", job, points)

    async def resolve(self, spec: JobSpec, recursion_limit: Optional[int] = None) -> Report:
        """Full resolution pipeline at every point"""
        job = self.prepare(spec, recursion_limit)
        points = await self._gather(lambda point: self._resolve_point(job, point), job.points)
        return self._assemble("resolve", job, points)

    async def _gather(self, work: Callable[[PointOnChart], T], points: Sequence[PointOnChart]) -> List[T]:
        """Run per-point work in worker threads, at most MAX_WORKERS at a time, keeping input order"""
        semaphore = asyncio.Semaphore(max(1, self.settings.MAX_WORKERS))

        async def bounded(point: PointOnChart) -> T:
            async with semaphore:
                return await asyncio.to_thread(work, point)

        return list(await asyncio.gather(*(bounded(point) for point in points)))

    # ============ PER POINT ============

    def _classify_point(self, job: PreparedJob, point: PointOnChart) -> PointReport:
        report = PointReport(point=[format_rational(v) for v in point.values()])
        try:
            triple = self.weierstrass.orders_at(job.model, point)
            report.orders = TripleOut.from_triple(triple)
            report.fiber = FiberOut.from_fiber(self.kodaira.classify(triple))
            verdict = self.weierstrass.is_isolated_46_12(job.model, point, job.divisors, job.isolation_mode)
            report.isolation = IsolationOut.from_verdict(verdict)
        except AnalysisError as exc:
            logger.warning("Point %s failed: %s", point, exc.detail)
            report.error = ErrorOut.from_error(exc)
        return report

    def _resolve_point(self, job: PreparedJob, point: PointOnChart) -> PointReport:
        report = self._classify_point(job, point)
        if report.error is not None:
            return report
        try:
            tree = self.resolver.resolve_isolated(
                job.model, point, job.divisors, job.recursion_limit, job.isolation_mode
            )
        except AnalysisError as exc:
            logger.warning("Point %s not resolved: %s", point, exc.detail)
            report.error = ErrorOut.from_error(exc)
            return report

        final = {surface.step_label for surface in tree.final_surfaces}
        surfaces, censuses = [], []
        for surface in tree.surfaces:
            verdict = self.surface.rationality_verdict(surface)
            mw = None
            if surface.step_label in final and surface.rational:
                mw = self.mordell_weil.analyze_surface(surface)
                censuses.append(mw.census)
            surfaces.append(
                SurfaceOut.from_report(surface, self.surface.euler_check(surface.config), verdict.reason, mw)
            )

        bounds = None
        if tree.status == ResolutionStatus.RESOLVED and censuses:
            n_surfaces = job.spec.n_surfaces or len(censuses)
            try:
                bounds = BoundsOut.from_bounds(
                    n_surfaces,
                    self.mordell_weil.model_count_bounds(n_surfaces, censuses, chain_length=len(tree.surfaces)),
                )
            except AnalysisError as exc:
                logger.warning("No model count bounds for %s: %s", point, exc.detail)

        canonical = self.weierstrass.canonical_bound_check([self.weierstrass.orders_at(job.model, point)])
        report.resolution = ResolutionOut(
            status=tree.status.value,
            exit_code=int(STATUS_EXIT_CODES[tree.status]),
            detail=tree.detail,
            depth=tree.depth,
            crepant=tree.ledger.crepant,
            steps=[StepOut.from_step(step) for step in tree.steps],
            ledger=LedgerOut.from_ledger(self.resolver.ledger_of(tree)),
            surfaces=surfaces,
            canonical_bound=CanonicalBoundOut.from_verdict(canonical),
            bounds=bounds,
        )
        return report

    # ============ ASSEMBLY ============

    def _divisor_reports(self, job: PreparedJob) -> List[DivisorReport]:
        reports = []
        for divisor in job.divisors:
            report = DivisorReport(divisor=divisor.format())
            try:
                triple = self.weierstrass.orders_along(job.model, divisor)
                report.orders = TripleOut.from_triple(triple)
                report.fiber = FiberOut.from_fiber(self.kodaira.classify(triple))
                entry = self.weierstrass.twist_discrepancy(job.model, divisor, divisor.format())
                report.twist_k = entry.twist_k
                if entry.twist_k > 0:
                    report.discrepancy = LedgerEntryOut.from_entry(entry)
            except AnalysisError as exc:
                report.error = ErrorOut.from_error(exc)
            reports.append(report)
        return reports

    def _assemble(self, command: str, job: PreparedJob, points: List[PointReport]) -> Report:
        divisors = self._divisor_reports(job)
        minimality = self.weierstrass.is_minimal(job.model, job.divisors)

        warnings: List[str] = []
        if not minimality.minimal:
            warnings.append(f"model is not minimal: divisor {minimality.witness} carries orders >= (4,6)")
        for divisor in divisors:
            if divisor.discrepancy is not None:
                warnings.append(
                    f"divisor {divisor.divisor}: twist k={divisor.twist_k} gives discrepancy "
                    f"{divisor.discrepancy.net} <= -1 (non-crepant)"
                )
        exit_codes = [ExitCode.OK]
        for point in points:
            label = "(" + ", ".join(point.point) + ")"
            if point.error is not None:
                exit_codes.append(ExitCode(point.error.exit_code))
            if point.resolution is not None:
                exit_codes.append(ExitCode(point.resolution.exit_code))
                warnings.extend(
                    f"{label} {surface.step}: {message}"
                    for surface in point.resolution.surfaces
                    for message in surface.warnings
                )
        exit_codes.extend(ExitCode(d.error.exit_code) for d in divisors if d.error is not None)

        spec = job.spec
        return Report(
            version=f"{self.settings.APP_NAME} {self.settings.VERSION}",
            command=command,
            job=JobEcho(
                variables=list(spec.variables),
                f=job.model.f.format(),
                g=job.model.g.format(),
                points=[[format_rational(v) for v in point.values()] for point in job.points],
                divisors=[divisor.format() for divisor in job.divisors],
                recursion_limit=job.recursion_limit,
                isolation_mode=job.isolation_mode.value,
                n_surfaces=spec.n_surfaces,
            ),
            model=ModelOut(delta=job.model.delta.format(), minimality=MinimalityOut.from_verdict(minimality)),
            points=points,
            divisors=divisors,
            warnings=warnings,
            exit_code=int(max(exit_codes)),
        )