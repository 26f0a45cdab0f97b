import json
import math
from typing import Annotated, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, PlainSerializer

from app.core.exceptions import AnalysisError
from app.core.polyring import format_rational
from app.models.kodaira import KodairaFiber, Order, OrderTriple
from app.models.mordell_weil import FloppingCensus, ModelCountBounds, MWReport
from app.models.resolution import BlowupStep, DiscrepancyLedger, LedgerEntry
from app.models.surface import FiberPlace, SurfaceReport
from app.models.weierstrass import (
    CanonicalBoundVerdict,
    DivisorDiagnostic,
    IsolationVerdict,
    MinimalityVerdict,
    PointOnChart,
    WeierstrassChart,
)

# Emitted as decimal strings in JSON, read back from either form
BigInt = Annotated[int, PlainSerializer(lambda value: str(value), return_type=str, when_used="json")]
OrderValue = Union[int, Literal["infinity"]]
CountValue = Union[int, Literal["infinite", "unknown"]]


def order_value(value: Order) -> OrderValue:
    return "infinity" if value == math.inf else int(value)


def point_strings(point: PointOnChart) -> List[str]:
    return [format_rational(value) for value in point.values()]


class TripleOut(BaseModel):
    a: OrderValue
    b: OrderValue
    d: OrderValue

    @classmethod
    def from_triple(cls, triple: OrderTriple) -> "TripleOut":
        return cls(a=order_value(triple.a), b=order_value(triple.b), d=order_value(triple.d))


class FiberOut(BaseModel):
    symbol: str
    type_tag: str
    components: int
    root_lattice: str
    euler: OrderValue
    orders: TripleOut

    @classmethod
    def from_fiber(cls, fiber: KodairaFiber) -> "FiberOut":
        return cls(
            symbol=fiber.symbol,
            type_tag=fiber.type_tag.value,
            components=fiber.components,
            root_lattice=fiber.root_lattice,
            euler=order_value(fiber.euler),
            orders=TripleOut.from_triple(fiber.triple),
        )


class ErrorOut(BaseModel):
    kind: str
    detail: str
    exit_code: int
    diagnostics: Dict[str, str] = {}

    @classmethod
    def from_error(cls, error: AnalysisError) -> "ErrorOut":
        diagnostics = {
            key: value if isinstance(value, str) else json.dumps(value, sort_keys=True, default=str)
            for key, value in error.diagnostics.items()
        }
        return cls(kind=error.kind, detail=error.detail, exit_code=int(error.exit_code), diagnostics=diagnostics)


class DivisorDiagnosticOut(BaseModel):
    divisor: str
    orders: TripleOut
    source: str
    through_point: Optional[bool] = None
    below_threshold: bool

    @classmethod
    def from_diagnostic(cls, diagnostic: DivisorDiagnostic) -> "DivisorDiagnosticOut":
        return cls(
            divisor=diagnostic.divisor.format(),
            orders=TripleOut.from_triple(diagnostic.triple),
            source=diagnostic.source,
            through_point=diagnostic.through_point,
            below_threshold=diagnostic.below_threshold,
        )


class IsolationOut(BaseModel):
    isolated: bool
    mode: str
    in_46_12_class: bool
    meets_46_threshold: bool
    reason: str
    candidates: List[DivisorDiagnosticOut]

    @classmethod
    def from_verdict(cls, verdict: IsolationVerdict) -> "IsolationOut":
        return cls(
            isolated=verdict.isolated,
            mode=verdict.mode.value,
            in_46_12_class=verdict.in_46_12_class,
            meets_46_threshold=verdict.meets_46_threshold,
            reason=verdict.reason,
            candidates=[DivisorDiagnosticOut.from_diagnostic(d) for d in verdict.diagnostics],
        )


class MinimalityOut(BaseModel):
    minimal: bool
    witness: Optional[str] = None
    candidates: List[DivisorDiagnosticOut]

    @classmethod
    def from_verdict(cls, verdict: MinimalityVerdict) -> "MinimalityOut":
        return cls(
            minimal=verdict.minimal,
            witness=verdict.witness.format() if verdict.witness is not None else None,
            candidates=[DivisorDiagnosticOut.from_diagnostic(d) for d in verdict.diagnostics],
        )


class ChartOut(BaseModel):
    name: str
    variables: List[str]
    f: str
    g: str
    delta: str
    twists: Dict[str, int] = {}

    @classmethod
    def from_chart(cls, chart: WeierstrassChart) -> "ChartOut":
        return cls(
            name=chart.chart_name,
            variables=list(chart.variables),
            f=chart.f.format(),
            g=chart.g.format(),
            delta=chart.delta.format(),
            twists={record.divisor_label: record.k for record in chart.twist_log},
        )


class StepOut(BaseModel):
    label: str
    depth: int
    parent: Optional[str] = None
    parent_chart: str
    center: List[str]
    twist_k: int
    base_discrepancy: int
    overlap_consistent: bool
    chart_u: ChartOut
    chart_v: ChartOut

    @classmethod
    def from_step(cls, step: BlowupStep) -> "StepOut":
        return cls(
            label=step.label,
            depth=step.depth,
            parent=step.parent_label,
            parent_chart=step.parent_chart,
            center=point_strings(step.center),
            twist_k=step.twist_k,
            base_discrepancy=step.base_discrepancy,
            overlap_consistent=step.overlap_consistent,
            chart_u=ChartOut.from_chart(step.chart_u),
            chart_v=ChartOut.from_chart(step.chart_v),
        )


class LedgerEntryOut(BaseModel):
    divisor: str
    base_discrepancy: int
    twist_k: int
    net: int

    @classmethod
    def from_entry(cls, entry: LedgerEntry) -> "LedgerEntryOut":
        return cls(
            divisor=entry.divisor_label,
            base_discrepancy=entry.base_discrepancy,
            twist_k=entry.twist_k,
            net=entry.net,
        )


class LedgerOut(BaseModel):
    entries: List[LedgerEntryOut]
    crepant: bool
    total_discrepancy: int

    @classmethod
    def from_ledger(cls, ledger: DiscrepancyLedger) -> "LedgerOut":
        return cls(
            entries=[LedgerEntryOut.from_entry(e) for e in ledger.entries],
            crepant=ledger.crepant,
            total_discrepancy=ledger.total_discrepancy,
        )


class PlaceOut(BaseModel):
    location: str
    geometric_points: int
    fiber: FiberOut

    @classmethod
    def from_place(cls, place: FiberPlace) -> "PlaceOut":
        return cls(
            location=str(place.location),
            geometric_points=place.multiplicity_of_places,
            fiber=FiberOut.from_fiber(place.fiber),
        )


class CensusOut(BaseModel):
    sections: CountValue
    fiber_components: int
    total: CountValue

    @classmethod
    def from_census(cls, census: FloppingCensus) -> "CensusOut":
        return cls(sections=census.sections, fiber_components=census.fiber_components, total=census.total)


class MWOut(BaseModel):
    rank: int
    torsion_order: CountValue
    torsion_structure: str
    torsion_source: Optional[str] = None
    torsion_note: str = ""
    section_count: CountValue
    census: CensusOut
    dichotomy: str
    rationale: str

    @classmethod
    def from_report(cls, report: MWReport) -> "MWOut":
        return cls(
            rank=report.rank,
            torsion_order=report.torsion_order,
            torsion_structure=report.torsion_structure,
            torsion_source=report.torsion.source,
            torsion_note=report.torsion.note,
            section_count=report.section_count,
            census=CensusOut.from_census(report.census),
            dichotomy=report.dichotomy.value,
            rationale=report.rationale,
        )


class DegreesOut(BaseModel):
    n_f: Optional[int] = None
    n_g: Optional[int] = None
    n_delta: Optional[int] = None


class SurfaceOut(BaseModel):
    step: str
    variable: str
    f_restricted: str
    g_restricted: str
    delta_restricted: str
    places: List[PlaceOut]
    total_delta_degree: OrderValue
    euler_check: bool
    rational: bool
    rationality_reason: str
    has_46_12_point: bool
    offending_points: List[str]
    homogenized_degrees: DegreesOut
    isotrivial: bool
    generic_fiber_singular: bool
    infinity_inferred: bool
    charts_agree: bool
    warnings: List[str] = []
    mordell_weil: Optional[MWOut] = None

    @classmethod
    def from_report(
        cls, report: SurfaceReport, euler_ok: bool, reason: str, mw: Optional[MWReport] = None
    ) -> "SurfaceOut":
        return cls(
            step=report.step_label,
            variable=report.variable,
            f_restricted=report.f_restricted.format(),
            g_restricted=report.g_restricted.format(),
            delta_restricted=report.delta_restricted.format(),
            places=[PlaceOut.from_place(place) for place in report.config.places],
            total_delta_degree=order_value(report.config.total_delta_degree),
            euler_check=euler_ok,
            rational=report.rational,
            rationality_reason=reason,
            has_46_12_point=report.has_46_12_point,
            offending_points=[str(place.location) for place in report.offending_places],
            homogenized_degrees=DegreesOut(
                n_f=report.degrees.n_f, n_g=report.degrees.n_g, n_delta=report.degrees.n_delta
            ),
            isotrivial=report.isotrivial,
            generic_fiber_singular=report.generic_fiber_singular,
            infinity_inferred=report.infinity_inferred,
            charts_agree=report.charts_agree,
            warnings=list(report.warnings),
            mordell_weil=MWOut.from_report(mw) if mw is not None else None,
        )


class BoundsOut(BaseModel):
    n_surfaces: int
    lower_any: BigInt
    lower_generic: BigInt
    lower_product: BigInt
    lower_chain: BigInt
    upper_extremal: Optional[BigInt] = None
    upper_note: str
    footnotes: List[str] = []

    @classmethod
    def from_bounds(cls, n_surfaces: int, bounds: ModelCountBounds) -> "BoundsOut":
        return cls(
            n_surfaces=n_surfaces,
            lower_any=bounds.lower_any,
            lower_generic=bounds.lower_generic,
            lower_product=bounds.lower_product,
            lower_chain=bounds.lower_chain,
            upper_extremal=bounds.upper_extremal,
            upper_note=bounds.upper_note,
            footnotes=list(bounds.footnotes),
        )


class CanonicalBoundOut(BaseModel):
    met: bool
    message: str
    assumptions: List[str]

    @classmethod
    def from_verdict(cls, verdict: CanonicalBoundVerdict) -> "CanonicalBoundOut":
        return cls(met=verdict.met, message=verdict.message, assumptions=list(verdict.assumptions))


class ResolutionOut(BaseModel):
    status: str
    exit_code: int
    detail: str = ""
    depth: int
    crepant: bool
    steps: List[StepOut]
    ledger: LedgerOut
    surfaces: List[SurfaceOut]
    canonical_bound: CanonicalBoundOut
    bounds: Optional[BoundsOut] = None


class PointReport(BaseModel):
    point: List[str]
    orders: Optional[TripleOut] = None
    fiber: Optional[FiberOut] = None
    isolation: Optional[IsolationOut] = None
    resolution: Optional[ResolutionOut] = None
    error: Optional[ErrorOut] = None


class DivisorReport(BaseModel):
    divisor: str
    orders: Optional[TripleOut] = None
    fiber: Optional[FiberOut] = None
    twist_k: int = 0
    discrepancy: Optional[LedgerEntryOut] = None
    error: Optional[ErrorOut] = None


class ModelOut(BaseModel):
    delta: str
    minimality: MinimalityOut


class JobEcho(BaseModel):
    variables: List[str]
    f: str
    g: str
    points: List[List[str]]
    divisors: List[str]
    recursion_limit: int
    n_surfaces: Optional[int] = None
    isolation_mode: str = "class"


class Report(BaseModel):
    version: str
    command: Literal["classify", "resolve"]
    job: JobEcho
    model: ModelOut
    points: List[PointReport]
    divisors: List[DivisorReport]
    warnings: List[str] = []
    exit_code: int

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)
