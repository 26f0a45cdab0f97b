import enum
from dataclasses import dataclass
from typing import Optional, Tuple

from app.models.surface import SurfaceReport
from app.models.weierstrass import PointOnChart, WeierstrassChart


class ResolutionStatus(str, enum.Enum):
    RESOLVED = "Resolved"
    RECURSION_LIMIT = "RecursionLimit"
    NON_RATIONAL_CENTER = "NonRationalCenter"
    UNRESOLVED_CENTER = "UnresolvedCenter"


@dataclass(frozen=True)
class BlowupStep:
    label: str
    depth: int
    center: PointOnChart
    parent_chart: str
    parent_label: Optional[str]
    chart_u: WeierstrassChart
    chart_v: WeierstrassChart
    twist_k: int
    base_discrepancy: int = 1
    overlap_consistent: bool = True


@dataclass(frozen=True)
class LedgerEntry:
    divisor_label: str
    base_discrepancy: int
    twist_k: int

    @property
    def net(self) -> int:
        return self.base_discrepancy - self.twist_k


@dataclass(frozen=True)
class DiscrepancyLedger:
    entries: Tuple[LedgerEntry, ...] = ()

    @property
    def nets(self) -> Tuple[int, ...]:
        return tuple(entry.net for entry in self.entries)

    @property
    def crepant(self) -> bool:
        return all(net == 0 for net in self.nets)

    @property
    def total_discrepancy(self) -> int:
        return min(self.nets, default=0)


@dataclass(frozen=True)
class ResolutionTree:
    root: WeierstrassChart
    root_point: PointOnChart
    steps: Tuple[BlowupStep, ...]
    ledger: DiscrepancyLedger
    surfaces: Tuple[SurfaceReport, ...]
    status: ResolutionStatus
    detail: str = ""

    @property
    def depth(self) -> int:
        return max((step.depth for step in self.steps), default=0)

    @property
    def final_surfaces(self) -> Tuple[SurfaceReport, ...]:
        """Surfaces that carry no further (4,6,12) point"""
        return tuple(surface for surface in self.surfaces if not surface.has_46_12_point)
