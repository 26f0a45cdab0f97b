import enum
from dataclasses import dataclass
from typing import Optional, Tuple, Union

# Section and curve counts: an int, or one of these markers
INFINITE = "infinite"
UNKNOWN = "unknown"
Count = Union[int, str]


class Dichotomy(str, enum.Enum):
    FINITE = "FiniteFlopCandidates"
    INFINITE = "InfiniteFlopCandidates"


@dataclass(frozen=True)
class ExtremalEntry:
    symbols: Tuple[str, ...]
    torsion: str
    torsion_order: int
    source: str
    line: int


@dataclass(frozen=True)
class TorsionInfo:
    known: bool
    order: Optional[int] = None
    structure: Optional[str] = None
    note: str = ""
    source: Optional[str] = None


@dataclass(frozen=True)
class FloppingCensus:
    sections: Count
    fiber_components: int
    total: Count

    @property
    def finite(self) -> bool:
        return isinstance(self.total, int)


@dataclass(frozen=True)
class DichotomyVerdict:
    dichotomy: Dichotomy
    rationale: str


@dataclass(frozen=True)
class MWReport:
    rank: int
    torsion: TorsionInfo
    section_count: Count
    census: FloppingCensus
    dichotomy: Dichotomy
    rationale: str

    @property
    def torsion_order(self) -> Count:
        return self.torsion.order if self.torsion.known else UNKNOWN

    @property
    def torsion_structure(self) -> str:
        return self.torsion.structure if self.torsion.known else UNKNOWN


@dataclass(frozen=True)
class ModelCountBounds:
    lower_any: int
    lower_generic: int
    lower_product: int
    lower_chain: int
    upper_extremal: Optional[int]
    upper_note: str = ""
    footnotes: Tuple[str, ...] = ()
