import logging
from math import comb
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from app.core.config import Settings, settings as default_settings
from app.core.exceptions import InconsistentConfigurationError, MalformedTripleError
from app.models.mordell_weil import (
    INFINITE,
    UNKNOWN,
    Dichotomy,
    DichotomyVerdict,
    ExtremalEntry,
    FloppingCensus,
    ModelCountBounds,
    MWReport,
    TorsionInfo,
)
from app.models.surface import FiberConfiguration, SurfaceReport
from app.services.kodaira import KodairaService
from app.services.surface import EULER_TOTAL

logger = logging.getLogger(__name__)

MAX_RANK = 8
# A rational elliptic surface has at most this many sections disjoint from a fixed one
DISJOINT_SECTION_CAP = 240
FLOPS_PER_SURFACE = 9
LOWER_ANY = 2
LOWER_GENERIC = 9


def torsion_order(label: str) -> int:
    """Order of a group label such as "0", "Z/2" or "Z/4 x Z/2" """
    text = label.strip()
    if text in ("0", "1"):
        return 1
    order = 1
    for part in text.split("x"):
        part = part.strip()
        if not part.startswith("Z/") or not part[2:].isdigit() or int(part[2:]) < 2:
            raise InconsistentConfigurationError(f"cannot read torsion group {label!r}")
        order *= int(part[2:])
    return order


def rank_from_symbols(symbols: Sequence[str], kodaira: KodairaService) -> Tuple[int, int]:
    """(Shioda-Tate rank, Euler sum) of a list of fiber symbols"""
    fibers = [kodaira.fiber_from_symbol(symbol) for symbol in symbols]
    euler = sum(fiber.euler for fiber in fibers)
    rank = MAX_RANK - sum(fiber.components - 1 for fiber in fibers)
    return rank, euler


class MordellWeilService:
    def __init__(
        self,
        settings: Settings = default_settings,
        kodaira: Optional[KodairaService] = None,
        table_path: Optional[Path] = None,
    ):
        self.settings = settings
        self.kodaira = kodaira or KodairaService()
        self.table = self.load_extremal_table(table_path or settings.extremal_table_path)

    # ============ EXTREMAL TABLE ============

    def load_extremal_table(self, path: Path) -> Dict[Tuple[str, ...], ExtremalEntry]:
        """Parse and self-check the extremal configuration file"""
        path = Path(path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise InconsistentConfigurationError(f"cannot read extremal table {path}: {exc}") from exc

        table: Dict[Tuple[str, ...], ExtremalEntry] = {}
        for number, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            entry = self._parse_record(line, number, path)
            key = tuple(sorted(entry.symbols))
            if key in table:
                raise InconsistentConfigurationError(f"{path}:{number}: duplicate configuration {', '.join(key)}")
            table[key] = entry
        logger.debug("Loaded %d extremal configurations from %s", len(table), path)
        return table

    def _parse_record(self, line: str, number: int, path: Path) -> ExtremalEntry:
        fields: Dict[str, str] = {}
        for part in line.split(";"):
            key, sep, value = part.partition(":=")
            if not sep:
                raise InconsistentConfigurationError(f"{path}:{number}: expected 'key := value', got {part.strip()!r}")
            fields[key.strip()] = value.strip()
        missing = {"config", "torsion", "source"} - set(fields)
        if missing:
            raise InconsistentConfigurationError(f"{path}:{number}: missing fields {sorted(missing)}")

        symbols = tuple(symbol.strip() for symbol in fields["config"].split(",") if symbol.strip())
        try:
            rank, euler = rank_from_symbols(symbols, self.kodaira)
        except MalformedTripleError as exc:
            raise InconsistentConfigurationError(f"{path}:{number}: {exc.detail}") from exc
        if euler != EULER_TOTAL or rank != 0:
            raise InconsistentConfigurationError(
                f"{path}:{number}: {', '.join(symbols)} has Euler sum {euler} and rank {rank}; expected 12 and 0"
            )
        return ExtremalEntry(
            symbols=symbols,
            torsion=fields["torsion"],
            torsion_order=torsion_order(fields["torsion"]),
            source=fields["source"],
            line=number,
        )

    # ============ SHIODA-TATE AND TORSION ============

    def shioda_tate_rank(self, config: FiberConfiguration) -> int:
        """rank = 8 - sum over singular fibers of (components - 1)"""
        if not all(place.fiber.is_kodaira for place in config.places):
            raise InconsistentConfigurationError("configuration contains a non-Kodaira fiber")
        euler = sum(place.euler_total for place in config.places)
        if euler != EULER_TOTAL:
            raise InconsistentConfigurationError(
                f"Euler sum {euler} != 12: not a rational elliptic surface",
                diagnostics={"configuration": config.describe()},
            )
        rank = MAX_RANK - sum(
            place.multiplicity_of_places * (place.fiber.components - 1) for place in config.places
        )
        if rank < 0:
            raise InconsistentConfigurationError(
                f"negative Shioda-Tate rank {rank}", diagnostics={"configuration": config.describe()}
            )
        return rank

    def torsion_lookup(self, config: FiberConfiguration) -> TorsionInfo:
        rank = self.shioda_tate_rank(config)
        if rank > 0:
            return TorsionInfo(known=False, note=f"rank {rank} > 0: torsion not determined here (generically trivial)")
        entry = self.table.get(tuple(sorted(config.symbols())))
        if entry is None:
            return TorsionInfo(known=False, note="rank 0 configuration not listed in the extremal table")
        return TorsionInfo(
            known=True,
            order=entry.torsion_order,
            structure=entry.torsion,
            note=f"extremal table line {entry.line}",
            source=entry.source,
        )

    # ============ FLOPS ============

    def flopping_census(self, config: FiberConfiguration, rank: int, torsion: TorsionInfo) -> FloppingCensus:
        """Flopping-curve candidates: sections plus fiber components"""
        components = sum(place.multiplicity_of_places * place.fiber.components for place in config.places)
        if rank > 0:
            sections = INFINITE
        elif torsion.known:
            sections = torsion.order
        else:
            sections = UNKNOWN
        total = sections + components if isinstance(sections, int) else sections
        return FloppingCensus(sections=sections, fiber_components=components, total=total)

    def dichotomy(self, rank: int, torsion: TorsionInfo) -> DichotomyVerdict:
        cap = f"at most {DISJOINT_SECTION_CAP} sections are disjoint from a fixed section"
        if rank > 0:
            return DichotomyVerdict(
                Dichotomy.INFINITE,
                f"rank {rank} > 0: infinitely many sections, hence infinitely many flopping-curve candidates; "
                f"infinitely many flopping curves imply positive rank of MW(Y/T); {cap}",
            )
        caveat = "" if torsion.known else " (torsion not listed: finite but unknown section count)"
        return DichotomyVerdict(
            Dichotomy.FINITE,
            f"rank 0 of MW(Y/T) implies only finitely many flopping curves{caveat}; {cap}",
        )

    def analyze_surface(self, report: SurfaceReport) -> MWReport:
        """Rank, torsion, census and dichotomy of a rational exceptional surface"""
        if not report.rational:
            raise InconsistentConfigurationError(
                f"surface over {report.step_label} is not a rational elliptic surface",
                diagnostics={"configuration": report.config.describe()},
            )
        rank = self.shioda_tate_rank(report.config)
        torsion = self.torsion_lookup(report.config)
        census = self.flopping_census(report.config, rank, torsion)
        verdict = self.dichotomy(rank, torsion)
        logger.info("Surface over %s: rank %d, census %s", report.step_label, rank, census.total)
        return MWReport(
            rank=rank,
            torsion=torsion,
            section_count=census.sections,
            census=census,
            dichotomy=verdict.dichotomy,
            rationale=verdict.rationale,
        )

    # ============ MODEL COUNTS ============

    def model_count_bounds(
        self, n_surfaces: int, censuses: Sequence[FloppingCensus], chain_length: int = 1
    ) -> ModelCountBounds:
        """Lower and upper bounds on the number of terminal models.

        A single census stands for all ``n_surfaces`` surfaces; otherwise one
        census per surface is expected.
        """
        if n_surfaces < 1:
            raise InconsistentConfigurationError(f"n_surfaces must be positive, got {n_surfaces}")
        if not censuses:
            raise InconsistentConfigurationError("model count bounds need at least one census")
        if len(censuses) == 1:
            per_surface: List[FloppingCensus] = list(censuses) * n_surfaces
        elif len(censuses) == n_surfaces:
            per_surface = list(censuses)
        else:
            raise InconsistentConfigurationError(
                f"{len(censuses)} censuses given for {n_surfaces} surfaces"
            )

        lower_product = FLOPS_PER_SURFACE**n_surfaces
        upper: Optional[int] = None
        footnotes: List[str] = []
        if not all(census.finite for census in per_surface):
            note = "NotApplicable: a census is infinite or unknown"
        elif any(census.total < FLOPS_PER_SURFACE for census in per_surface):
            note = f"NotApplicable: a surface carries fewer than {FLOPS_PER_SURFACE} curves"
        else:
            upper = sum(comb(census.total, FLOPS_PER_SURFACE) * 2**FLOPS_PER_SURFACE for census in per_surface)
            note = "sum over surfaces of C(curves, 9) * 2^9"
            if lower_product > upper:
                footnotes.append(
                    f"lower_product 9^{n_surfaces} = {lower_product} exceeds upper_extremal {upper}: "
                    "the upper bound adds C(curves, 9) * 2^9 over surfaces while the lower bound multiplies "
                    "9 flops over independent surfaces; both formulas are reported as stated"
                )
        return ModelCountBounds(
            lower_any=LOWER_ANY,
            lower_generic=LOWER_GENERIC,
            lower_product=lower_product,
            lower_chain=chain_length + 1,
            upper_extremal=upper,
            upper_note=note,
            footnotes=tuple(footnotes),
        )
