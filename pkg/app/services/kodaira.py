import logging
import math
import re
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from app.core.exceptions import MalformedTripleError
from app.models.kodaira import KodairaFiber, KodairaRow, KodairaType, Order, OrderTriple

logger = logging.getLogger(__name__)

INF = None  # open upper bound in a table row

# Short Weierstrass order table over C; exactly one row matches every consistent triple.
KODAIRA_TABLE: Tuple[KodairaRow, ...] = (
    KodairaRow(KodairaType.I0, (0, INF), (0, INF), (0, 0)),
    KodairaRow(KodairaType.IN, (0, 0), (0, 0), (1, INF)),
    KodairaRow(KodairaType.II, (1, INF), (1, 1), (2, 2)),
    KodairaRow(KodairaType.III, (1, 1), (2, INF), (3, 3)),
    KodairaRow(KodairaType.IV, (2, INF), (2, 2), (4, 4)),
    KodairaRow(KodairaType.I0_STAR, (2, INF), (3, 3), (6, 6)),
    KodairaRow(KodairaType.I0_STAR, (2, 2), (4, INF), (6, 6)),
    KodairaRow(KodairaType.IN_STAR, (2, 2), (3, 3), (7, INF)),
    KodairaRow(KodairaType.IV_STAR, (3, INF), (4, 4), (8, 8)),
    KodairaRow(KodairaType.III_STAR, (3, 3), (5, INF), (9, 9)),
    KodairaRow(KodairaType.II_STAR, (4, INF), (5, 5), (10, 10)),
    KodairaRow(KodairaType.NON_KODAIRA, (4, INF), (6, INF), (12, INF)),
)

# type -> (components, root lattice) for the types without a parameter
_FIXED_DATA: Dict[KodairaType, Tuple[int, str]] = {
    KodairaType.I0: (1, "0"),
    KodairaType.II: (1, "0"),
    KodairaType.III: (2, "A1"),
    KodairaType.IV: (3, "A2"),
    KodairaType.I0_STAR: (5, "D4"),
    KodairaType.IV_STAR: (7, "E6"),
    KodairaType.III_STAR: (8, "E7"),
    KodairaType.II_STAR: (9, "E8"),
    KodairaType.NON_KODAIRA: (1, "none"),
}

# Smallest triple realizing each symbol
_CANONICAL_TRIPLES: Dict[KodairaType, Tuple[int, int, int]] = {
    KodairaType.I0: (0, 0, 0),
    KodairaType.II: (1, 1, 2),
    KodairaType.III: (1, 2, 3),
    KodairaType.IV: (2, 2, 4),
    KodairaType.I0_STAR: (2, 3, 6),
    KodairaType.IV_STAR: (3, 4, 8),
    KodairaType.III_STAR: (3, 5, 9),
    KodairaType.II_STAR: (4, 5, 10),
    KodairaType.NON_KODAIRA: (4, 6, 12),
}

_SYMBOL_RE = re.compile(r"^I(\d+)(\*?)$")


@dataclass(frozen=True)
class TotalityReport:
    scanned: int
    unmatched: Tuple[OrderTriple, ...]
    ambiguous: Tuple[OrderTriple, ...]

    @property
    def ok(self) -> bool:
        return not self.unmatched and not self.ambiguous


def meets_46_threshold(triple: OrderTriple) -> bool:
    """Weaker predicate: a >= 4 and b >= 6"""
    return triple.a >= 4 and triple.b >= 6


def is_46_12_class(triple: OrderTriple) -> bool:
    """(a = 4 and b >= 6) or (a >= 4 and b = 6), with d = 12"""
    return ((triple.a == 4 and triple.b >= 6) or (triple.a >= 4 and triple.b == 6)) and triple.d == 12


def in_canonical_range(triple: OrderTriple) -> bool:
    """4 <= a < 8 and 6 <= b < 12; one base blow-up covers these, d > 12 included"""
    return 4 <= triple.a < 8 and 6 <= triple.b < 12


def reduce_triple(triple: OrderTriple) -> OrderTriple:
    """(a, b, d) -> (a-4, b-6, d-12); defined only above the (4,6) threshold"""
    if not meets_46_threshold(triple):
        raise MalformedTripleError(f"{triple} is below the (4,6) threshold and cannot be reduced")
    return OrderTriple(triple.a - 4, triple.b - 6, triple.d - 12)


class KodairaService:
    def __init__(self, table: Sequence[KodairaRow] = KODAIRA_TABLE):
        self.table = tuple(table)

    def _matching_rows(self, triple: OrderTriple) -> List[KodairaRow]:
        return [row for row in self.table if row.matches(triple)]

    def classify(self, triple: OrderTriple) -> KodairaFiber:
        """Look up the Kodaira fiber of a vanishing-order triple"""
        if not triple.is_consistent:
            raise MalformedTripleError(
                f"inconsistent order triple {triple}: d must equal min(3a, 2b) when 3a != 2b",
                diagnostics={"triple": str(triple)},
            )
        rows = self._matching_rows(triple)
        types = {row.type_tag for row in rows}
        if len(types) != 1:
            raise MalformedTripleError(
                f"order triple {triple} matches {len(types)} table rows",
                diagnostics={"triple": str(triple), "rows": sorted(t.value for t in types)},
            )
        return self._build_fiber(triple, rows[0].type_tag)

    def scan_totality(self, max_a: int = 8, max_b: int = 8, max_d: int = 24) -> TotalityReport:
        """Scan every consistent triple of the grid (infinite orders included) against the table"""
        unmatched: List[OrderTriple] = []
        ambiguous: List[OrderTriple] = []
        scanned = 0
        a_values: List[Order] = list(range(max_a + 1)) + [math.inf]
        b_values: List[Order] = list(range(max_b + 1)) + [math.inf]
        for a in a_values:
            for b in b_values:
                for d in range(max_d + 1):
                    triple = OrderTriple(a, b, d)
                    if not triple.is_consistent:
                        continue
                    scanned += 1
                    types = {row.type_tag for row in self._matching_rows(triple)}
                    if not types:
                        unmatched.append(triple)
                    elif len(types) > 1:
                        ambiguous.append(triple)
        report = TotalityReport(scanned, tuple(unmatched), tuple(ambiguous))
        if not report.ok:
            logger.warning(
                "Kodaira table scan: %d unmatched, %d ambiguous of %d triples",
                len(unmatched), len(ambiguous), scanned,
            )
        return report

    def render_table(self) -> str:
        """Fixed-format text dump of the rows classify uses"""
        lines = ["type        orders                    components  lattice"]
        for row in self.table:
            components, lattice = self._row_data(row.type_tag)
            lines.append(f"{row.describe():<37} {components:<11} {lattice}")
        lines.append("euler contribution = d for every row")
        return "\n".join(lines)

    @staticmethod
    def _row_data(type_tag: KodairaType) -> Tuple[str, str]:
        if type_tag == KodairaType.IN:
            return "n", "A(n-1)"
        if type_tag == KodairaType.IN_STAR:
            return "n+5", "D(n+4)"
        components, lattice = _FIXED_DATA[type_tag]
        return str(components), lattice

    @staticmethod
    def _build_fiber(triple: OrderTriple, type_tag: KodairaType) -> KodairaFiber:
        if type_tag == KodairaType.IN:
            n = triple.d
            lattice = "0" if n == 1 else f"A{n - 1}"
            return KodairaFiber(triple, type_tag, n, n, lattice, triple.d)
        if type_tag == KodairaType.IN_STAR:
            n = triple.d - 6
            return KodairaFiber(triple, type_tag, n, n + 5, f"D{n + 4}", triple.d)
        components, lattice = _FIXED_DATA[type_tag]
        return KodairaFiber(triple, type_tag, 0, components, lattice, triple.d)

    def fiber_from_symbol(self, symbol: str) -> KodairaFiber:
        """Canonical fiber for a symbol such as "I9", "I4*", "II" or "IV*" """
        text = symbol.strip()
        match = _SYMBOL_RE.match(text)
        if match:
            n = int(match.group(1))
            if match.group(2):
                return self.classify(OrderTriple(2, 3, 6 + n))
            return self.classify(OrderTriple(0, 0, n))
        by_symbol = {
            type_tag.value.replace("star", "*"): type_tag
            for type_tag in _CANONICAL_TRIPLES
        }
        if text not in by_symbol or by_symbol[text] == KodairaType.NON_KODAIRA:
            raise MalformedTripleError(f"unknown Kodaira symbol {symbol!r}")
        return self.classify(OrderTriple(*_CANONICAL_TRIPLES[by_symbol[text]]))


def corrupted_table() -> Tuple[KodairaRow, ...]:
    """Table with the III row removed, used to exercise the totality check"""
    return tuple(row for row in KODAIRA_TABLE if row.type_tag != KodairaType.III)
