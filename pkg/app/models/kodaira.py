import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from app.core.exceptions import MalformedTripleError

Order = Union[int, float]


def format_order(value: Order) -> str:
    return "inf" if value == math.inf else str(value)


def _check_order(name: str, value: Order) -> None:
    if value == math.inf:
        return
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise MalformedTripleError(f"order {name}={value!r} must be a non-negative integer or infinity")


class KodairaType(str, enum.Enum):
    I0 = "I0"
    IN = "In"
    II = "II"
    III = "III"
    IV = "IV"
    I0_STAR = "I0star"
    IN_STAR = "Instar"
    IV_STAR = "IVstar"
    III_STAR = "IIIstar"
    II_STAR = "IIstar"
    NON_KODAIRA = "NonKodaira"


@dataclass(frozen=True)
class OrderTriple:
    """Orders of vanishing (a, b, d) of f, g and the discriminant"""

    a: Order
    b: Order
    d: Order

    def __post_init__(self):
        _check_order("a", self.a)
        _check_order("b", self.b)
        _check_order("d", self.d)
        if self.a != math.inf and self.b != math.inf and self.d == math.inf:
            raise MalformedTripleError(f"{self}: finite orders of f and g force a finite discriminant order")

    @property
    def is_consistent(self) -> bool:
        """d = min(3a, 2b) when 3a != 2b, and d >= 3a otherwise"""
        three_a, two_b = 3 * self.a, 2 * self.b
        if three_a == math.inf and two_b == math.inf:
            return False
        if three_a != two_b:
            return self.d == min(three_a, two_b)
        return self.d >= three_a

    def __str__(self) -> str:
        return f"({format_order(self.a)},{format_order(self.b)},{format_order(self.d)})"


@dataclass(frozen=True)
class KodairaRow:
    """One row of the order table; hi=None means unbounded (infinity included)"""

    type_tag: KodairaType
    a_range: Tuple[int, Optional[int]]
    b_range: Tuple[int, Optional[int]]
    d_range: Tuple[int, Optional[int]]

    @staticmethod
    def _within(value: Order, bounds: Tuple[int, Optional[int]]) -> bool:
        lo, hi = bounds
        if value < lo:
            return False
        return hi is None or value <= hi

    def matches(self, triple: OrderTriple) -> bool:
        return (
            self._within(triple.a, self.a_range)
            and self._within(triple.b, self.b_range)
            and self._within(triple.d, self.d_range)
        )

    def describe(self) -> str:
        def fmt(bounds: Tuple[int, Optional[int]]) -> str:
            lo, hi = bounds
            if hi is None:
                return f">={lo}"
            if hi == lo:
                return str(lo)
            return f"{lo}..{hi}"

        return f"{self.type_tag.value:<11} a {fmt(self.a_range):<5} b {fmt(self.b_range):<5} d {fmt(self.d_range)}"


@dataclass(frozen=True)
class KodairaFiber:
    triple: OrderTriple
    type_tag: KodairaType
    n: int
    components: int
    root_lattice: str
    euler: Order

    @property
    def symbol(self) -> str:
        if self.type_tag == KodairaType.IN:
            return f"I{self.n}"
        if self.type_tag == KodairaType.IN_STAR:
            return f"I{self.n}*"
        if self.type_tag == KodairaType.NON_KODAIRA:
            return "non-Kodaira"
        return self.type_tag.value.replace("star", "*")

    @property
    def is_kodaira(self) -> bool:
        return self.type_tag != KodairaType.NON_KODAIRA
