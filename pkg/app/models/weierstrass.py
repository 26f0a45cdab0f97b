import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

from app.core.exceptions import VariableMismatchError
from app.core.polyring import Coefficient, RatPoly, format_rational, to_fraction
from app.models.kodaira import OrderTriple


@dataclass(frozen=True)
class PointOnChart:
    """Rational point on a two-variable chart, stored in the chart's variable order"""

    coordinates: Tuple[Tuple[str, Fraction], ...]

    @classmethod
    def from_mapping(cls, values: Mapping[str, Coefficient], variables: Tuple[str, ...]) -> "PointOnChart":
        if set(values) != set(variables):
            raise VariableMismatchError(f"point must assign exactly {list(variables)}, got {sorted(values)}")
        return cls(tuple((name, to_fraction(values[name])) for name in variables))

    @classmethod
    def origin(cls, variables: Tuple[str, ...]) -> "PointOnChart":
        return cls(tuple((name, Fraction(0)) for name in variables))

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(self.coordinates)

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.coordinates)

    def values(self) -> Tuple[Fraction, ...]:
        return tuple(value for _, value in self.coordinates)

    def __str__(self) -> str:
        return "(" + ", ".join(f"{name}={format_rational(value)}" for name, value in self.coordinates) + ")"


class IsolationMode(str, enum.Enum):
    """Which points resolve_isolated accepts as blow-up centers"""

    CLASS = "class"  # the (4,6,12) class, d = 12
    THRESHOLD = "threshold"  # also 4 <= a < 8, 6 <= b < 12 with d > 12


@dataclass(frozen=True)
class TwistRecord:
    divisor_label: str
    k: int


@dataclass(frozen=True)
class WeierstrassChart:
    """y^2 = x^3 + f*x + g on a named affine chart with coordinates ``variables``"""

    chart_name: str
    variables: Tuple[str, str]
    f: RatPoly
    g: RatPoly
    delta: RatPoly
    exceptional_divisors: Tuple[Tuple[RatPoly, str], ...] = ()
    twist_log: Tuple[TwistRecord, ...] = ()


@dataclass(frozen=True)
class DivisorDiagnostic:
    divisor: RatPoly
    triple: OrderTriple
    source: str  # "user" or "auto"
    through_point: Optional[bool] = None
    below_threshold: bool = True


@dataclass(frozen=True)
class MinimalityVerdict:
    minimal: bool
    witness: Optional[RatPoly] = None
    diagnostics: Tuple[DivisorDiagnostic, ...] = ()


@dataclass(frozen=True)
class IsolationVerdict:
    isolated: bool
    point: PointOnChart
    triple: OrderTriple
    in_46_12_class: bool
    meets_46_threshold: bool
    diagnostics: Tuple[DivisorDiagnostic, ...] = ()
    reason: str = ""
    mode: IsolationMode = IsolationMode.CLASS


@dataclass(frozen=True)
class CanonicalBoundVerdict:
    met: bool
    message: str
    offending: Optional[OrderTriple] = None
    assumptions: Tuple[str, ...] = field(
        default=("isolated fibers of a minimal model with normal-crossing discriminant (asserted by caller)",)
    )
