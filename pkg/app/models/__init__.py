# Domain types shared by the services
from app.models.kodaira import KodairaFiber, KodairaRow, KodairaType, OrderTriple
from app.models.weierstrass import (
    CanonicalBoundVerdict,
    DivisorDiagnostic,
    IsolationMode,
    IsolationVerdict,
    MinimalityVerdict,
    PointOnChart,
    TwistRecord,
    WeierstrassChart,
)
from app.models.surface import (
    FiberConfiguration,
    FiberLocation,
    FiberPlace,
    HomogenizedDegrees,
    LocationKind,
    RationalityVerdict,
    SurfaceReport,
)
from app.models.resolution import (
    BlowupStep,
    DiscrepancyLedger,
    LedgerEntry,
    ResolutionStatus,
    ResolutionTree,
)
from app.models.mordell_weil import (
    Dichotomy,
    DichotomyVerdict,
    ExtremalEntry,
    FloppingCensus,
    ModelCountBounds,
    MWReport,
    TorsionInfo,
)

__all__ = [
    "KodairaFiber",
    "KodairaRow",
    "KodairaType",
    "OrderTriple",
    "CanonicalBoundVerdict",
    "DivisorDiagnostic",
    "IsolationMode",
    "IsolationVerdict",
    "MinimalityVerdict",
    "PointOnChart",
    "TwistRecord",
    "WeierstrassChart",
    "FiberConfiguration",
    "FiberLocation",
    "FiberPlace",
    "HomogenizedDegrees",
    "LocationKind",
    "RationalityVerdict",
    "SurfaceReport",
    "BlowupStep",
    "DiscrepancyLedger",
    "LedgerEntry",
    "ResolutionStatus",
    "ResolutionTree",
    "Dichotomy",
    "DichotomyVerdict",
    "ExtremalEntry",
    "FloppingCensus",
    "ModelCountBounds",
    "MWReport",
    "TorsionInfo",
]
