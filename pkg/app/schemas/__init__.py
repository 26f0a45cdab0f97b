from app.schemas.job import JobSpec
from app.schemas.report import (
    BoundsOut,
    DivisorReport,
    ErrorOut,
    FiberOut,
    IsolationOut,
    PointReport,
    Report,
    ResolutionOut,
    SurfaceOut,
    TripleOut,
)
