from fractions import Fraction
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator

from app.models.weierstrass import IsolationMode

Coordinate = Union[int, str]


class JobSpec(BaseModel):
    """One analysis job: a Weierstrass model y^2 = x^3 + f*x + g on a two-variable chart"""
    variables: List[str] = Field(..., min_length=2, max_length=2)
    f: str
    g: str
    points: List[List[Coordinate]] = []
    divisors: List[str] = []
    recursion_limit: Optional[int] = Field(None, ge=1)
    n_surfaces: Optional[int] = Field(None, ge=1)
    isolation_mode: Optional[IsolationMode] = None

    class Config:
        extra = "forbid"

    @field_validator("variables")
    @classmethod
    def check_variables(cls, value: List[str]) -> List[str]:
        for name in value:
            if not name.isidentifier():
                raise ValueError(f"{name!r} is not a valid variable name")
        if value[0] == value[1]:
            raise ValueError("the two variables must be distinct")
        return value

    @field_validator("points")
    @classmethod
    def check_points(cls, value: List[List[Coordinate]]) -> List[List[Coordinate]]:
        for index, point in enumerate(value):
            if len(point) != 2:
                raise ValueError(f"point {index} must have exactly two coordinates")
            for coordinate in point:
                if isinstance(coordinate, bool):
                    raise ValueError(f"point {index}: booleans are not coordinates")
                try:
                    Fraction(coordinate) if isinstance(coordinate, int) else Fraction(coordinate.strip())
                except (ValueError, ZeroDivisionError):
                    raise ValueError(f"point {index}: {coordinate!r} is not a rational number") from None
        return value

    def parsed_points(self) -> List[Tuple[Fraction, Fraction]]:
        return [
            tuple(Fraction(c) if isinstance(c, int) else Fraction(c.strip()) for c in point)
            for point in self.points
        ]
