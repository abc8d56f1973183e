import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

WindingStatus = Literal["certified", "near_origin"]


class WindingOptions(BaseModel):
    """
    Refinement controls for argument accumulation along a closed curve.
    """

    model_config = ConfigDict(frozen=True)

    max_turn: float = Field(default=math.pi / 2, gt=0, le=math.pi / 2)
    origin_factor: float = Field(default=1e-9, gt=0)  # times the curve scale
    max_points: int = Field(default=100_000, ge=16)
    initial_points: int = Field(default=64, ge=4)


class WindingReport(BaseModel):
    """
    Winding number of a closed image curve about the origin.
    """

    model_config = ConfigDict(frozen=True)

    value: int
    min_distance: float
    refinements: int
    status: WindingStatus
    total_angle: float
    residual: float  # |total_angle - 2 pi value|
    points: int

    @property
    def certified(self) -> bool:
        return self.status == "certified"
