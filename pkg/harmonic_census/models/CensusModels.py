import math
from typing import List, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from harmonic_census.helpers.BoxHelper import Rectangle
from harmonic_census.models.FamilyModels import FamilyParams


class CensusOptions(BaseModel):
    """
    Tolerances and budgets of the zero census.
    """

    model_config = ConfigDict(frozen=True)

    tol_f: float = Field(default=1e-10, gt=0)  # residual, relative to 1 + |a|
    tol_z: float = Field(default=1e-12, gt=0)  # Newton step
    tol_det: float = Field(default=1e-8, gt=0)  # relative to |h'|^2 + |g'|^2
    max_iters: int = Field(default=50, ge=1)
    cell_min: float = Field(default=1e-3, gt=0)  # relative to R_max
    critical_exclusion: float = Field(default=1e-6, ge=0)
    jitter: float = Field(default=1e-7, gt=0)  # relative to cell diameter
    max_jitters: int = Field(default=5, ge=0)
    seed_grid: int = Field(default=3, ge=1)
    merge_factor: float = Field(default=10.0, gt=0)  # merge radius = merge_factor * tol_z
    max_turn: float = Field(default=math.pi / 2, gt=0, le=math.pi / 2)
    max_points: int = Field(default=100_000, ge=16)


class ZeroCertificate(BaseModel):
    """
    A refined zero of f_a together with the evidence for its order.
    """

    model_config = ConfigDict(frozen=True)

    location: complex
    order: int  # +1 sense-preserving, -1 sense-reversing
    residual: float
    jacobian_det: float
    cell: Optional[Rectangle] = None
    iterations: int = 0
    residual_history: List[float] = Field(default_factory=list)


class CensusReport(BaseModel):
    """
    Certified list of zeros of f_a with their order bookkeeping.
    """

    model_config = ConfigDict(frozen=True)

    params: FamilyParams
    zeros: List[ZeroCertificate]
    z_plus: int
    z_minus: int
    total: int
    order_sum: int
    consistent: bool
    warnings: List[str] = Field(default_factory=list)
    caustic_winding: Optional[int] = None
    predicted_total: Optional[int] = None
    rho_min: Optional[float] = None
    R_max: Optional[float] = None
    leaf_count: int = 0
    # leaf windings summed by position relative to |z| = 1
    outside_winding: int = 0
    inside_winding: int = 0
    crossing_winding: int = 0

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "re": [zero.location.real for zero in self.zeros],
                "im": [zero.location.imag for zero in self.zeros],
                "order": [zero.order for zero in self.zeros],
                "residual": [zero.residual for zero in self.zeros],
            },
            columns=["re", "im", "order", "residual"],
        )
