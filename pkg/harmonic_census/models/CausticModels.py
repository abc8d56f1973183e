from typing import List, Literal, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from harmonic_census.models.FamilyModels import FamilyParams

Orientation = Literal["counterclockwise", "clockwise"]
Multiplicity = Literal["double", "single"]


class EpicycloidSpec(BaseModel):
    """
    Rolling-circle description of the base epicycloid E_a.
    """

    model_config = ConfigDict(frozen=True)

    R: float  # fixed circle
    r: float  # rolling circle
    cusps: int
    revolutions: int
    orientation: Orientation

    @property
    def inner_radius(self) -> float:
        return self.R

    @property
    def outer_radius(self) -> float:
        return self.R + 2.0 * self.r


class AffineMap(BaseModel):
    """
    The map p -> linear . p + offset carrying E_a onto the caustic.
    """

    model_config = ConfigDict(frozen=True)

    linear: Tuple[Tuple[float, float], Tuple[float, float]]
    offset: Tuple[float, float]

    @property
    def determinant(self) -> float:
        (p, q), (s, t) = self.linear
        return p * t - q * s

    def apply(self, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        (p, q), (s, t) = self.linear
        return p * x + q * y + self.offset[0], s * x + t * y + self.offset[1]


class CausticCurve(BaseModel):
    """
    Adaptive sample of the caustic f_a(|z| = 1) over phi in [0, 2 n pi].
    """

    model_config = ConfigDict(frozen=True)

    params: FamilyParams
    phi: List[float]
    u: List[float]
    v: List[float]
    min_distance: float  # closest sampled approach to the origin
    near_origin: bool

    @property
    def points(self) -> np.ndarray:
        return np.asarray(self.u) + 1j * np.asarray(self.v)

    @property
    def closure_gap(self) -> float:
        return float(abs(complex(self.u[0], self.v[0]) - complex(self.u[-1], self.v[-1])))

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({"phi": self.phi, "u": self.u, "v": self.v})


class IntersectionRecord(BaseModel):
    """
    A crossing of the real axis to the right of the caustic's center (-1, 0).

    The crossing parameter and c_value do not depend on a; the crossing
    abscissa is x(a) = -(a + 1) c_value - 1.
    """

    model_config = ConfigDict(frozen=True)

    phi: float
    c_value: float
    multiplicity: Multiplicity

    def x_of(self, a: float) -> float:
        return -(a + 1.0) * self.c_value - 1.0

    @property
    def critical_a(self) -> float:
        """
        The a at which x(a) = 0.
        """
        return -1.0 / self.c_value - 1.0
