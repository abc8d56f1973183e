from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict

from harmonic_census.models.CausticModels import IntersectionRecord
from harmonic_census.models.FamilyModels import FamilyParams

Regime = Literal["case1", "case2_even", "case2_odd", "case3", "small_a"]


class CriticalValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    j: int
    a: float
    source: IntersectionRecord
    bisected_a: Optional[float] = None  # winding-jump location, when cross-checked


class CriticalValueTable(BaseModel):
    """
    The N = floor((n+1)/2) critical values a_1 < ... < a_N for one n.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    values: List[CriticalValue]

    @property
    def N(self) -> int:
        return len(self.values)

    @property
    def a_values(self) -> List[float]:
        return [value.a for value in self.values]


class VerificationReport(BaseModel):
    """
    The zero count of f_a computed three ways.
    """

    model_config = ConfigDict(frozen=True)

    params: FamilyParams
    predicted_theorem: Optional[int]  # None in the small_a regime
    predicted_winding: int
    census_total: int
    caustic_winding: int
    agree: bool
    regime: Regime
    z_plus: int
    z_minus: int


class SweepEntry(BaseModel):
    """
    One sweep point: either a report or the error that stopped it.
    """

    model_config = ConfigDict(frozen=True)

    a: float
    report: Optional[VerificationReport] = None
    error_type: Optional[str] = None
    message: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.report is not None
