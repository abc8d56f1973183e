import math
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


class FamilyParams(BaseModel):
    """
    The pair (n, a) selecting one member f_a of the harmonic family

        f_a(z) = a/(n+1) z^(n+1) - 1/n z^(-n) + 1/(n+1) conj(z)^(n+1) - a/n conj(z)^(-n) - 1
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=4)  # exponent parameter
    a: float = Field(gt=0, allow_inf_nan=False)  # family parameter

    @field_validator("a")
    @classmethod
    def _not_one(cls, value: float) -> float:
        # a = 1 collapses the caustic onto a segment of the real axis
        if value == 1.0:
            raise ValueError("a = 1 is excluded: the caustic degenerates")
        return value

    @property
    def small_a(self) -> bool:
        return self.a < 1.0

    @property
    def exterior_sign(self) -> int:
        """
        Sign of the Jacobian outside the unit circle (+1 when a > 1).
        """
        return -1 if self.small_a else 1


class WirtingerPair(BaseModel):
    """
    Values of h'(z) and g'(z) for f = h + conj(g).
    """

    model_config = ConfigDict(frozen=True)

    dh: complex
    dg: complex


class JacobianEval(BaseModel):
    """
    Real Jacobian of (u, v) at a point, with its determinant |h'|^2 - |g'|^2.
    """

    model_config = ConfigDict(frozen=True)

    entries: Tuple[Tuple[float, float], Tuple[float, float]]
    det: float

    @property
    def entries_det(self) -> float:
        """
        Determinant recomputed from the matrix entries (loses accuracy near |z| = 1).
        """
        (ux, uy), (vx, vy) = self.entries
        return ux * vy - uy * vx

    @property
    def scale(self) -> float:
        """
        |h'|^2 + |g'|^2, half the squared Frobenius norm of the entries.
        """
        return 0.5 * math.fsum(x * x for row in self.entries for x in row)
