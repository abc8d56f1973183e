import math
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator


class Rectangle(BaseModel):
    """
    Helper class for axis-aligned rectangles [x0, x1] x [y0, y1] in the complex plane
    """

    model_config = ConfigDict(frozen=True)

    x0: float
    x1: float
    y0: float
    y1: float

    @model_validator(mode="after")
    def _ordered(self) -> "Rectangle":
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError(
                f"Degenerate rectangle [{self.x0}, {self.x1}] x [{self.y0}, {self.y1}]"
            )
        return self

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def diameter(self) -> float:
        return math.hypot(self.width, self.height)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        """
        Closed containment test, widened by slack on every side
        """
        return (
            self.x0 - slack <= z.real <= self.x1 + slack
            and self.y0 - slack <= z.imag <= self.y1 + slack
        )

    def contains_origin(self) -> bool:
        return self.contains(0j)

    def distance_range(self) -> Tuple[float, float]:
        """
        Smallest and largest distance from the origin to a point of the rectangle
        """
        nearest_x = min(max(0.0, self.x0), self.x1)
        nearest_y = min(max(0.0, self.y0), self.y1)
        far_x = max(abs(self.x0), abs(self.x1))
        far_y = max(abs(self.y0), abs(self.y1))
        return math.hypot(nearest_x, nearest_y), math.hypot(far_x, far_y)

    def crosses_circle(self, radius: float = 1.0) -> bool:
        """
        True when the circle |z| = radius passes through the closed rectangle
        """
        near, far = self.distance_range()
        return near <= radius <= far

    def split(self, xm: float, ym: float) -> List["Rectangle"]:
        """
        Split into four children at (xm, ym), ordered SW, SE, NW, NE
        """
        return [
            Rectangle(x0=self.x0, x1=xm, y0=self.y0, y1=ym),
            Rectangle(x0=xm, x1=self.x1, y0=self.y0, y1=ym),
            Rectangle(x0=self.x0, x1=xm, y0=ym, y1=self.y1),
            Rectangle(x0=xm, x1=self.x1, y0=ym, y1=self.y1),
        ]

    def boundary(self, t: np.ndarray) -> np.ndarray:
        """
        Counterclockwise boundary parameterized by t in [0, 4], one unit per edge.

        t = 0 and t = 4 both map to the corner (x0, y0), so the curve closes exactly.
        """
        t = np.asarray(t, dtype=float)
        edge = np.clip(np.floor(t), 0, 3).astype(int)
        s = t - edge
        x = np.select(
            [edge == 0, edge == 1, edge == 2],
            [self.x0 + s * self.width, np.full_like(s, self.x1), self.x1 - s * self.width],
            self.x0,
        )
        y = np.select(
            [edge == 0, edge == 1, edge == 2],
            [np.full_like(s, self.y0), self.y0 + s * self.height, np.full_like(s, self.y1)],
            self.y0 + (1.0 - s) * self.height,
        )
        return x + 1j * y

    def grid(self, size: int) -> np.ndarray:
        """
        size x size interior points at the centers of a uniform sub-grid
        """
        fractions = (np.arange(size) + 0.5) / size
        xs = self.x0 + fractions * self.width
        ys = self.y0 + fractions * self.height
        return (xs[:, None] + 1j * ys[None, :]).ravel()

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.x0, self.x1, self.y0, self.y1)
