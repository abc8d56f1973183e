from typing import List, Union

import numpy as np

from harmonic_census.exceptions import InvalidParameterError
from harmonic_census.helpers.BoxHelper import Rectangle

GRID_SPACINGS = ("lin", "log")


def parse_float_list(s: Union[str, None]) -> List[float]:
    """
    "1.1,1.37,3.54" -> [1.1, 1.37, 3.54]
    """
    if not s:
        return []
    try:
        return [float(part) for part in s.split(",") if part.strip()]
    except ValueError as e:
        raise InvalidParameterError(f"Invalid list of numbers {s!r}: {e}") from e


def parse_a_grid(s: str) -> List[float]:
    """
    Parse a grid spec "start:stop:count,log|lin" into the list of its values.

    Endpoints are included; the spacing suffix defaults to lin.
    """
    spec, _, spacing = s.partition(",")
    spacing = spacing.strip() or "lin"
    if spacing not in GRID_SPACINGS:
        raise InvalidParameterError(f"Grid spacing must be lin or log, got {spacing!r}")
    parts = spec.split(":")
    if len(parts) != 3:
        raise InvalidParameterError(f"Grid spec must look like start:stop:count, got {s!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as e:
        raise InvalidParameterError(f"Invalid grid spec {s!r}: {e}") from e
    if count < 1:
        raise InvalidParameterError(f"Grid count must be positive, got {count}")
    if spacing == "log":
        if start <= 0 or stop <= 0:
            raise InvalidParameterError(f"Log grid needs positive endpoints, got {s!r}")
        values = np.geomspace(start, stop, count)
    else:
        values = np.linspace(start, stop, count)
    return [float(value) for value in values]


def parse_rect(s: str) -> Rectangle:
    """
    "x0,x1,y0,y1" -> Rectangle
    """
    parts = s.split(",")
    if len(parts) != 4:
        raise InvalidParameterError(f"Rectangle must look like x0,x1,y0,y1, got {s!r}")
    try:
        x0, x1, y0, y1 = (float(part) for part in parts)
    except ValueError as e:
        raise InvalidParameterError(f"Invalid rectangle {s!r}: {e}") from e
    if not (x0 < x1 and y0 < y1):
        raise InvalidParameterError(f"Degenerate rectangle {s!r}")
    return Rectangle(x0=x0, x1=x1, y0=y0, y1=y1)
