import logging
import math
from typing import List, Tuple

import numpy as np
from scipy.optimize import brentq

from harmonic_census.exceptions import BudgetExceeded, InvalidParameterError, RootSolverFailure
from harmonic_census.models.CausticModels import (
    AffineMap,
    CausticCurve,
    EpicycloidSpec,
    IntersectionRecord,
)
from harmonic_census.models.FamilyModels import FamilyParams

logger = logging.getLogger(__name__)

ROOT_XTOL = 1e-13
MERGE_TOL = 1e-9


def sine_combination(n: int, phi: np.ndarray) -> np.ndarray:
    """
    s(phi) = sin(phi)/n - sin((n+1) phi/n)/(n+1); the caustic has v = -(a-1) s.
    """
    return np.sin(phi) / n - np.sin((n + 1) * phi / n) / (n + 1)


def cosine_combination(n: int, phi: np.ndarray) -> np.ndarray:
    """
    c(phi) = cos(phi)/n - cos((n+1) phi/n)/(n+1); the caustic has u = -(a+1) c - 1.
    """
    return np.cos(phi) / n - np.cos((n + 1) * phi / n) / (n + 1)


class CausticService:
    """
    Geometry of the caustic f_a(|z| = 1), an affine image of a one-cusped epicycloid.

    With phi = n theta on the unit circle,

        E_a(phi) = (a+1)/n e^(i phi) - (a+1)/(n+1) e^(i (n+1) phi / n)
        f_a(e^(i phi / n)) = A E_a(phi) + b,  A = diag(-1, 2/(a+1) - 1),  b = (-1, 0)
    """

    def base_epicycloid_many(
        self, params: FamilyParams, phi: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        n, scale = params.n, params.a + 1.0
        phi = np.asarray(phi, dtype=float)
        return scale * cosine_combination(n, phi), scale * sine_combination(n, phi)

    def base_epicycloid_point(self, params: FamilyParams, phi: float) -> Tuple[float, float]:
        x, y = self.base_epicycloid_many(params, np.asarray([phi]))
        return float(x[0]), float(y[0])

    def affine_map(self, params: FamilyParams) -> AffineMap:
        return AffineMap(
            linear=((-1.0, 0.0), (0.0, 2.0 / (params.a + 1.0) - 1.0)),
            offset=(-1.0, 0.0),
        )

    def caustic_many(
        self, params: FamilyParams, phi: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        x, y = self.base_epicycloid_many(params, phi)
        return self.affine_map(params).apply(x, y)

    def caustic_point(self, params: FamilyParams, phi: float) -> Tuple[float, float]:
        u, v = self.caustic_many(params, np.asarray([phi]))
        return float(u[0]), float(v[0])

    def epicycloid_spec(self, params: FamilyParams) -> EpicycloidSpec:
        n, a = params.n, params.a
        orientation = (
            "counterclockwise" if self.affine_map(params).determinant > 0 else "clockwise"
        )
        return EpicycloidSpec(
            R=(a + 1.0) / (n * (n + 1)),
            r=(a + 1.0) / (n + 1),
            cusps=1,
            revolutions=n,
            orientation=orientation,
        )

    def annulus(self, params: FamilyParams) -> Tuple[float, float]:
        """
        Inner and outer radius of the annulus R <= |p| <= R + 2r holding E_a.
        """
        spec = self.epicycloid_spec(params)
        return spec.inner_radius, spec.outer_radius

    def farthest_point(self, params: FamilyParams) -> Tuple[float, float]:
        """
        Image of E_a(n pi) = (-1)^n (R + 2r), the unique point of maximal distance.
        """
        outer = self.annulus(params)[1]
        sign = 1.0 if params.n % 2 == 0 else -1.0
        u, v = self.affine_map(params).apply(np.asarray(sign * outer), np.asarray(0.0))
        return float(u), float(v)

    def origin_tolerance(self, params: FamilyParams, factor: float = 1e-9) -> float:
        return factor * self.annulus(params)[1]

    def sample_caustic(
        self,
        params: FamilyParams,
        max_turn: float = math.pi / 4,
        max_points: int = 100_000,
        origin_factor: float = 1e-9,
    ) -> CausticCurve:
        """
        Adaptive sample of the caustic over phi in [0, 2 n pi].

        Intervals are bisected until both the turning angle between consecutive
        chords and the change of argument about the origin stay below max_turn.
        The cusp sits at the two ends of the parameter range, where no turning
        angle is measured.
        """
        n = params.n
        if not 0 < max_turn <= math.pi / 2:
            raise InvalidParameterError(f"max_turn must lie in (0, pi/2], got {max_turn}")
        if max_points < 4 * n + 4:
            raise InvalidParameterError(f"max_points must be at least {4 * n + 4}")

        span = 2.0 * n * math.pi
        tolerance = self.origin_tolerance(params, origin_factor)
        phi = np.linspace(0.0, span, 4 * n + 4)
        rounds = 0
        while True:
            u, v = self.caustic_many(params, phi)
            w = u + 1j * v
            radius = np.abs(w)
            near = (radius[:-1] < tolerance) | (radius[1:] < tolerance)
            with np.errstate(divide="ignore", invalid="ignore"):
                arg_change = np.abs(np.angle(w[1:] / w[:-1]))
            refine = (arg_change > max_turn) & ~near

            chords = np.diff(w)
            with np.errstate(divide="ignore", invalid="ignore"):
                turning = np.abs(np.angle(chords[1:] / chords[:-1]))
            bent = turning > max_turn
            refine[:-1] |= bent
            refine[1:] |= bent

            widths = np.diff(phi)
            refine &= widths > 1e-14 * span
            if not refine.any():
                break
            if phi.size + int(refine.sum()) > max_points:
                raise BudgetExceeded(
                    f"Caustic sampling for {params} needs more than {max_points} points"
                    f" (closest approach {radius.min():.3e})"
                )
            midpoints = phi[:-1][refine] + 0.5 * widths[refine]
            phi = np.sort(np.concatenate([phi, midpoints]))
            rounds += 1

        min_distance = float(radius.min())
        logger.debug(
            f"Sampled caustic for {params}: {phi.size} points in {rounds} rounds,"
            f" closest approach {min_distance:.3e}"
        )
        return CausticCurve(
            params=params,
            phi=phi.tolist(),
            u=u.tolist(),
            v=v.tolist(),
            min_distance=min_distance,
            near_origin=min_distance < tolerance,
        )

    def right_side_intersections(self, n: int) -> List[IntersectionRecord]:
        """
        Crossings of the real axis to the right of the caustic's center.

        Roots of s on (0, n pi] with c < 0, merged by geometric position and
        ordered outermost first. They do not depend on a.
        """
        if n < 4:
            raise InvalidParameterError(f"n must be at least 4, got {n}")
        expected = (n + 1) // 2
        end = n * math.pi
        step = math.pi / (8 * (n + 1))

        grid = np.arange(step, end - 0.5 * step, step)
        values = sine_combination(n, grid)
        roots: List[float] = []
        for i in np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0):
            try:
                root = brentq(
                    lambda x: float(sine_combination(n, np.asarray(x))),
                    float(grid[i]),
                    float(grid[i + 1]),
                    xtol=ROOT_XTOL,
                )
            except ValueError as e:
                raise RootSolverFailure(
                    f"Bracket [{grid[i]}, {grid[i + 1]}] failed for n={n}: {e}"
                ) from e
            roots.append(root)
        roots.extend(float(x) for x in grid[values == 0.0])
        # s(n pi) = 0 identically
        roots.append(end)

        records: List[IntersectionRecord] = []
        for phi in sorted(roots):
            c_value = float(cosine_combination(n, np.asarray(phi)))
            if c_value >= 0.0:
                continue
            if any(abs(abs(c_value) - abs(record.c_value)) < MERGE_TOL for record in records):
                continue
            single = n % 2 == 1 and abs(phi - end) < 1e-10
            records.append(
                IntersectionRecord(
                    phi=phi, c_value=c_value, multiplicity="single" if single else "double"
                )
            )
        records.sort(key=lambda record: record.c_value)

        if len(records) != expected:
            raise RootSolverFailure(
                f"Found {len(records)} right-side crossings for n={n}, expected {expected}:"
                f" {[(r.phi, r.c_value) for r in records]}"
            )
        logger.debug(f"Right-side crossings for n={n}: {[r.phi for r in records]}")
        return records

