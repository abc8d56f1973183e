import logging
import math
from typing import Callable, Optional

import numpy as np

from harmonic_census.exceptions import BudgetExceeded, DomainError, NotClosed
from harmonic_census.helpers.BoxHelper import Rectangle
from harmonic_census.models.FamilyModels import FamilyParams
from harmonic_census.models.WindingModels import WindingOptions, WindingReport
from harmonic_census.services.CausticService import CausticService
from harmonic_census.services.FamilyService import FamilyService

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], np.ndarray]

CLOSURE_TOL = 1e-9
RESIDUAL_TOL = 1e-6 * 2.0 * math.pi


class WindingService:
    """
    Winding numbers about the origin of closed image curves.
    """

    def __init__(
        self,
        family_service: Optional[FamilyService] = None,
        caustic_service: Optional[CausticService] = None,
    ):
        self.family_service = family_service or FamilyService()
        self.caustic_service = caustic_service or CausticService()

    def winding_closed_curve(
        self,
        evaluator: Evaluator,
        t_start: float,
        t_end: float,
        max_turn: float = math.pi / 2,
        origin_tolerance: float = 1e-9,
        max_points: int = 100_000,
        initial_points: int = 64,
        breakpoints: Optional[np.ndarray] = None,
    ) -> WindingReport:
        """
        Accumulate the unwrapped argument of evaluator(t) over [t_start, t_end].

        The evaluator must be vectorized over numpy arrays. Every interval whose
        argument increment reaches max_turn is bisected; once all increments
        are below pi no full turn can hide between two samples of a smooth curve
        sampled this densely, so the total is 2 pi times an integer up to rounding.
        """
        if origin_tolerance <= 0:
            raise ValueError(f"origin_tolerance must be positive, got {origin_tolerance}")
        ends = evaluator(np.asarray([t_start, t_end], dtype=float))
        gap = abs(ends[1] - ends[0])
        if gap > CLOSURE_TOL * max(1.0, abs(ends[0])):
            raise NotClosed(f"Curve endpoints differ by {gap:.3e}")

        t = np.linspace(t_start, t_end, initial_points + 1)
        if breakpoints is not None:
            t = np.union1d(t, np.asarray(breakpoints, dtype=float))
        span = abs(t_end - t_start)
        refinements = 0
        while True:
            w = evaluator(t)
            radius = np.abs(w)
            near = (radius[:-1] < origin_tolerance) | (radius[1:] < origin_tolerance)
            with np.errstate(divide="ignore", invalid="ignore"):
                increments = np.angle(w[1:] / w[:-1])
            increments = np.where(near, 0.0, increments)
            widths = np.diff(t)
            refine = (np.abs(increments) >= max_turn) & (widths > 1e-15 * span)
            if not refine.any():
                break
            if t.size + int(refine.sum()) > max_points:
                raise BudgetExceeded(
                    f"Winding refinement needs more than {max_points} points"
                    f" (closest approach {radius.min():.3e})"
                )
            midpoints = t[:-1][refine] + 0.5 * widths[refine]
            t = np.sort(np.concatenate([t, midpoints]))
            refinements += 1

        total = float(np.sum(increments))
        value = int(round(total / (2.0 * math.pi)))
        residual = abs(total - 2.0 * math.pi * value)
        min_distance = float(radius.min())
        certified = (
            min_distance > origin_tolerance
            and residual < RESIDUAL_TOL
            and bool(np.all(np.abs(increments) < max_turn))
        )
        return WindingReport(
            value=value,
            min_distance=min_distance,
            refinements=refinements,
            status="certified" if certified else "near_origin",
            total_angle=total,
            residual=residual,
            points=int(t.size),
        )

    def caustic_winding(
        self, params: FamilyParams, options: Optional[WindingOptions] = None
    ) -> WindingReport:
        """
        Winding number of theta -> f_a(e^(i theta)), theta in [0, 2 pi], about 0.
        """
        options = options or WindingOptions()
        tolerance = self.caustic_service.origin_tolerance(params, options.origin_factor)

        def evaluator(theta: np.ndarray) -> np.ndarray:
            return self.family_service.evaluate_many(params, np.exp(1j * theta))

        report = self.winding_closed_curve(
            evaluator,
            0.0,
            2.0 * math.pi,
            max_turn=options.max_turn,
            origin_tolerance=tolerance,
            max_points=options.max_points,
            initial_points=max(options.initial_points, 16 * (params.n + 1)),
        )
        logger.debug(f"Caustic winding for {params}: {report.value} ({report.status})")
        return report

    def box_boundary_winding(
        self,
        params: FamilyParams,
        rect: Rectangle,
        options: Optional[WindingOptions] = None,
    ) -> WindingReport:
        """
        Winding number of f_a along the boundary of rect, i.e. the sum of the
        orders of the zeros inside (rect must exclude the pole at the origin).
        """
        if rect.contains_origin():
            raise DomainError(f"Rectangle {rect.as_tuple()} contains the pole at 0")
        options = options or WindingOptions()
        tolerance = self.caustic_service.origin_tolerance(params, options.origin_factor)

        def evaluator(t: np.ndarray) -> np.ndarray:
            return self.family_service.evaluate_many(params, rect.boundary(t))

        return self.winding_closed_curve(
            evaluator,
            0.0,
            4.0,
            max_turn=options.max_turn,
            origin_tolerance=tolerance,
            max_points=options.max_points,
            initial_points=options.initial_points,
            breakpoints=np.arange(5.0),
        )
