import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from harmonic_census.exceptions import (
    AtCriticalValue,
    BudgetExceeded,
    InconsistentCensus,
    NearCriticalValue,
    NoConvergence,
    SingularJacobian,
    SingularPoint,
    SingularZeroSuspected,
)
from harmonic_census.helpers.BoxHelper import Rectangle
from harmonic_census.models.CensusModels import CensusOptions, CensusReport, ZeroCertificate
from harmonic_census.models.FamilyModels import FamilyParams
from harmonic_census.models.WindingModels import WindingOptions, WindingReport
from harmonic_census.services.FamilyService import FamilyService
from harmonic_census.services.WindingService import WindingService

logger = logging.getLogger(__name__)

MAX_ROUNDS = 64
ZERO_FREE_MARGIN = 1.05

# stands in for the winding of a cell the variation bound proves zero-free
_ZERO_FREE_REPORT = WindingReport(
    value=0,
    min_distance=math.inf,
    refinements=0,
    status="certified",
    total_angle=0.0,
    residual=0.0,
    points=1,
)


class Cell(BaseModel):
    """
    A rectangle of the search region together with its boundary winding.
    """

    model_config = ConfigDict(frozen=True)

    rect: Rectangle
    winding: WindingReport
    force_split: bool = False
    zero_free: bool = False  # excluded by the variation bound; winding not sampled

    @property
    def crossing(self) -> bool:
        return self.rect.crosses_circle(1.0)


class CensusService:
    """
    Certified census of the zeros of f_a.

    The search region is the square annulus between the squares of half-width
    rho_min/2 and R_max, tiled by eight rectangles; the pole at the origin lies in
    none of them. Cells are subdivided on the winding of f_a along their
    boundary. Off the unit circle every zero of a cell has the same order, so
    the winding there is exactly the (signed) zero count; cells meeting the
    circle can hide a +1/-1 pair and are refined to cell_min and swept with
    Newton seeds. A child cell on which |f_a| provably stays away from 0 is
    dropped without sampling its boundary.
    """

    def __init__(
        self,
        family_service: Optional[FamilyService] = None,
        winding_service: Optional[WindingService] = None,
    ):
        self.family_service = family_service or FamilyService()
        self.winding_service = winding_service or WindingService(
            family_service=self.family_service
        )
        self.caustic_service = self.winding_service.caustic_service

    def zero_free(self, params: FamilyParams, rect: Rectangle) -> bool:
        """
        True when |f_a| at the center of rect exceeds the largest change of f_a
        across rect, so rect holds no zero.

        |df| <= (|h'| + |g'|) |dz| and on rect |h'| + |g'| <= (a+1)(far^n + near^(-n-1)).
        """
        near, far = rect.distance_range()
        n = params.n
        lipschitz = (params.a + 1.0) * (far**n + near ** (-n - 1))
        value = abs(self.family_service.evaluate(params, rect.center))
        return value > ZERO_FREE_MARGIN * lipschitz * 0.5 * rect.diameter

    @staticmethod
    def _residual_tolerance(params: FamilyParams, options: CensusOptions) -> float:
        return options.tol_f * (1.0 + abs(params.a))

    def classify_order(
        self, params: FamilyParams, z: complex, options: Optional[CensusOptions] = None
    ) -> int:
        """
        +1 where f_a is sense-preserving at z, -1 where it is sense-reversing.
        """
        options = options or CensusOptions()
        jacobian = self.family_service.jacobian(params, z)
        if abs(jacobian.det) <= options.tol_det * jacobian.scale:
            raise SingularPoint(f"Jacobian vanishes at z = {z} (det = {jacobian.det:.3e})")
        return 1 if jacobian.det > 0 else -1

    def _newton_step(
        self, params: FamilyParams, z: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """
        Newton step for (u, v) written in complex form.

        Solving h' dz + conj(g') conj(dz) = -f gives
        dz = (conj(h') (-f) - conj(g') conj(-f)) / (|h'|^2 - |g'|^2),
        which is J^-1 applied to -(u, v).
        """
        f = self.family_service.evaluate_many(params, z)
        dh, dg = self.family_service.wirtinger_many(params, z)
        det = self.family_service.jacobian_det_many(params, z)
        scale = np.abs(dh) ** 2 + np.abs(dg) ** 2
        rhs = -f
        with np.errstate(divide="ignore", invalid="ignore"):
            step = (np.conj(dh) * rhs - np.conj(dg) * np.conj(rhs)) / det
        return f, step, det, scale

    def refine_zero(
        self,
        params: FamilyParams,
        seed: complex,
        options: Optional[CensusOptions] = None,
        cell: Optional[Rectangle] = None,
    ) -> ZeroCertificate:
        """
        Newton iteration from seed until the residual and the step are both small.
        """
        options = options or CensusOptions()
        tol_f = self._residual_tolerance(params, options)
        z = complex(seed)
        history: List[float] = []
        for iteration in range(options.max_iters + 1):
            f, step, det, scale = self._newton_step(params, np.asarray([z]))
            residual = float(abs(f[0]))
            history.append(residual)
            if not abs(det[0]) > options.tol_det * scale[0]:
                raise SingularJacobian(
                    f"Jacobian singular at z = {z} after {iteration} iterations"
                    f" (det = {det[0]:.3e})"
                )
            dz = complex(step[0])
            if abs(dz) <= options.tol_z * max(1.0, abs(z)) and residual < tol_f:
                z = z + dz
                break
            z = z + dz
            if z == 0 or not np.isfinite(z):
                raise NoConvergence(f"Newton from {seed} left the domain")
        else:
            raise NoConvergence(
                f"Newton from {seed} did not converge in {options.max_iters} iterations"
                f" (residual {history[-1]:.3e})"
            )

        residual = abs(self.family_service.evaluate(params, z))
        det = float(self.family_service.jacobian_det_many(params, np.asarray([z]))[0])
        return ZeroCertificate(
            location=z,
            order=1 if det > 0 else -1,
            residual=residual,
            jacobian_det=det,
            cell=cell,
            iterations=len(history) - 1,
            residual_history=history,
        )

    def newton_batch(
        self,
        params: FamilyParams,
        seeds: np.ndarray,
        options: CensusOptions,
        bounds: Tuple[float, float],
    ) -> np.ndarray:
        """
        Run Newton on all seeds at once; return the limits of the converged runs.

        Runs that leave the annulus bounds, meet a singular Jacobian or exhaust
        the iteration budget are dropped.
        """
        tol_f = self._residual_tolerance(params, options)
        inner, outer = bounds
        z = np.asarray(seeds, dtype=complex).copy()
        active = np.ones(z.size, dtype=bool)
        converged = np.zeros(z.size, dtype=bool)
        with np.errstate(all="ignore"):
            for _ in range(options.max_iters):
                idx = np.flatnonzero(active)
                if idx.size == 0:
                    break
                f, step, det, scale = self._newton_step(params, z[idx])
                singular = ~(np.abs(det) > options.tol_det * scale)
                done = (np.abs(step) <= options.tol_z * np.maximum(1.0, np.abs(z[idx]))) & (
                    np.abs(f) < tol_f
                )
                z[idx] = np.where(singular, z[idx], z[idx] + step)
                radius = np.abs(z[idx])
                lost = singular | ~np.isfinite(z[idx]) | (radius < inner) | (radius > outer)
                converged[idx[done & ~lost]] = True
                active[idx[done | lost]] = False
        return z[converged]

    def _merge(self, points: Sequence[complex], options: CensusOptions) -> List[complex]:
        merged: List[complex] = []
        for z in sorted(points, key=lambda p: (p.real, p.imag)):
            radius = options.merge_factor * options.tol_z * max(1.0, abs(z))
            if not any(abs(z - other) <= radius for other in merged):
                merged.append(z)
        return merged

    def _winding(
        self, params: FamilyParams, rect: Rectangle, options: WindingOptions
    ) -> Optional[WindingReport]:
        try:
            report = self.winding_service.box_boundary_winding(params, rect, options)
        except BudgetExceeded as e:
            logger.debug(f"Winding budget exceeded on {rect.as_tuple()}: {e}")
            return None
        return report if report.certified else None

    def _root_cells(
        self,
        params: FamilyParams,
        rho_min: float,
        R_max: float,
        winding_options: WindingOptions,
        options: CensusOptions,
    ) -> List[Cell]:
        outer = R_max
        for attempt in range(options.max_jitters + 1):
            inner = 0.5 * rho_min * (1.0 - attempt * options.jitter)
            cuts = [-outer, -inner, inner, outer]
            cells: List[Cell] = []
            for i in range(3):
                for j in range(3):
                    if i == 1 and j == 1:
                        continue
                    rect = Rectangle(x0=cuts[i], x1=cuts[i + 1], y0=cuts[j], y1=cuts[j + 1])
                    report = self._winding(params, rect, winding_options)
                    if report is None:
                        break
                    cells.append(Cell(rect=rect, winding=report))
            if len(cells) == 8:
                return cells
            logger.warning(f"Jittering root tiling for {params} (attempt {attempt + 1})")
        raise InconsistentCensus(
            f"Could not certify the root tiling for {params} after"
            f" {options.max_jitters} jitters"
        )

    def _subdivide(
        self,
        params: FamilyParams,
        rect: Rectangle,
        winding_options: WindingOptions,
        options: CensusOptions,
    ) -> Optional[List[Cell]]:
        center = rect.center
        for attempt in range(options.max_jitters + 1):
            offset = attempt * options.jitter * rect.diameter * (-1) ** attempt
            children = rect.split(center.real + offset, center.imag + offset)
            cells: List[Cell] = []
            for child in children:
                if self.zero_free(params, child):
                    cells.append(Cell(rect=child, winding=_ZERO_FREE_REPORT, zero_free=True))
                    continue
                report = self._winding(params, child, winding_options)
                if report is None:
                    break
                cells.append(Cell(rect=child, winding=report))
            if len(cells) == 4:
                return cells
            logger.warning(f"Jittering split of {rect.as_tuple()} (attempt {attempt + 1})")
        return None

    def _check_exclusion(
        self,
        params: FamilyParams,
        options: CensusOptions,
        excluded_values: Optional[Sequence[float]],
    ) -> None:
        if params.small_a:
            return
        if excluded_values is None:
            records = self.caustic_service.right_side_intersections(params.n)
            excluded_values = [record.critical_a for record in records]
        for a_j in excluded_values:
            if abs(params.a - a_j) <= options.critical_exclusion:
                raise AtCriticalValue(
                    f"a = {params.a} is within {options.critical_exclusion} of the"
                    f" critical value {a_j}"
                )

    def certify_zeros(
        self,
        params: FamilyParams,
        options: Optional[CensusOptions] = None,
        excluded_values: Optional[Sequence[float]] = None,
    ) -> CensusReport:
        """
        Find, refine and certify every zero of f_a, with orders and counts.
        """
        options = options or CensusOptions()
        self._check_exclusion(params, options, excluded_values)
        n = params.n

        winding_options = WindingOptions(
            max_turn=options.max_turn, max_points=options.max_points
        )
        caustic = self.winding_service.caustic_winding(params, winding_options)
        if not caustic.certified:
            raise NearCriticalValue(
                f"Caustic of {params} passes within {caustic.min_distance:.3e} of 0"
            )
        W = caustic.value
        predicted_total = 2 * (n + W) + 1 if params.small_a else 2 * (n - W) + 1

        rho_min, R_max = self.family_service.containment_radii(params)
        cell_min = options.cell_min * R_max
        roots = self._root_cells(params, rho_min, R_max, winding_options, options)
        root_total = sum(cell.winding.value for cell in roots)

        problems: List[str] = []
        leaves: List[Cell] = []
        candidates: List[complex] = []
        pending: List[Cell] = list(reversed(roots))
        bounds = (0.25 * rho_min, 4.0 * R_max)

        for round_index in range(MAX_ROUNDS):
            fresh: List[Cell] = []
            while pending:
                cell = pending.pop()
                value = cell.winding.value
                if cell.zero_free:
                    continue
                if not cell.force_split:
                    if not cell.crossing and value == 0:
                        continue
                    if (not cell.crossing and abs(value) == 1) or cell.rect.diameter <= cell_min:
                        fresh.append(cell)
                        continue
                children = self._subdivide(params, cell.rect, winding_options, options)
                if children is None:
                    problems.append(f"Unresolved cell {cell.rect.as_tuple()} (winding {value})")
                    fresh.append(cell)
                    continue
                child_total = sum(child.winding.value for child in children)
                if child_total != value:
                    problems.append(
                        f"Additivity failed on {cell.rect.as_tuple()}: {value} != {child_total}"
                    )
                pending.extend(reversed(children))

            if fresh:
                seeds = np.concatenate([cell.rect.grid(options.seed_grid) for cell in fresh])
                found = self.newton_batch(params, seeds, options, bounds)
                candidates = self._merge(candidates + [complex(z) for z in found], options)
                leaves.extend(fresh)

            # a one-zero cell whose seeds all missed gets split again
            counts = self._assign(candidates, leaves)
            retry = [
                cell
                for cell, zeros in zip(leaves, counts)
                if not cell.crossing
                and len(zeros) < abs(cell.winding.value)
                and cell.rect.diameter > cell_min
            ]
            if not retry:
                break
            logger.debug(f"Census round {round_index}: re-splitting {len(retry)} cells")
            leaves = [cell for cell in leaves if cell not in retry]
            pending = [cell.model_copy(update={"force_split": True}) for cell in retry]

        zeros = self._certify_candidates(params, candidates, leaves, options)
        placed = sum(len(points) for points in self._assign(candidates, leaves))
        if placed != len(candidates):
            problems.append(
                f"{len(candidates) - placed} converged zeros lie in cells of winding 0"
            )
        problems.extend(self._accounting(params, zeros, leaves, root_total))
        warnings = list(problems)

        outside = inside = crossing = 0
        for cell in leaves:
            if cell.crossing:
                crossing += cell.winding.value
            elif cell.rect.distance_range()[0] > 1.0:
                outside += cell.winding.value
            else:
                inside += cell.winding.value

        z_plus = sum(1 for zero in zeros if zero.order > 0)
        z_minus = sum(1 for zero in zeros if zero.order < 0)
        total = z_plus + z_minus
        consistent = total == predicted_total
        if not consistent:
            warnings.append(
                f"Census total {total} differs from the winding prediction {predicted_total}"
            )
        report = CensusReport(
            params=params,
            zeros=zeros,
            z_plus=z_plus,
            z_minus=z_minus,
            total=total,
            order_sum=z_plus - z_minus,
            consistent=consistent,
            warnings=warnings,
            caustic_winding=W,
            predicted_total=predicted_total,
            rho_min=rho_min,
            R_max=R_max,
            leaf_count=len(leaves),
            outside_winding=outside,
            inside_winding=inside,
            crossing_winding=crossing,
        )
        logger.info(
            f"Census for {params}: {total} zeros (+{z_plus}/-{z_minus}),"
            f" caustic winding {W}, {len(leaves)} leaf cells"
        )
        if problems:
            raise InconsistentCensus("; ".join(problems), report)
        return report

    @staticmethod
    def _assign(points: Sequence[complex], leaves: Sequence[Cell]) -> List[List[complex]]:
        """
        Distribute points over the leaves containing them (first match wins).
        """
        assigned: List[List[complex]] = [[] for _ in leaves]
        if not leaves:
            return assigned
        box = np.asarray([cell.rect.as_tuple() for cell in leaves])
        for z in points:
            inside = (
                (box[:, 0] <= z.real)
                & (z.real <= box[:, 1])
                & (box[:, 2] <= z.imag)
                & (z.imag <= box[:, 3])
            )
            hits = np.flatnonzero(inside)
            if hits.size:
                assigned[int(hits[0])].append(z)
        return assigned

    def _certify_candidates(
        self,
        params: FamilyParams,
        candidates: Sequence[complex],
        leaves: Sequence[Cell],
        options: CensusOptions,
    ) -> List[ZeroCertificate]:
        assigned = self._assign(candidates, leaves)
        certificates: List[ZeroCertificate] = []
        for cell, points in zip(leaves, assigned):
            for z in points:
                try:
                    certificate = self.refine_zero(params, z, options, cell=cell.rect)
                except (SingularJacobian, NoConvergence) as e:
                    raise SingularZeroSuspected(
                        f"Zero near {z} of {params} cannot be certified: {e}"
                    ) from e
                if abs(certificate.jacobian_det) <= options.tol_det * _jacobian_scale(
                    self.family_service, params, certificate.location
                ):
                    raise SingularZeroSuspected(
                        f"Zero at {certificate.location} of {params} has"
                        f" det J = {certificate.jacobian_det:.3e}"
                    )
                certificates.append(certificate)

        unique: List[ZeroCertificate] = []
        for certificate in certificates:
            radius = options.merge_factor * options.tol_z * max(1.0, abs(certificate.location))
            for k, kept in enumerate(unique):
                if abs(kept.location - certificate.location) <= radius:
                    if certificate.residual < kept.residual:
                        unique[k] = kept.model_copy(update={"residual": certificate.residual})
                    break
            else:
                unique.append(certificate)
        unique.sort(key=lambda zero: (zero.location.real, zero.location.imag))
        return unique

    def _accounting(
        self,
        params: FamilyParams,
        zeros: Sequence[ZeroCertificate],
        leaves: Sequence[Cell],
        root_total: int,
    ) -> List[str]:
        """
        Cross-check the certificates against every winding identity available.
        """
        problems: List[str] = []
        assigned = self._assign([zero.location for zero in zeros], leaves)
        orders = {zero.location: zero.order for zero in zeros}
        for cell, points in zip(leaves, assigned):
            value = cell.winding.value
            order_sum = sum(orders[z] for z in points)
            if order_sum != value:
                problems.append(
                    f"Leaf {cell.rect.as_tuple()} winds {value} but holds order sum {order_sum}"
                )
            elif not cell.crossing and len(points) != abs(value):
                problems.append(
                    f"Leaf {cell.rect.as_tuple()} winds {value} but holds {len(points)} zeros"
                )

        order_sum = sum(zero.order for zero in zeros)
        expected = -1 if params.small_a else 1
        if order_sum != root_total:
            problems.append(f"Order sum {order_sum} differs from region winding {root_total}")
        if order_sum != expected:
            problems.append(f"Order sum {order_sum} differs from the expected {expected}")
        for zero in zeros:
            if zero.order != self.family_service.region_sign(params, zero.location):
                problems.append(
                    f"Zero at {zero.location} has order {zero.order} on the wrong side of |z| = 1"
                )
        for problem in problems:
            logger.warning(problem)
        return problems


def _jacobian_scale(family_service: FamilyService, params: FamilyParams, z: complex) -> float:
    pair = family_service.wirtinger_derivatives(params, z)
    return abs(pair.dh) ** 2 + abs(pair.dg) ** 2
