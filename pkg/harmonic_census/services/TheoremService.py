import bisect
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from harmonic_census.config import get_settings
from harmonic_census.exceptions import (
    AtCriticalValue,
    BudgetExceeded,
    CrossCheckFailure,
    HarmonicCensusError,
    InvalidParameterError,
    NearCriticalValue,
)
from harmonic_census.models.CensusModels import CensusOptions
from harmonic_census.models.FamilyModels import FamilyParams
from harmonic_census.models.TheoremModels import (
    CriticalValue,
    CriticalValueTable,
    Regime,
    SweepEntry,
    VerificationReport,
)
from harmonic_census.models.WindingModels import WindingOptions
from harmonic_census.services.CausticService import CausticService
from harmonic_census.services.CensusService import CensusService
from harmonic_census.services.WindingService import WindingService

logger = logging.getLogger(__name__)

PREDICTION_EXCLUSION = 1e-9
CROSS_CHECK_TOL = 1e-6
BISECTION_WIDTH = 1e-7


def winding_bounds(n: int) -> Tuple[float, float]:
    """
    (n(n+1)/(2n+1) - 1, n(n+1) - 1): below the first the caustic leaves the
    origin outside (winding 0), above the second it winds n times.
    """
    if n < 4:
        raise InvalidParameterError(f"n must be at least 4, got {n}")
    return n * (n + 1) / (2 * n + 1) - 1.0, n * (n + 1) - 1.0


def count_from_winding(n: int, winding: int, small_a: bool = False) -> int:
    """
    Total zero count 2(n - W) + 1 from the caustic winding W (2(n + W) + 1 for a < 1).
    """
    return 2 * (n + winding) + 1 if small_a else 2 * (n - winding) + 1


def worker_count(requested: Optional[int] = None) -> Optional[int]:
    """
    Sweep threads: the requested count, capped by HARMONIC_CENSUS_THREADS when set.
    """
    configured = get_settings().threads
    if requested is None:
        return configured
    if configured is None:
        return requested
    return min(requested, configured)


def interval_representatives(table: CriticalValueTable) -> List[float]:
    """
    One parameter per open interval (1, a_1), (a_j, a_j+1), ..., (a_N, n(n+1)).
    """
    edges = [1.0] + table.a_values + [float(table.n * (table.n + 1))]
    return [0.5 * (lo + hi) for lo, hi in zip(edges[:-1], edges[1:])]


class TheoremService:
    """
    Critical values, the two zero-count predictors and their verification
    against the certified census.
    """

    def __init__(
        self,
        caustic_service: Optional[CausticService] = None,
        winding_service: Optional[WindingService] = None,
        census_service: Optional[CensusService] = None,
    ):
        self.caustic_service = caustic_service or CausticService()
        self.winding_service = winding_service or WindingService(
            caustic_service=self.caustic_service
        )
        self.census_service = census_service or CensusService(
            winding_service=self.winding_service
        )
        self._tables: Dict[Tuple[int, bool], CriticalValueTable] = {}
        self._tables_lock = threading.Lock()

    def critical_values(self, n: int, cross_check: bool = True) -> CriticalValueTable:
        """
        The table a_1 < ... < a_N, one value per right-side crossing of the caustic.

        Tables are cached per instance; a cross-checked table also answers
        requests without the cross-check.
        """
        with self._tables_lock:
            table = self._tables.get((n, True)) or self._tables.get((n, cross_check))
            if table is None:
                table = self.build_table(n, cross_check)
                self._tables[(n, cross_check)] = table
        return table

    def build_table(self, n: int, cross_check: bool = True) -> CriticalValueTable:
        records = self.caustic_service.right_side_intersections(n)
        values = [
            CriticalValue(j=j, a=record.critical_a, source=record)
            for j, record in enumerate(records, start=1)
        ]
        a_values = [value.a for value in values]
        if any(lo >= hi for lo, hi in zip(a_values[:-1], a_values[1:])):
            raise CrossCheckFailure(
                f"Critical values for n={n} are not strictly increasing: {a_values}"
            )
        if cross_check:
            values = [
                value.model_copy(
                    update={"bisected_a": self._bisect_winding_jump(n, a_values, k)}
                )
                for k, value in enumerate(values)
            ]
        table = CriticalValueTable(n=n, values=values)
        logger.info(f"Critical values for n={n}: {table.a_values}")
        return table

    def _winding_value(self, n: int, a: float) -> Optional[int]:
        try:
            report = self.winding_service.caustic_winding(FamilyParams(n=n, a=a))
        except BudgetExceeded:
            return None
        return report.value if report.certified else None

    def _bisect_winding_jump(self, n: int, a_values: Sequence[float], k: int) -> float:
        """
        Locate the k-th jump of the caustic winding by bisection and compare it
        with the closed-form value.
        """
        a_j = a_values[k]
        below = a_values[k - 1] if k > 0 else 1.0
        above = a_values[k + 1] if k + 1 < len(a_values) else float(n * (n + 1))
        lo = a_j - 0.5 * (a_j - below)
        hi = a_j + 0.5 * (above - a_j)
        w_lo, w_hi = self._winding_value(n, lo), self._winding_value(n, hi)
        if w_lo is None or w_hi is None or w_lo == w_hi:
            raise CrossCheckFailure(
                f"No winding jump for n={n} in [{lo}, {hi}] (windings {w_lo}, {w_hi})"
            )
        while hi - lo > BISECTION_WIDTH:
            mid = 0.5 * (lo + hi)
            w_mid = self._winding_value(n, mid)
            if w_mid is None:
                # the caustic passes through the origin at mid
                lo = hi = mid
                break
            if w_mid == w_lo:
                lo = mid
            else:
                hi = mid
        bisected = 0.5 * (lo + hi)
        if abs(bisected - a_j) > CROSS_CHECK_TOL:
            raise CrossCheckFailure(
                f"Critical value a_{k + 1} for n={n}: closed form {a_j},"
                f" winding jump at {bisected}"
            )
        logger.debug(f"a_{k + 1} for n={n}: closed form {a_j}, bisected {bisected}")
        return bisected

    def predicted_count_theorem(
        self, n: int, a: float, table: Optional[CriticalValueTable] = None
    ) -> int:
        """
        Zero count of f_a for a > 1 from the position of a among the critical values.
        """
        if a <= 1.0:
            raise InvalidParameterError(f"The critical-value count needs a > 1, got {a}")
        table = table or self.critical_values(n)
        a_values = table.a_values
        for a_j in a_values:
            if abs(a - a_j) <= PREDICTION_EXCLUSION:
                raise AtCriticalValue(f"a = {a} coincides with the critical value {a_j}")
        j = bisect.bisect_left(a_values, a)
        if j == 0:
            return 2 * n + 1
        if j == table.N:
            return 1
        return 2 * n - 4 * j + 1 if n % 2 == 0 else 2 * n - 4 * j + 3

    def regime(self, params: FamilyParams, table: CriticalValueTable) -> Regime:
        if params.small_a:
            return "small_a"
        j = bisect.bisect_left(table.a_values, params.a)
        if j == 0:
            return "case1"
        if j == table.N:
            return "case3"
        return "case2_even" if params.n % 2 == 0 else "case2_odd"

    def predicted_count_winding(
        self, params: FamilyParams, options: Optional[WindingOptions] = None
    ) -> Tuple[int, int]:
        """
        (count, W) from the caustic winding W.
        """
        report = self.winding_service.caustic_winding(params, options)
        if not report.certified:
            raise NearCriticalValue(
                f"Caustic of {params} passes within {report.min_distance:.3e} of the origin"
            )
        return count_from_winding(params.n, report.value, params.small_a), report.value

    def verify(
        self, params: FamilyParams, options: Optional[CensusOptions] = None
    ) -> VerificationReport:
        """
        Theorem count, winding count and census count side by side.
        """
        options = options or CensusOptions()
        table = self.critical_values(params.n)
        predicted_theorem = (
            None if params.small_a else self.predicted_count_theorem(params.n, params.a, table)
        )
        predicted_winding, winding = self.predicted_count_winding(
            params, WindingOptions(max_turn=options.max_turn, max_points=options.max_points)
        )
        census = self.census_service.certify_zeros(
            params, options, excluded_values=table.a_values
        )
        counts = {predicted_winding, census.total}
        if predicted_theorem is not None:
            counts.add(predicted_theorem)
        report = VerificationReport(
            params=params,
            predicted_theorem=predicted_theorem,
            predicted_winding=predicted_winding,
            census_total=census.total,
            caustic_winding=winding,
            agree=len(counts) == 1,
            regime=self.regime(params, table),
            z_plus=census.z_plus,
            z_minus=census.z_minus,
        )
        if not report.agree:
            logger.warning(
                f"Counts disagree for {params}: theorem {predicted_theorem},"
                f" winding {predicted_winding}, census {census.total}"
            )
        return report

    def _sweep_entry(self, n: int, a: float, options: Optional[CensusOptions]) -> SweepEntry:
        try:
            report = self.verify(FamilyParams(n=n, a=a), options)
        except (ValidationError, HarmonicCensusError) as e:
            logger.warning(f"Sweep entry n={n}, a={a} failed: {type(e).__name__}")
            return SweepEntry(a=a, error_type=type(e).__name__, message=str(e))
        return SweepEntry(a=a, report=report)

    def sweep(
        self,
        n: int,
        a_values: Sequence[float],
        options: Optional[CensusOptions] = None,
        threads: Optional[int] = None,
    ) -> List[SweepEntry]:
        """
        verify() for every a, in input order; failures become error entries.
        """
        threads = worker_count(threads)
        if threads and threads > 1 and len(a_values) > 1:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                entries = list(
                    executor.map(lambda a: self._sweep_entry(n, a, options), a_values)
                )
        else:
            entries = [self._sweep_entry(n, a, options) for a in a_values]
        failed = sum(1 for entry in entries if not entry.ok)
        logger.info(f"Sweep n={n}: {len(entries)} entries, {failed} failed")
        return entries
