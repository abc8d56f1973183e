import logging
import math
from typing import Tuple, Union

import numpy as np

from harmonic_census.exceptions import DomainError, IndeterminateError
from harmonic_census.models.FamilyModels import FamilyParams, JacobianEval, WirtingerPair

logger = logging.getLogger(__name__)

ComplexLike = Union[complex, np.ndarray]


def integer_power(z: ComplexLike, k: int) -> ComplexLike:
    """
    z**k for k >= 0 by repeated squaring, so that conj(z)**k == conj(z**k) bit for bit.
    """
    result: ComplexLike = np.ones_like(z) if isinstance(z, np.ndarray) else 1 + 0j
    base = z
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def reciprocal(z: ComplexLike) -> ComplexLike:
    """
    1/z as conj(z)/|z|^2 (sign-symmetric under conjugation).
    """
    return np.conj(z) / (z.real * z.real + z.imag * z.imag)


class FamilyService:
    """
    Evaluation of f_a, its Wirtinger derivatives, dilatation and Jacobian.

    f_a = h + conj(g) with
        h(z) = a/(n+1) z^(n+1) - 1/n z^(-n) - 1,   h'(z) = a z^n + z^(-n-1)
        g(z) = 1/(n+1) z^(n+1) - a/n z^(-n),       g'(z) = z^n + a z^(-n-1)
    """

    @staticmethod
    def _check_nonzero(z: ComplexLike) -> None:
        if np.any(np.asarray(z) == 0):
            raise DomainError("f_a has a pole at z = 0")

    def evaluate_many(self, params: FamilyParams, z: np.ndarray) -> np.ndarray:
        """
        Vectorized f_a over an array of nonzero points.
        """
        z = np.asarray(z, dtype=complex)
        self._check_nonzero(z)
        n, a = params.n, params.a
        p = integer_power(z, n + 1)
        q = integer_power(reciprocal(z), n)
        return (a / (n + 1)) * p - q / n + np.conj(p) / (n + 1) - (a / n) * np.conj(q) - 1.0

    def evaluate(self, params: FamilyParams, z: complex) -> complex:
        """
        f_a(z) for a single nonzero point.
        """
        return complex(self.evaluate_many(params, np.asarray([z], dtype=complex))[0])

    def wirtinger_many(
        self, params: FamilyParams, z: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        z = np.asarray(z, dtype=complex)
        self._check_nonzero(z)
        n, a = params.n, params.a
        zn = integer_power(z, n)
        inv = integer_power(reciprocal(z), n + 1)
        return a * zn + inv, zn + a * inv

    def wirtinger_derivatives(self, params: FamilyParams, z: complex) -> WirtingerPair:
        dh, dg = self.wirtinger_many(params, np.asarray([z], dtype=complex))
        return WirtingerPair(dh=complex(dh[0]), dg=complex(dg[0]))

    def dilatation_modulus(self, params: FamilyParams, z: complex) -> float:
        """
        |omega(z)| = |g'(z)/h'(z)| = |z^(2n+1) + a| / |a z^(2n+1) + 1|.
        """
        self._check_nonzero(z)
        w = integer_power(complex(z), 2 * params.n + 1)
        numerator = abs(w + params.a)
        denominator = abs(params.a * w + 1.0)
        if denominator == 0.0:
            if numerator == 0.0:
                raise IndeterminateError(f"Dilatation is 0/0 at z = {z}")
            return math.inf
        return numerator / denominator

    def jacobian_det_many(self, params: FamilyParams, z: np.ndarray) -> np.ndarray:
        """
        |h'|^2 - |g'|^2 = (a^2 - 1)(|z|^(2n) - |z|^(-2n-2)).

        The cross terms cancel exactly; the expm1 form keeps the sign reliable
        arbitrarily close to the unit circle.
        """
        z = np.asarray(z, dtype=complex)
        self._check_nonzero(z)
        n, a = params.n, params.a
        log_rho = np.log(np.abs(z))
        return (a * a - 1.0) * np.exp(-(2 * n + 2) * log_rho) * np.expm1((4 * n + 2) * log_rho)

    def jacobian(self, params: FamilyParams, z: complex) -> JacobianEval:
        """
        Real Jacobian of (u, v) from h' and g' (Wirtinger calculus for f = h + conj(g)).
        """
        pair = self.wirtinger_derivatives(params, z)
        dh, dg = pair.dh, pair.dg
        entries = (
            (dh.real + dg.real, -dh.imag - dg.imag),
            (dh.imag - dg.imag, dh.real - dg.real),
        )
        det = float(self.jacobian_det_many(params, np.asarray([z], dtype=complex))[0])
        return JacobianEval(entries=entries, det=det)

    def region_sign(self, params: FamilyParams, z: complex) -> int:
        """
        Expected order sign of a zero at z: the Jacobian sign of its side of |z| = 1.
        """
        return params.exterior_sign if abs(z) > 1.0 else -params.exterior_sign

    @staticmethod
    def _outer_margin(params: FamilyParams, radius: float) -> float:
        # leading pair dominates everything else on |z| = radius
        n, a = params.n, params.a
        return (
            abs(a - 1.0) / (n + 1) * radius ** (n + 1)
            - (a + 1.0) / n * radius ** (-n)
            - 1.0
        )

    @staticmethod
    def _inner_margin(params: FamilyParams, radius: float) -> float:
        # pole pair dominates everything else on |z| = radius
        n, a = params.n, params.a
        return (
            abs(a - 1.0) / n * radius ** (-n)
            - (a + 1.0) / (n + 1) * radius ** (n + 1)
            - 1.0
        )

    def containment_radii(self, params: FamilyParams) -> Tuple[float, float]:
        """
        Radii rho_min < 1 < R_max with no zero of f_a in |z| <= rho_min or |z| >= R_max.

        The outer margin increases with the radius and the inner margin decreases,
        so each inequality, once true, stays true beyond the returned radius.
        """
        hi = 1.0
        while self._outer_margin(params, hi) <= 0.0:
            hi *= 2.0
        lo = hi / 2.0
        while hi - lo > 0.01 * hi:
            mid = 0.5 * (lo + hi)
            if self._outer_margin(params, mid) > 0.0:
                hi = mid
            else:
                lo = mid
        R_max = _round_sig(hi, up=True)

        # for large a the inner margin is already positive at |z| = 1; keep rho_min < 1
        lo = 0.5
        while self._inner_margin(params, lo) <= 0.0:
            lo /= 2.0
        hi = 2.0 * lo
        while hi - lo > 0.01 * lo:
            mid = 0.5 * (lo + hi)
            if self._inner_margin(params, mid) > 0.0:
                lo = mid
            else:
                hi = mid
        rho_min = _round_sig(lo, up=False)

        logger.debug(f"Containment radii for {params}: rho_min={rho_min}, R_max={R_max}")
        return rho_min, R_max


def _round_sig(value: float, up: bool) -> float:
    """
    Round to two significant digits, away from the unsafe side.
    """
    scale = 10.0 ** (math.floor(math.log10(value)) - 1)
    steps = math.ceil(value / scale) if up else math.floor(value / scale)
    return steps * scale
