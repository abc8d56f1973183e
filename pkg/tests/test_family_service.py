import cmath
import math

import numpy as np
import pytest
from pydantic import ValidationError

from harmonic_census.exceptions import DomainError
from harmonic_census.models.FamilyModels import FamilyParams


def test_params_reject_a_equal_one():
    with pytest.raises(ValidationError):
        FamilyParams(n=4, a=1.0)


@pytest.mark.parametrize("n, a", [(3, 2.0), (4, 0.0), (4, -2.0), (4, math.inf), (4, math.nan)])
def test_params_reject_out_of_range(n, a):
    with pytest.raises(ValidationError):
        FamilyParams(n=n, a=a)


def test_params_regime_flags():
    assert FamilyParams(n=4, a=0.5).small_a
    assert FamilyParams(n=4, a=0.5).exterior_sign == -1
    assert FamilyParams(n=4, a=2.0).exterior_sign == 1


def test_evaluate_at_one(family_service, params_4_3):
    # f_a(1) = -(a+1)/(n(n+1)) - 1
    value = family_service.evaluate(params_4_3, 1 + 0j)
    assert value.real == pytest.approx(-1.2, abs=1e-14)
    assert value.imag == pytest.approx(0.0, abs=1e-14)


def test_evaluate_rejects_pole(family_service, params_4_3):
    with pytest.raises(DomainError):
        family_service.evaluate(params_4_3, 0j)
    with pytest.raises(DomainError):
        family_service.evaluate_many(params_4_3, np.array([1.0, 0.0, 2.0j]))


def test_evaluate_conjugation_symmetry(family_service, params_4_3, rng):
    z = rng.uniform(0.2, 2.0, 500) * np.exp(1j * rng.uniform(0, 2 * np.pi, 500))
    direct = family_service.evaluate_many(params_4_3, np.conj(z))
    mirrored = np.conj(family_service.evaluate_many(params_4_3, z))
    np.testing.assert_allclose(direct, mirrored, rtol=1e-14, atol=1e-14)


def test_evaluate_matches_scalar_route(family_service, rng):
    params = FamilyParams(n=6, a=2.5)
    z = complex(0.8, -0.7)
    expected = (
        params.a / 7 * z**7
        - z ** (-6) / 6
        + z.conjugate() ** 7 / 7
        - params.a / 6 * z.conjugate() ** (-6)
        - 1
    )
    assert family_service.evaluate(params, z) == pytest.approx(expected, rel=1e-13)


def test_wirtinger_at_one(family_service, params_4_3):
    pair = family_service.wirtinger_derivatives(params_4_3, 1 + 0j)
    assert pair.dh == pytest.approx(4.0)
    assert pair.dg == pytest.approx(4.0)


def test_wirtinger_moduli_agree_on_unit_circle(family_service, params_4_3, rng):
    z = np.exp(1j * rng.uniform(0, 2 * np.pi, 1000))
    dh, dg = family_service.wirtinger_many(params_4_3, z)
    np.testing.assert_allclose(np.abs(dg / dh), 1.0, atol=1e-12)


def test_wirtinger_inside_is_sense_reversing(family_service, params_4_3):
    pair = family_service.wirtinger_derivatives(params_4_3, 0.5 + 0j)
    assert abs(pair.dg) > abs(pair.dh)


def test_dilatation_on_unit_circle(family_service, rng):
    for n, a in [(4, 3.0), (5, 1.2), (7, 0.4)]:
        params = FamilyParams(n=n, a=a)
        for theta in rng.uniform(0, 2 * np.pi, 1000):
            value = family_service.dilatation_modulus(params, cmath.exp(1j * theta))
            assert abs(value - 1.0) <= 1e-9


def test_dilatation_limits(family_service, params_4_3):
    assert family_service.dilatation_modulus(params_4_3, 0.1 + 0j) == pytest.approx(3.0, rel=1e-6)
    assert family_service.dilatation_modulus(params_4_3, 2 + 0j) < 1.0


def test_dilatation_matches_derivative_quotient(family_service, params_4_3):
    z = complex(0.7, 0.4)
    pair = family_service.wirtinger_derivatives(params_4_3, z)
    assert family_service.dilatation_modulus(params_4_3, z) == pytest.approx(
        abs(pair.dg) / abs(pair.dh), rel=1e-12
    )


def test_jacobian_on_critical_circle(family_service, params_4_3):
    assert family_service.jacobian(params_4_3, 1 + 0j).det == 0.0


def test_jacobian_inside_negative(family_service, params_4_3):
    assert family_service.jacobian(params_4_3, 0.5 + 0j).det < 0


def test_jacobian_det_agrees_with_derivatives(family_service, rng):
    for n, a in [(4, 3.0), (6, 1.5), (8, 0.3)]:
        params = FamilyParams(n=n, a=a)
        rho_min, R_max = family_service.containment_radii(params)
        z = rng.uniform(rho_min, R_max, 10_000) * np.exp(1j * rng.uniform(0, 2 * np.pi, 10_000))
        dh, dg = family_service.wirtinger_many(params, z)
        scale = np.abs(dh) ** 2 + np.abs(dg) ** 2
        direct = np.abs(dh) ** 2 - np.abs(dg) ** 2
        closed = family_service.jacobian_det_many(params, z)
        assert np.all(np.abs(closed - direct) <= 1e-10 * scale)


def test_jacobian_entries_match_finite_differences(family_service, rng):
    step = 1e-6
    for n, a in [(4, 3.0), (5, 1.37), (7, 0.6)]:
        params = FamilyParams(n=n, a=a)
        z = rng.uniform(0.6, 1.8, 10_000) * np.exp(1j * rng.uniform(0, 2 * np.pi, 10_000))
        fx = (
            family_service.evaluate_many(params, z + step)
            - family_service.evaluate_many(params, z - step)
        ) / (2 * step)
        fy = (
            family_service.evaluate_many(params, z + 1j * step)
            - family_service.evaluate_many(params, z - 1j * step)
        ) / (2 * step)
        dh, dg = family_service.wirtinger_many(params, z)
        # columns (u_x, v_x) and (u_y, v_y) as complex numbers
        exact_x = dh + np.conj(dg)
        exact_y = 1j * (dh - np.conj(dg))
        error = np.sqrt(np.abs(fx - exact_x) ** 2 + np.abs(fy - exact_y) ** 2)
        norm = np.sqrt(np.abs(exact_x) ** 2 + np.abs(exact_y) ** 2)
        assert np.all(error < 1e-5 * norm)

        entries = family_service.jacobian(params, complex(z[0])).entries
        assert entries[0][0] == pytest.approx(exact_x[0].real, rel=1e-12)
        assert entries[1][0] == pytest.approx(exact_x[0].imag, rel=1e-12)
        assert entries[0][1] == pytest.approx(exact_y[0].real, rel=1e-12)
        assert entries[1][1] == pytest.approx(exact_y[0].imag, rel=1e-12)


def test_jacobian_eval_determinants_agree(family_service, params_4_3):
    jacobian = family_service.jacobian(params_4_3, complex(1.3, 0.2))
    assert jacobian.entries_det == pytest.approx(jacobian.det, rel=1e-10)
    pair = family_service.wirtinger_derivatives(params_4_3, complex(1.3, 0.2))
    assert jacobian.scale == pytest.approx(abs(pair.dh) ** 2 + abs(pair.dg) ** 2, rel=1e-12)


def test_sign_partition(family_service, rng):
    params = FamilyParams(n=5, a=2.0)
    theta = rng.uniform(0, 2 * np.pi, 1000)
    inside = rng.uniform(0.1, 0.9, 1000) * np.exp(1j * theta)
    outside = rng.uniform(1.1, 2.0, 1000) * np.exp(1j * theta)
    assert np.all(family_service.jacobian_det_many(params, inside) < 0)
    assert np.all(family_service.jacobian_det_many(params, outside) > 0)


def test_region_sign(family_service):
    large = FamilyParams(n=4, a=2.0)
    small = FamilyParams(n=4, a=0.5)
    assert family_service.region_sign(large, 2 + 0j) == 1
    assert family_service.region_sign(large, 0.5j) == -1
    assert family_service.region_sign(small, 2 + 0j) == -1
    assert family_service.region_sign(small, 0.5j) == 1


@pytest.mark.parametrize("n, a", [(4, 3.0), (4, 1.1), (5, 20.0), (6, 0.5), (8, 0.2)])
def test_containment_radii_inequalities(family_service, n, a):
    params = FamilyParams(n=n, a=a)
    rho_min, R_max = family_service.containment_radii(params)
    assert 0 < rho_min < 1 < R_max
    assert abs(a - 1) / (n + 1) * R_max ** (n + 1) > (a + 1) / n * R_max ** (-n) + 1
    assert abs(a - 1) / n * rho_min ** (-n) > (a + 1) / (n + 1) * rho_min ** (n + 1) + 1


def test_containment_circles_are_zero_free(family_service):
    params = FamilyParams(n=4, a=1.1)
    rho_min, R_max = family_service.containment_radii(params)
    circle = np.exp(2j * np.pi * np.arange(4096) / 4096)
    assert np.abs(family_service.evaluate_many(params, R_max * circle)).min() > 0
    assert np.abs(family_service.evaluate_many(params, rho_min * circle)).min() > 0
