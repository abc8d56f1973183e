import cmath

import numpy as np
import pytest

from harmonic_census.exceptions import (
    AtCriticalValue,
    NoConvergence,
    SingularJacobian,
    SingularPoint,
)
from harmonic_census.helpers.BoxHelper import Rectangle
from harmonic_census.models.CensusModels import CensusOptions
from harmonic_census.models.FamilyModels import FamilyParams


def assert_well_formed(report, family_service):
    assert report.total == report.z_plus + report.z_minus == len(report.zeros)
    assert report.order_sum == report.z_plus - report.z_minus
    tol_f = CensusOptions().tol_f * (1 + report.params.a)
    locations = [zero.location for zero in report.zeros]
    assert locations == sorted(locations, key=lambda z: (z.real, z.imag))
    for zero in report.zeros:
        assert zero.residual < tol_f
        assert abs(family_service.evaluate(report.params, zero.location)) < tol_f
        assert zero.order == (1 if zero.jacobian_det > 0 else -1)
        assert zero.order == family_service.region_sign(report.params, zero.location)
    for i, z in enumerate(locations):
        for w in locations[i + 1 :]:
            assert abs(z - w) > 1e-9
    # real coefficients: the zero set is closed under conjugation
    for z in locations:
        assert min(abs(z.conjugate() - w) for w in locations) < 1e-9


def test_classify_order(census_service, params_4_3):
    assert census_service.classify_order(params_4_3, 2 + 0j) == 1
    assert census_service.classify_order(params_4_3, 0.5j) == -1
    assert census_service.classify_order(FamilyParams(n=4, a=0.5), 2 + 0j) == -1


@pytest.mark.parametrize("z", [1 + 0j, cmath.exp(0.3j), -1j])
def test_classify_order_on_critical_circle(census_service, params_4_3, z):
    with pytest.raises(SingularPoint):
        census_service.classify_order(params_4_3, z)


def test_refine_zero_converges_quadratically(census_service):
    params = FamilyParams(n=4, a=3.54)
    certificate = census_service.refine_zero(params, 1.2 + 0.01j)
    assert abs(certificate.location.imag) < 1e-12
    assert 1.0 < certificate.location.real < 1.3
    assert certificate.order == 1
    history = certificate.residual_history
    assert history[-1] < 1e-10 * (1 + params.a)
    pairs = [
        (before, after)
        for before, after in zip(history[:-1], history[1:])
        if 1e-12 < before < 1e-2
    ]
    assert pairs
    assert all(after <= 100 * before**2 + 1e-13 for before, after in pairs)


def test_refine_zero_fixed_point(census_service):
    params = FamilyParams(n=4, a=3.54)
    first = census_service.refine_zero(params, 1.15 + 0j)
    again = census_service.refine_zero(params, first.location)
    assert again.location == pytest.approx(first.location, abs=1e-14)
    assert again.iterations == 0


def test_refine_zero_on_critical_circle(census_service):
    with pytest.raises(SingularJacobian):
        census_service.refine_zero(FamilyParams(n=4, a=3.54), 1 + 0j)


def test_refine_zero_iteration_budget(census_service):
    with pytest.raises(NoConvergence):
        census_service.refine_zero(
            FamilyParams(n=4, a=3.54), 1.8 + 0.4j, CensusOptions(max_iters=1)
        )


def test_newton_batch_drops_failed_seeds(census_service, family_service):
    params = FamilyParams(n=4, a=3.54)
    options = CensusOptions()
    circle = np.exp(1j * np.linspace(0, 6, 7))
    seeds = np.concatenate([circle, [1.15 + 0j, 1.16 + 0.01j]])
    found = census_service.newton_batch(params, seeds, options, (0.1, 10.0))
    assert found.size >= 2
    assert np.all(np.abs(found) > 1)
    residual = np.abs(family_service.evaluate_many(params, found))
    assert np.all(residual < options.tol_f * (1 + params.a))


@pytest.mark.parametrize(
    "a, total, z_minus, z_plus, winding",
    [(1.1, 9, 4, 5, 0), (1.37, 5, 2, 3, 2), (3.54, 1, 0, 1, 4)],
)
def test_census_sample_parameters(
    census_service, family_service, a, total, z_minus, z_plus, winding
):
    report = census_service.certify_zeros(FamilyParams(n=4, a=a))
    assert_well_formed(report, family_service)
    assert (report.total, report.z_minus, report.z_plus) == (total, z_minus, z_plus)
    assert report.order_sum == 1
    assert report.caustic_winding == winding
    assert report.predicted_total == total
    assert report.consistent
    assert report.warnings == []
    assert report.rho_min < 1 < report.R_max
    assert report.leaf_count > 0
    # leaf tiling outside |z| = 1 winds once per sense-preserving zero, inside once
    # backwards per sense-reversing zero
    assert report.outside_winding == z_plus
    assert report.inside_winding == -z_minus
    assert report.crossing_winding == 0


def test_zero_free_cells(census_service):
    params = FamilyParams(n=4, a=3.54)
    assert census_service.zero_free(params, Rectangle(x0=-1.01, x1=-0.99, y0=-0.01, y1=0.01))
    # holds the real zero near 1.13
    assert not census_service.zero_free(params, Rectangle(x0=1.0, x1=1.3, y0=-0.05, y1=0.05))


def test_zero_free_cells_wind_zero(census_service, winding_service, rng):
    params = FamilyParams(n=4, a=1.1)
    checked = 0
    for _ in range(200):
        center = rng.uniform(0.7, 1.3) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        half = rng.uniform(0.005, 0.05)
        x, y = center.real, center.imag
        rect = Rectangle(x0=x - half, x1=x + half, y0=y - half, y1=y + half)
        if census_service.zero_free(params, rect):
            assert winding_service.box_boundary_winding(params, rect).value == 0
            checked += 1
    assert checked > 0


def test_census_dataframe(census_service):
    report = census_service.certify_zeros(FamilyParams(n=4, a=3.54))
    df = report.to_dataframe()
    assert list(df.columns) == ["re", "im", "order", "residual"]
    assert df["order"].tolist() == [1]


def test_census_refuses_critical_values(census_service, caustic_service):
    a_1 = caustic_service.right_side_intersections(4)[0].critical_a
    with pytest.raises(AtCriticalValue):
        census_service.certify_zeros(FamilyParams(n=4, a=a_1 + 1e-7))
    with pytest.raises(AtCriticalValue):
        census_service.certify_zeros(FamilyParams(n=4, a=2.0), excluded_values=[2.0 + 5e-7])


@pytest.mark.parametrize("n", [4, 5])
def test_census_small_a_count_is_constant(census_service, family_service, n):
    totals = []
    for a in (0.2, 0.5, 0.9):
        report = census_service.certify_zeros(FamilyParams(n=n, a=a))
        assert_well_formed(report, family_service)
        assert report.order_sum == -1
        assert report.consistent
        assert report.outside_winding == -report.z_minus
        assert report.inside_winding == report.z_plus
        totals.append(report.total)
    assert len(set(totals)) == 1


@pytest.mark.slow
def test_census_random_parameters(census_service, family_service, theorem_service, rng):
    checked = 0
    while checked < 30:
        n = int(rng.integers(4, 9))
        a = float(rng.uniform(1.02, n * (n + 1)))
        table = theorem_service.critical_values(n, cross_check=False)
        if min(abs(a - a_j) for a_j in table.a_values) < 1e-3:
            continue
        report = census_service.certify_zeros(FamilyParams(n=n, a=a))
        assert_well_formed(report, family_service)
        assert report.order_sum == 1
        assert report.total == 2 * (n - report.caustic_winding) + 1
        assert report.total == theorem_service.predicted_count_theorem(n, a, table)
        checked += 1
