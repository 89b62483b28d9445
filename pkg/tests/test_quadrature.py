import numpy as np
import pytest

from gmtlab.errors import EmptyIntersection
from gmtlab.geometry import ManifoldDescriptor
from gmtlab.quadrature import (
    BallRegion,
    integrate_cone_ball,
    integrate_over_ball,
    monte_carlo_fallback,
)

import oracles

PLANE = ManifoldDescriptor.plane(2, 3)
SPHERE = ManifoldDescriptor.sphere(2, 1.0)
CONE = ManifoldDescriptor.kp_cone()
SOUTH = np.array([0.0, 0.0, -1.0])


def ones(pts):
    return np.ones(len(pts))


@pytest.mark.parametrize("r", [0.1, 0.5, 1.0])
def test_disk_mass(r):
    res = integrate_over_ball(PLANE, BallRegion([0.0, 0.0, 0.0], r), ones)
    assert res.converged
    assert res.value == pytest.approx(oracles.disk_mass(r), rel=1e-10)


def test_disk_mass_off_center():
    region = BallRegion([0.7, -1.3, 0.0], 0.45)
    res = integrate_over_ball(PLANE, region, ones)
    assert res.value == pytest.approx(oracles.disk_mass(0.45), rel=1e-10)


def test_disk_second_moment():
    z = np.zeros(3)
    res = integrate_over_ball(
        PLANE, BallRegion(z, 0.5), lambda p: np.sum((p - z) ** 2, axis=1)
    )
    assert res.value == pytest.approx(oracles.disk_second_moment(0.5), rel=1e-9)


@pytest.mark.parametrize("rho,r", [(1.0, 0.25), (1.0, 1.0), (0.5, 0.9), (2.0, 1.0)])
def test_spherical_cap_mass(rho, r):
    # the cap parametrization covers radii all the way up to 2*rho
    m = ManifoldDescriptor.sphere(2, rho)
    res = integrate_over_ball(m, BallRegion([0.0, 0.0, -rho], r), ones)
    assert res.value == pytest.approx(oracles.cap_mass(r, rho), rel=1e-9)


def test_s3_cap_mass_frozen():
    m = ManifoldDescriptor.sphere(3, 1.0)
    res = integrate_over_ball(m, BallRegion([0.0, 0.0, 0.0, -1.0], 1.0), ones)
    assert res.value == pytest.approx(oracles.s3_cap_mass(1.0), rel=1e-8)
    assert res.value == pytest.approx(3.8590372, abs=1e-6)


@pytest.mark.parametrize("r", [0.5, 1.0])
def test_cone_vertex_mass(r):
    res = integrate_cone_ball(BallRegion(np.zeros(4), r), ones)
    assert res.value == pytest.approx(oracles.cone_vertex_mass(r), rel=1e-9)


def test_cone_smooth_point_mass():
    z = oracles.cone_point(2.0)
    res = integrate_over_ball(CONE, BallRegion(z, 0.25), ones)
    # the cone is 3-uniform: mass is w_3 r^3 at every support point
    assert res.value == pytest.approx(
        oracles.unit_ball_volume(3) * 0.25**3, rel=1e-8
    )


def test_cone_large_ball_at_smooth_point():
    # forces the nappe-coordinate path (radius exceeds the chart bound)
    z = oracles.cone_point(0.4)
    res = integrate_over_ball(CONE, BallRegion(z, 1.0), ones)
    assert res.value == pytest.approx(oracles.unit_ball_volume(3), rel=1e-7)


def test_vector_integrand_shape():
    res = integrate_over_ball(
        PLANE,
        BallRegion(np.zeros(3), 0.5),
        lambda p: np.stack([np.ones(len(p)), p[:, 0], p[:, 0] ** 2], axis=1),
    )
    vals = np.asarray(res.value)
    assert vals.shape == (3,)
    assert vals[0] == pytest.approx(oracles.disk_mass(0.5), rel=1e-9)
    assert abs(vals[1]) < 1e-12  # odd moment vanishes
    assert vals[2] == pytest.approx(oracles.disk_coord_second(0.5), rel=1e-9)


def test_empty_intersection_raises():
    with pytest.raises(EmptyIntersection):
        integrate_over_ball(SPHERE, BallRegion([0.0, 0.0, -3.0], 0.5), ones)


def test_tolerance_tightening_is_stable():
    region = BallRegion(SOUTH, 0.7)
    loose = integrate_over_ball(SPHERE, region, ones, rel_tol=1e-6)
    tight = integrate_over_ball(SPHERE, region, ones, rel_tol=1e-10)
    assert abs(loose.value - tight.value) <= 10 * (
        loose.error_estimate + tight.error_estimate
    ) + 1e-12
    assert tight.error_estimate <= loose.error_estimate + 1e-15


def test_monte_carlo_reproducible():
    region = BallRegion(SOUTH, 0.5)
    a = monte_carlo_fallback(SPHERE, region, ones, samples=200_000, seed=7)
    b = monte_carlo_fallback(SPHERE, region, ones, samples=200_000, seed=7)
    assert a.value == b.value  # bitwise
    assert a.error_estimate == b.error_estimate
    c = monte_carlo_fallback(SPHERE, region, ones, samples=200_000, seed=8)
    assert c.value != a.value


@pytest.mark.parametrize(
    "m,center,r",
    [
        (PLANE, np.zeros(3), 0.6),
        (SPHERE, SOUTH, 0.8),
        (CONE, np.zeros(4), 0.7),
        (CONE, oracles.cone_point(2.0), 0.3),
    ],
)
def test_monte_carlo_agrees_with_adaptive(m, center, r):
    region = BallRegion(center, r)
    ad = integrate_over_ball(m, region, ones)
    mc = monte_carlo_fallback(m, region, ones, samples=400_000, seed=3)
    combined = 3 * (float(np.max(np.atleast_1d(ad.error_estimate))) + mc.error_estimate)
    assert abs(float(ad.value) - mc.value) <= combined


def test_mass_positive_and_monotone_in_radius():
    masses = [
        float(integrate_over_ball(SPHERE, BallRegion(SOUTH, r), ones).value)
        for r in (0.2, 0.4, 0.6, 0.8)
    ]
    assert all(m > 0 for m in masses)
    assert all(b > a for a, b in zip(masses, masses[1:]))
