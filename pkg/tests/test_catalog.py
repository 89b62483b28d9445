import numpy as np
import pytest

from gmtlab.catalog import (
    DEFAULT_PROFILE_RADII,
    RadialMassProfile,
    ball_mass,
    builtin,
    radial_profile,
    rescale,
    rescale_point,
)
from gmtlab.errors import UnknownLabel
from gmtlab.quadrature import BallRegion

import oracles


def test_builtin_labels():
    plane = builtin("plane", k=2, n_plus_1=3)
    assert plane.k == 2 and plane.c == 1.0
    sphere = builtin("sphere", k=2, rho=2.0)
    assert sphere.manifold.rho == 2.0
    s3 = builtin("s3_in_r4")
    assert s3.k == 3 and s3.manifold.n_plus_1 == 4
    cone = builtin("kp_cone")
    assert cone.k == 3 and cone.manifold.kind == "kp_cone"


def test_unknown_label_raises():
    with pytest.raises(UnknownLabel):
        builtin("torus")
    with pytest.raises(UnknownLabel):
        builtin("sphere", k=2, rho=1.0, extra=5)


def test_ball_mass_plane():
    mu = builtin("plane", k=2, n_plus_1=3)
    mass, err, res = ball_mass(mu, BallRegion([0.0, 0.0, 0.0], 0.5))
    assert res.converged
    assert mass == pytest.approx(oracles.disk_mass(0.5), rel=1e-10)
    assert err < 1e-8


def test_density_multiplier_scales_mass():
    mu = builtin("plane", k=2, n_plus_1=3).with_density(2.0)
    mass, _, _ = ball_mass(mu, BallRegion([0.0, 0.0, 0.0], 0.5))
    assert mass == pytest.approx(2 * oracles.disk_mass(0.5), rel=1e-10)


def test_s3_profile_frozen_values():
    mu = builtin("s3_in_r4")
    profile = radial_profile(mu, [0.0, 0.0, 0.0, -1.0], radii=(0.25, 0.5, 1.0))
    for (r, mass, _err) in profile.samples:
        assert mass == pytest.approx(oracles.s3_cap_mass(r), rel=1e-7)
    assert profile.samples[-1][1] == pytest.approx(3.8590372, abs=1e-6)


def test_profile_is_monotone():
    mu = builtin("sphere", k=2, rho=1.0)
    profile = radial_profile(mu, [0.0, 0.0, -1.0], radii=DEFAULT_PROFILE_RADII[:5][::-1])
    masses = [s[1] for s in profile.samples]
    assert all(b > a for a, b in zip(masses, masses[1:]))


def test_profile_requires_increasing_radii():
    with pytest.raises(ValueError):
        RadialMassProfile(np.zeros(3), ((0.5, 1.0, 0.0), (0.5, 2.0, 0.0)))
    with pytest.raises(ValueError):
        RadialMassProfile(np.zeros(3), ((0.5, 1.0, 0.0), (1.5, 2.0, 0.0)))


def test_center_symmetry_on_sphere():
    # ball mass at a surface point must not depend on which point
    mu = builtin("sphere", k=2, rho=1.0)
    r = 0.4
    m1, _, _ = ball_mass(mu, BallRegion([0.0, 0.0, -1.0], r))
    m2, _, _ = ball_mass(mu, BallRegion([1.0, 0.0, 0.0], r))
    d = np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0)
    m3, _, _ = ball_mass(mu, BallRegion(d, r))
    assert m1 == pytest.approx(m2, rel=1e-9)
    assert m1 == pytest.approx(m3, rel=1e-9)


def test_rescale_point_and_dilation():
    z = np.array([0.1, -0.2, 0.0])
    assert np.allclose(rescale_point(z, 0.5), 8.0 * z)
    mu = builtin("sphere", k=2, rho=1.0)
    scaled = rescale(mu, 0.5, 1.0)
    assert scaled.manifold.rho == pytest.approx(8.0)


def test_rescale_recovers_unit_density():
    # doubled plane density, recovered c = 2 -> rescaled measure is uniform
    mu = builtin("plane", k=2, n_plus_1=3).with_density(2.0)
    scaled = rescale(mu, 1.0, 2.0)
    mass, _, _ = ball_mass(scaled, BallRegion([0.0, 0.0, 0.0], 0.5))
    assert mass == pytest.approx(oracles.disk_mass(0.5), rel=1e-10)


def test_rescale_preserves_uniformity_of_sphere():
    # dilating a sphere keeps cap masses equal to pi r^2
    mu = builtin("sphere", k=2, rho=1.0)
    scaled = rescale(mu, 0.5, 1.0)  # rho -> 8
    z = np.array([0.0, 0.0, -scaled.manifold.rho])
    mass, _, _ = ball_mass(scaled, BallRegion(z, 0.7))
    assert mass == pytest.approx(oracles.cap_mass(0.7, scaled.manifold.rho), rel=1e-9)
