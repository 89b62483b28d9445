"""Closed-form reference values, derived by hand and frozen.

Nothing in this module calls the library: disks in polar coordinates,
spherical caps in intrinsic cap coordinates, the cone in nappe coordinates.
Regressions show up as mismatches against these constants.
"""

import math

import numpy as np


def unit_ball_volume(k: int) -> float:
    return math.pi ** (k / 2) / math.gamma(k / 2 + 1)


# ---------------------------------------------------------------------------
# flat disk of radius r in a k-plane (here k = 2 unless noted)
# ---------------------------------------------------------------------------


def disk_mass(r: float) -> float:
    return math.pi * r * r


def disk_second_moment(r: float) -> float:
    # integral of |y|^2 over the disk = 2*pi * r^4 / 4
    return math.pi * r**4 / 2.0


def disk_coord_second(r: float) -> float:
    # integral of y_1^2 over the disk (half the second moment by symmetry)
    return math.pi * r**4 / 4.0


# ---------------------------------------------------------------------------
# spherical cap: unit 2-sphere of radius rho, ball centered at a surface
# point, chord radius r <= 2 rho.  Opening angle theta = 2 asin(r / (2 rho)).
# ---------------------------------------------------------------------------


def cap_mass(r: float, rho: float = 1.0) -> float:
    # 2 pi rho^2 (1 - cos theta) = pi r^2, independent of rho
    assert r <= 2 * rho
    return math.pi * r * r


def cap_second_moment(r: float) -> float:
    # chord distance |y - z| = 2 sin(theta/2); integrates to pi r^4 / 2,
    # the same value as the flat disk (the measure is locally 2-uniform)
    return math.pi * r**4 / 2.0


def cap_btilde_normal(r: float) -> float:
    # unit sphere, center at the south pole: the only nonzero component of
    # btilde = integral (r^2 - |y-z|^2)(y-z) points along the inward normal;
    # cap coordinates reduce it to pi r^6 / 12
    return math.pi * r**6 / 12.0


def cap_normal_second(r: float) -> float:
    # integral of the squared normal coordinate (height above the tangent
    # plane) over the cap: pi r^6 / 12 on the unit sphere
    return math.pi * r**6 / 12.0


def cap_tangent_second(r: float) -> float:
    # integral of y_1^2 (tangential coordinate) over the cap, unit sphere
    return math.pi * (r**4 / 4.0 - r**6 / 24.0)


def cap_q_tangent(r: float) -> float:
    # normalized quadratic form on a unit tangent vector, unit sphere
    return 1.0 - r * r / 6.0


# ---------------------------------------------------------------------------
# the unit 3-sphere in R^4 (not locally 3-uniform)
# ---------------------------------------------------------------------------


def s3_cap_mass(r: float) -> float:
    theta = 2.0 * math.asin(min(r / 2.0, 1.0))
    return 2.0 * math.pi * (theta - math.sin(theta) * math.cos(theta))


S3_DEVIATION_AT_1 = s3_cap_mass(1.0) / unit_ball_volume(3) - 1.0  # -0.078816...


# ---------------------------------------------------------------------------
# the cone {x4^2 = x1^2 + x2^2 + x3^2} in R^4 (3-uniform, singular vertex)
# ---------------------------------------------------------------------------


def cone_vertex_mass(r: float) -> float:
    # both nappes in coordinates (s, omega), area element sqrt(2) s^2:
    # 2 * 4 pi * sqrt(2) * integral_0^{r/sqrt 2} s^2 ds = (4 pi / 3) r^3
    return 4.0 * math.pi / 3.0 * r**3


def cone_point(a: float, direction=(1.0, 0.0, 0.0), upper: bool = True) -> np.ndarray:
    """A smooth cone point at parameter a: (a * direction, +-a)."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    return np.concatenate([a * d, [a if upper else -a]])


def cone_mean_curvature_norm(a: float) -> float:
    # at distance sqrt(2) a from the vertex the principal curvatures in the
    # aligned chart are (0, -1/(sqrt2 a), -1/(sqrt2 a)); |H| = sqrt2 / (3 a)
    return math.sqrt(2.0) / (3.0 * a)


# area element of the unit-sphere graph chart at |u| = 0.5
SPHERE_AREA_AT_HALF = math.sqrt(4.0 / 3.0)  # 1.1547005...
