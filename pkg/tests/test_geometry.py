import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmtlab.errors import PointOffManifold, SingularPoint
from gmtlab.geometry import (
    ManifoldDescriptor,
    area_element,
    curvature_report,
    graph_chart_at,
    mean_curvature_fd,
    mean_curvature_vector,
    second_fundamental_form,
    support_points_near,
)

import oracles

SOUTH = np.array([0.0, 0.0, -1.0])


def test_plane_chart_is_exact():
    m = ManifoldDescriptor.plane(2, 3)
    chart = graph_chart_at(m, [0.3, -0.2, 0.0], 0.5)
    u = np.array([[0.1, 0.2], [-0.3, 0.05]])
    x = chart.to_ambient(u)
    assert np.allclose(x[:, 2], 0.0, atol=1e-14)
    back = chart.to_chart_frame(x)
    assert np.allclose(back[:, :2], u, atol=1e-12)
    assert np.allclose(back[:, 2], 0.0, atol=1e-12)
    assert np.linalg.norm(mean_curvature_vector(chart)) < 1e-14


def test_chart_frame_is_special_orthogonal():
    for m, z in [
        (ManifoldDescriptor.sphere(2, 1.0), SOUTH),
        (ManifoldDescriptor.kp_cone(), oracles.cone_point(2.0)),
        (ManifoldDescriptor.polynomial_graph(2, 3, [[(1.0, (2, 0)), (-1.0, (0, 2))]]),
         [0.0, 0.0, 0.0]),
    ]:
        chart = graph_chart_at(m, z, 0.25)
        R = chart.rotation
        assert np.allclose(R.T @ R, np.eye(len(z)), atol=1e-12)
        assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("rho", [0.5, 1.0, 2.0])
def test_sphere_curvature(rho):
    m = ManifoldDescriptor.sphere(2, rho)
    rep = curvature_report(m, [0.0, 0.0, -rho], want_radius=0.4 * rho)
    assert rep.norm_H == pytest.approx(1.0 / rho, rel=1e-10)
    # one normal direction; both principal curvatures equal 1/rho
    assert np.allclose(rep.sff_eigenvalues[0], 1.0 / rho, atol=1e-10)
    # H points toward the center
    center_dir = -np.asarray(rep.point) / rho
    assert rep.mean_curvature @ center_dir == pytest.approx(1.0 / rho, rel=1e-10)


def test_sphere_area_element_frozen_value():
    chart = graph_chart_at(ManifoldDescriptor.sphere(2, 1.0), SOUTH, 0.8)
    val = area_element(chart, np.array([[0.5, 0.0]]))[0]
    assert val == pytest.approx(oracles.SPHERE_AREA_AT_HALF, rel=1e-12)


def test_polynomial_graph_saddle():
    m = ManifoldDescriptor.polynomial_graph(2, 3, [[(1.0, (2, 0)), (-1.0, (0, 2))]])
    chart = graph_chart_at(m, [0.0, 0.0, 0.0], 0.3)
    sff = second_fundamental_form(chart)
    assert np.allclose(sff[0], np.diag([2.0, -2.0]), atol=1e-10)
    assert np.linalg.norm(mean_curvature_vector(chart)) < 1e-10


def test_polynomial_graph_off_origin_roundtrip():
    m = ManifoldDescriptor.polynomial_graph(2, 3, [[(0.5, (2, 0)), (-0.3, (1, 1))]])
    v = np.array([0.2, -0.1])
    z = np.array([v[0], v[1], 0.5 * v[0] ** 2 - 0.3 * v[0] * v[1]])
    chart = graph_chart_at(m, z, 0.2)
    u = 0.05 * np.array([[1.0, 0.0], [0.0, 1.0], [-0.6, 0.8]])
    x = chart.to_ambient(u)
    # every image point stays on the graph
    for p in x:
        assert m.implicit_residual(p) < 1e-10
    back = chart.to_chart_frame(x)
    assert np.allclose(back[:, :2], u, atol=1e-10)


def test_cone_smooth_point_curvature():
    a = 2.0
    chart = graph_chart_at(ManifoldDescriptor.kp_cone(), oracles.cone_point(a), 0.5)
    H = mean_curvature_vector(chart)
    assert np.linalg.norm(H) == pytest.approx(
        oracles.cone_mean_curvature_norm(a), rel=1e-10
    )
    # H is orthogonal to the tangent space
    assert np.allclose(chart.tangent_basis().T @ H, 0.0, atol=1e-12)


@pytest.mark.parametrize(
    "m,z",
    [
        (ManifoldDescriptor.sphere(2, 1.0), SOUTH),
        (ManifoldDescriptor.kp_cone(), oracles.cone_point(2.0)),
        (ManifoldDescriptor.polynomial_graph(2, 3, [[(1.0, (2, 0)), (0.5, (1, 1))]]),
         [0.0, 0.0, 0.0]),
    ],
)
def test_finite_difference_cross_check(m, z):
    chart = graph_chart_at(m, z, 0.25)
    exact = mean_curvature_vector(chart)
    fd = mean_curvature_fd(chart)
    assert np.linalg.norm(exact - fd) < 1e-6


def test_cone_vertex_is_singular():
    m = ManifoldDescriptor.kp_cone()
    assert m.is_singular(np.zeros(4))
    with pytest.raises(SingularPoint):
        graph_chart_at(m, np.zeros(4), 0.25)


def test_off_manifold_point_rejected():
    with pytest.raises(PointOffManifold):
        graph_chart_at(ManifoldDescriptor.sphere(2, 1.0), [0.0, 0.0, -1.1], 0.25)


def test_cone_chart_radius_clamped_near_vertex():
    # charts near the vertex shrink so they stay clear of the singularity
    m = ManifoldDescriptor.kp_cone()
    chart = graph_chart_at(m, oracles.cone_point(0.1), 0.5)
    assert chart.domain_radius < 0.5
    assert chart.domain_radius <= 0.45 * np.linalg.norm(oracles.cone_point(0.1))


def test_support_points_near_stay_on_support():
    m = ManifoldDescriptor.sphere(2, 1.0)
    pts = support_points_near(m, SOUTH, [0.05, 0.1], count_per_scale=3)
    assert len(pts) == 6
    for p in pts:
        assert m.implicit_residual(p) < 1e-10


def test_distance_to_support():
    m = ManifoldDescriptor.sphere(2, 1.0)
    assert m.distance_to_support(np.array([0.0, 0.0, -2.0])) == pytest.approx(1.0)
    cone = ManifoldDescriptor.kp_cone()
    assert cone.distance_to_support(np.zeros(4)) == 0.0


@settings(max_examples=25, deadline=None)
@given(
    st.floats(-0.6, 0.6),
    st.floats(-0.6, 0.6),
)
def test_sphere_chart_images_lie_on_sphere(u1, u2):
    u = np.array([u1, u2])
    if np.linalg.norm(u) > 0.8:
        u = 0.8 * u / np.linalg.norm(u)
    chart = graph_chart_at(ManifoldDescriptor.sphere(2, 1.0), SOUTH, 0.85)
    x = chart.to_ambient(u[None])[0]
    assert abs(np.linalg.norm(x) - 1.0) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.floats(0.5, 3.0), st.floats(0.0, 2 * np.pi))
def test_cone_mean_curvature_scales_inversely(a, angle):
    direction = (np.cos(angle), np.sin(angle), 0.0)
    z = oracles.cone_point(a, direction)
    chart = graph_chart_at(ManifoldDescriptor.kp_cone(), z, 0.4 * a)
    assert np.linalg.norm(mean_curvature_vector(chart)) == pytest.approx(
        oracles.cone_mean_curvature_norm(a), rel=1e-9
    )
