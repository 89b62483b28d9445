"""Manifold catalog, tangent-aligned graph charts, and curvature.

Every chart produced here is re-centered and tangent-aligned: the chart map
is  u |-> origin + rotation @ (u, phi(u))  with phi(0) = 0 and grad phi(0) = 0.
The first k columns of ``rotation`` span the tangent space at the origin, the
remaining columns the normal space.  With that normalization the mean
curvature vector at the base point is simply (1/k) (0, laplacian phi(0)) in
chart coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    ChartRadiusUnavailable,
    OutOfDomain,
    PointOffManifold,
    SingularPoint,
)

SQRT2 = math.sqrt(2.0)

# Chart jets map u of shape (..., k) to
#   phi  (..., m)        graph values, m = n+1-k
#   grad (..., m, k)     d phi_a / d u_i
#   hess (..., m, k, k)  d^2 phi_a / d u_i d u_j
Jet = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class GraphChart:
    """Local tangent-aligned graph parametrization of a k-manifold."""

    k: int
    n_plus_1: int
    domain_radius: float
    jet: Jet
    origin: np.ndarray
    rotation: np.ndarray  # (n+1, n+1); columns [tangent | normal]

    @property
    def codim(self) -> int:
        return self.n_plus_1 - self.k

    def tangent_basis(self) -> np.ndarray:
        return self.rotation[:, : self.k]

    def normal_basis(self) -> np.ndarray:
        return self.rotation[:, self.k :]

    def to_ambient(self, u: np.ndarray) -> np.ndarray:
        """Map chart points (..., k) to ambient points (..., n+1)."""
        u = np.asarray(u, dtype=float)
        phi, _, _ = self.jet(u)
        local = np.concatenate([u, phi], axis=-1)
        return self.origin + local @ self.rotation.T

    def to_chart_frame(self, x: np.ndarray) -> np.ndarray:
        """Express ambient points in the chart frame centered at the origin."""
        return (np.asarray(x, dtype=float) - self.origin) @ self.rotation


@dataclass(frozen=True)
class ManifoldDescriptor:
    """One of the catalogued supports: plane, sphere, KP cone, polynomial graph.

    ``coefficients`` (polynomial graphs only) holds, per normal component, a
    tuple of (coefficient, exponent-tuple) monomial terms in the k graph
    variables.
    """

    kind: str
    k: int
    n_plus_1: int
    rho: float = 0.0
    coefficients: tuple = ()
    label: str = ""

    def __post_init__(self):
        if self.k < 1 or self.n_plus_1 <= self.k:
            raise ValueError("need 1 <= k < n+1")
        if self.kind == "sphere":
            if self.rho <= 0:
                raise ValueError("sphere radius must be positive")
            if self.n_plus_1 != self.k + 1:
                raise ValueError("spheres are codimension 1")
        if self.kind == "kp_cone" and (self.k, self.n_plus_1) != (3, 4):
            raise ValueError("the KP cone lives in R^4 with k=3")

    # -- constructors -------------------------------------------------------

    @classmethod
    def plane(cls, k: int, n_plus_1: int) -> "ManifoldDescriptor":
        return cls("plane", k, n_plus_1, label=f"plane(k={k},n+1={n_plus_1})")

    @classmethod
    def sphere(cls, k: int, rho: float) -> "ManifoldDescriptor":
        return cls("sphere", k, k + 1, rho=float(rho), label=f"sphere(k={k},rho={rho})")

    @classmethod
    def kp_cone(cls) -> "ManifoldDescriptor":
        return cls("kp_cone", 3, 4, label="kp_cone")

    @classmethod
    def polynomial_graph(cls, k: int, n_plus_1: int, coefficients) -> "ManifoldDescriptor":
        coeffs = tuple(
            tuple((float(c), tuple(int(e) for e in expo)) for c, expo in comp)
            for comp in coefficients
        )
        if len(coeffs) != n_plus_1 - k:
            raise ValueError("one coefficient set per normal component expected")
        return cls("polynomial_graph", k, n_plus_1, coefficients=coeffs,
                   label=f"polynomial_graph(k={k},n+1={n_plus_1})")

    # -- support geometry ----------------------------------------------------

    @property
    def singular_points(self) -> tuple:
        if self.kind == "kp_cone":
            return (np.zeros(4),)
        return ()

    def is_singular(self, x: np.ndarray, tol: float = 1e-10) -> bool:
        return any(np.linalg.norm(np.asarray(x) - s) <= tol for s in self.singular_points)

    def implicit_residual(self, x: np.ndarray) -> float:
        """Distance-like residual of x to the support (0 on the manifold)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "plane":
            return float(np.linalg.norm(x[self.k :]))
        if self.kind == "sphere":
            return abs(float(np.linalg.norm(x)) - self.rho)
        if self.kind == "kp_cone":
            return abs(float(np.linalg.norm(x[:3])) - abs(float(x[3])))
        # polynomial graph: vertical residual
        vals = _poly_value(self.coefficients, x[None, : self.k])[0]
        return float(np.linalg.norm(x[self.k :] - vals))

    def distance_to_support(self, x: np.ndarray) -> float:
        """Exact Euclidean distance for plane/sphere/cone; residual bound otherwise."""
        x = np.asarray(x, dtype=float)
        if self.kind == "plane":
            return float(np.linalg.norm(x[self.k :]))
        if self.kind == "sphere":
            return abs(float(np.linalg.norm(x)) - self.rho)
        if self.kind == "kp_cone":
            # In the (|x'|, x4) half-plane each nappe is the ray x4 = ±|x'|.
            rp, x4 = float(np.linalg.norm(x[:3])), float(x[3])
            d = math.hypot(rp, x4)
            best = d  # vertex
            for sg in (1.0, -1.0):
                t = (rp + sg * x4) / 2.0  # projection parameter onto the ray
                if t > 0:
                    best = min(best, abs(sg * x4 - rp) / SQRT2)
            return best
        return self.implicit_residual(x)

    def default_centers(self) -> list[np.ndarray]:
        """Representative support points used by default grids."""
        k, n1 = self.k, self.n_plus_1
        if self.kind == "plane":
            pts = [np.zeros(n1), np.zeros(n1), np.zeros(n1)]
            pts[1][0] = 0.3
            if k >= 2:
                pts[1][1] = -0.2
            pts[2][0] = 1.0
            if k >= 2:
                pts[2][1] = 2.0
            return pts
        if self.kind == "sphere":
            south = np.zeros(n1)
            south[-1] = -self.rho
            east = np.zeros(n1)
            east[0] = self.rho
            diag = np.full(n1, self.rho / math.sqrt(n1))
            return [south, east, diag]
        if self.kind == "kp_cone":
            vertex = np.zeros(4)
            a = np.array([2.0, 0.0, 0.0, 2.0])
            b = np.array([0.0, 1.7, 1.7, -1.7 * SQRT2])
            return [vertex, a, b]
        # polynomial graph: origin if it lies on the graph
        origin = np.zeros(n1)
        if self.implicit_residual(origin) < 1e-12:
            return [origin]
        v = np.zeros(k)
        vals = _poly_value(self.coefficients, v[None])[0]
        return [np.concatenate([v, vals])]

    def dilate(self, lam: float) -> "ManifoldDescriptor":
        """Image of the support under x |-> lam * x."""
        if self.kind in ("plane", "kp_cone"):
            return self
        if self.kind == "sphere":
            return ManifoldDescriptor.sphere(self.k, lam * self.rho)
        coeffs = tuple(
            tuple((c * lam ** (1 - sum(e)), e) for c, e in comp)
            for comp in self.coefficients
        )
        return ManifoldDescriptor.polynomial_graph(self.k, self.n_plus_1, coeffs)


@dataclass(frozen=True)
class CurvatureReport:
    point: np.ndarray
    mean_curvature: np.ndarray
    sff_eigenvalues: tuple  # one eigenvalue array per normal direction
    norm_H: float


# ---------------------------------------------------------------------------
# frame helpers
# ---------------------------------------------------------------------------


def _complete_frame(tangent: np.ndarray) -> np.ndarray:
    """Orthonormal (n+1)x(n+1) matrix whose first columns span ``tangent``."""
    n1, k = tangent.shape
    q, r = np.linalg.qr(np.column_stack([tangent, np.eye(n1)]))
    frame = q[:, :n1].copy()
    # keep the tangent columns pointing along the supplied basis
    for j in range(k):
        if r[j, j] < 0:
            frame[:, j] = -frame[:, j]
    if np.linalg.det(frame) < 0:
        frame[:, -1] = -frame[:, -1]
    return frame


def _orthonormal_complement(v: np.ndarray) -> np.ndarray:
    """Columns spanning the complement of the unit vector v."""
    frame = _complete_frame(v[:, None])
    return frame[:, 1:]


# ---------------------------------------------------------------------------
# closed-form jets
# ---------------------------------------------------------------------------


def _zero_jet(m: int):
    def jet(u):
        u = np.asarray(u, dtype=float)
        k = u.shape[-1]
        base = u.shape[:-1]
        return (
            np.zeros(base + (m,)),
            np.zeros(base + (m, k)),
            np.zeros(base + (m, k, k)),
        )

    return jet


def _sphere_jet(rho: float):
    """Graph of the cap, normal axis pointing from base point to the center."""

    def jet(u):
        u = np.asarray(u, dtype=float)
        k = u.shape[-1]
        r2 = np.sum(u * u, axis=-1)
        w = np.sqrt(rho * rho - r2)
        phi = (rho - w)[..., None]
        grad = (u / w[..., None])[..., None, :]
        eye = np.eye(k)
        hess = eye / w[..., None, None] + (
            u[..., :, None] * u[..., None, :] / (w**3)[..., None, None]
        )
        return phi, grad, hess[..., None, :, :]

    return jet


def _cone_jet(s: float):
    """KP-cone nappe as a tangent-aligned graph at arc parameter s = |z'|.

    In the chart basis (t1 along the ray, t2/t3 sphere-tangential, n normal)
    the nappe is exactly psi(u) = -(u2^2 + u3^2) / (2 sqrt(2) p), p = s + u1/sqrt(2).
    """

    def jet(u):
        u = np.asarray(u, dtype=float)
        base = u.shape[:-1]
        p = s + u[..., 0] / SQRT2
        q = u[..., 1] ** 2 + u[..., 2] ** 2
        phi = (-q / (2 * SQRT2 * p))[..., None]
        grad = np.empty(base + (1, 3))
        grad[..., 0, 0] = q / (4 * p * p)
        grad[..., 0, 1] = -u[..., 1] / (SQRT2 * p)
        grad[..., 0, 2] = -u[..., 2] / (SQRT2 * p)
        hess = np.zeros(base + (1, 3, 3))
        hess[..., 0, 0, 0] = -q / (2 * SQRT2 * p**3)
        hess[..., 0, 0, 1] = hess[..., 0, 1, 0] = u[..., 1] / (2 * p * p)
        hess[..., 0, 0, 2] = hess[..., 0, 2, 0] = u[..., 2] / (2 * p * p)
        hess[..., 0, 1, 1] = -1.0 / (SQRT2 * p)
        hess[..., 0, 2, 2] = -1.0 / (SQRT2 * p)
        return phi, grad, hess

    return jet


# ---------------------------------------------------------------------------
# polynomial graphs: evaluation and tangent-aligned reparametrization
# ---------------------------------------------------------------------------


def _poly_value(coeffs, v: np.ndarray) -> np.ndarray:
    n, k = v.shape
    out = np.zeros((n, len(coeffs)))
    for m, comp in enumerate(coeffs):
        for c, expo in comp:
            term = np.full(n, c)
            for i, e in enumerate(expo):
                if e:
                    term = term * v[:, i] ** e
            out[:, m] += term
    return out


def _poly_grad(coeffs, v: np.ndarray) -> np.ndarray:
    n, k = v.shape
    out = np.zeros((n, len(coeffs), k))
    for m, comp in enumerate(coeffs):
        for c, expo in comp:
            for i, e in enumerate(expo):
                if e == 0:
                    continue
                term = np.full(n, c * e)
                for j, ej in enumerate(expo):
                    p = ej - 1 if j == i else ej
                    if p:
                        term = term * v[:, j] ** p
                out[:, m, i] += term
    return out


def _poly_hess(coeffs, v: np.ndarray) -> np.ndarray:
    n, k = v.shape
    out = np.zeros((n, len(coeffs), k, k))
    for m, comp in enumerate(coeffs):
        for c, expo in comp:
            for i, ei in enumerate(expo):
                if ei == 0:
                    continue
                for j, ej in enumerate(expo):
                    fac = c * ei * (ei - 1) if i == j else c * ei * ej
                    if fac == 0:
                        continue
                    term = np.full(n, float(fac))
                    for l, el in enumerate(expo):
                        p = el - (2 if (l == i and i == j) else (1 if l in (i, j) else 0))
                        if p:
                            term = term * v[:, l] ** p
                    out[:, m, i, j] += term
    return out


def _aligned_poly_jet(coeffs, v0: np.ndarray, frame: np.ndarray, z: np.ndarray, k: int):
    """Tangent-aligned jet of a polynomial graph at base parameter v0.

    Solves the reparametrization v(u) with T^t (X(v) - z) = u by Newton, then
    yields phi and its first two derivatives by implicit differentiation.
    """
    T = frame[:, :k]
    N = frame[:, k:]
    T_top, T_bot = T[:k, :], T[k:, :]
    N_top, N_bot = N[:k, :], N[k:, :]

    def jet(u):
        u = np.asarray(u, dtype=float)
        base = u.shape[:-1]
        uf = u.reshape(-1, k)
        n = uf.shape[0]
        v = v0 + uf @ T_top.T
        for _ in range(60):
            gval = _poly_value(coeffs, v)
            x = np.concatenate([v, gval], axis=1) - z
            F = x @ T - uf
            G = _poly_grad(coeffs, v)  # (n, m, k)
            J = T_top.T[None] + np.einsum("mb,nmk->nbk", T_bot, G)
            step = np.linalg.solve(J, F[..., None])[..., 0]
            v = v - step
            if np.max(np.abs(F)) < 1e-14:
                break
        gval = _poly_value(coeffs, v)
        G = _poly_grad(coeffs, v)
        H = _poly_hess(coeffs, v)
        x = np.concatenate([v, gval], axis=1) - z
        phi = x @ N
        J = T_top.T[None] + np.einsum("mb,nmk->nbk", T_bot, G)
        v_u = np.linalg.inv(J)
        A = N_top.T[None] + np.einsum("mb,nmk->nbk", N_bot, G)  # (n, m', k)
        grad = np.einsum("nmi,nia->nma", A, v_u)
        # second derivatives: chain rule through v(u)
        PT = np.einsum("mb,nmij->nbij", T_bot, H)  # T^t X_vv (n,k,k,k)
        PN = np.einsum("mb,nmij->nbij", N_bot, H)  # N^t X_vv (n,m',k,k)
        rhs = np.einsum("nbij,nia,njc->nbac", PT, v_u, v_u)
        v_uu = -np.einsum("nib,nbac->niac", v_u, rhs)
        hess = np.einsum("nbij,nia,njc->nbac", PN, v_u, v_u) + np.einsum(
            "nbi,niac->nbac", A, v_uu
        )
        m = phi.shape[1]
        return (
            phi.reshape(base + (m,)),
            grad.reshape(base + (m, k)),
            hess.reshape(base + (m, k, k)),
        )

    return jet


# ---------------------------------------------------------------------------
# chart construction
# ---------------------------------------------------------------------------

SPHERE_SAFE_FACTOR = 0.9
CONE_SAFE_FACTOR = 0.45


def graph_chart_at(m: ManifoldDescriptor, z, want_radius: float) -> GraphChart:
    """Tangent-aligned chart at a non-singular support point z."""
    z = np.asarray(z, dtype=float)
    if z.shape != (m.n_plus_1,):
        raise ValueError(f"expected an ambient point of dimension {m.n_plus_1}")
    if m.implicit_residual(z) > 1e-10:
        raise PointOffManifold(f"point {z.tolist()} not on {m.label}")
    if m.is_singular(z):
        raise SingularPoint(f"{m.label} is not C^2 at {z.tolist()}")
    if want_radius <= 0:
        raise ValueError("want_radius must be positive")

    k, n1 = m.k, m.n_plus_1
    if m.kind == "plane":
        chart = GraphChart(k, n1, float(want_radius), _zero_jet(n1 - k), z, np.eye(n1))
    elif m.kind == "sphere":
        inward = -z / m.rho
        tangent = _orthonormal_complement(inward)
        rotation = np.column_stack([tangent, inward])
        if np.linalg.det(rotation) < 0:
            rotation[:, 0] = -rotation[:, 0]  # radial jet is even in u
        radius = min(want_radius, SPHERE_SAFE_FACTOR * m.rho)
        chart = GraphChart(k, n1, radius, _sphere_jet(m.rho), z, rotation)
    elif m.kind == "kp_cone":
        s = float(np.linalg.norm(z[:3]))
        sg = 1.0 if z[3] > 0 else -1.0
        omega = z[:3] / s
        t1 = np.concatenate([omega, [sg]]) / SQRT2
        tang_sphere = _orthonormal_complement(omega)  # 3x2
        t2 = np.concatenate([tang_sphere[:, 0], [0.0]])
        t3 = np.concatenate([tang_sphere[:, 1], [0.0]])
        normal = np.concatenate([omega, [-sg]]) / SQRT2
        rotation = np.column_stack([t1, t2, t3, normal])
        if np.linalg.det(rotation) < 0:
            rotation[:, 1] = -rotation[:, 1]  # jet is even in u2
        radius = min(want_radius, CONE_SAFE_FACTOR * float(np.linalg.norm(z)))
        chart = GraphChart(k, n1, radius, _cone_jet(s), z, rotation)
    elif m.kind == "polynomial_graph":
        v0 = z[:k]
        G0 = _poly_grad(m.coefficients, v0[None])[0]  # (m', k)
        cols = np.vstack([np.eye(k), G0])  # tangent directions (n+1, k)
        frame = _complete_frame(cols)
        jet = _aligned_poly_jet(m.coefficients, v0, frame, z, k)
        chart = GraphChart(k, n1, float(want_radius), jet, z, frame)
    else:
        raise ValueError(f"unknown manifold kind {m.kind!r}")

    _check_chart(chart)
    return chart


def _check_chart(chart: GraphChart) -> None:
    u0 = np.zeros(chart.k)
    phi, grad, hess = chart.jet(u0)
    if np.max(np.abs(phi)) > 1e-12 or np.max(np.abs(grad)) > 1e-12:
        raise ChartRadiusUnavailable("chart failed tangent alignment at its origin")
    if np.max(np.abs(hess - np.swapaxes(hess, -1, -2))) > 1e-10:
        raise ChartRadiusUnavailable("chart Hessian is not symmetric")


# ---------------------------------------------------------------------------
# chart operations
# ---------------------------------------------------------------------------


def area_element(chart: GraphChart, u) -> np.ndarray:
    """sqrt(det(I + grad(phi)^t grad(phi))) at chart points u."""
    u = np.asarray(u, dtype=float)
    if np.any(np.linalg.norm(np.atleast_2d(u), axis=-1) >= chart.domain_radius * (1 + 1e-12)):
        raise OutOfDomain("chart point outside domain_radius")
    _, grad, _ = chart.jet(u)
    gram = np.eye(chart.k) + np.einsum("...mi,...mj->...ij", grad, grad)
    det = np.linalg.det(gram)
    return np.sqrt(det)


def second_fundamental_form(chart: GraphChart) -> np.ndarray:
    """Per-normal-direction Hessians of phi at the chart origin, shape (m, k, k)."""
    _, _, hess = chart.jet(np.zeros(chart.k))
    return hess


def mean_curvature_vector(chart: GraphChart) -> np.ndarray:
    """Ambient mean curvature vector at the chart origin: (1/k)(0, laplacian phi)."""
    hess = second_fundamental_form(chart)
    traces = np.trace(hess, axis1=-2, axis2=-1)
    local = np.concatenate([np.zeros(chart.k), traces / chart.k])
    return chart.rotation @ local


def mean_curvature_fd(chart: GraphChart, h: float = 1e-5) -> np.ndarray:
    """Mean curvature via the general trace formula, differenced numerically.

    Builds the unnormalized-then-normalized tangent fields t_i(u) from the
    chart's gradient, differences them centrally at the origin, contracts
    with the inverse first fundamental form and projects onto the normal
    space.  Independent of the Hessian returned by the jet.
    """
    k, n1 = chart.k, chart.n_plus_1

    def tangents(u):
        _, grad, _ = chart.jet(u)
        t = np.zeros((k, n1))
        for i in range(k):
            vec = np.zeros(n1)
            vec[i] = 1.0
            vec[k:] = grad[:, i]
            t[i] = vec / math.sqrt(1.0 + float(grad[:, i] @ grad[:, i]))
        return t

    t0 = tangents(np.zeros(k))
    gram = t0 @ t0.T
    ginv = np.linalg.inv(gram)
    dt = np.zeros((k, k, n1))  # dt[j, i] = d t_i / d u_j at 0
    for j in range(k):
        up = np.zeros(k)
        up[j] = h
        dt[j] = (tangents(up) - tangents(-up)) / (2 * h)
    H_local = np.zeros(n1)
    for i in range(k):
        for j in range(k):
            proj = dt[j, i].copy()
            proj[:k] = 0.0  # normal space at the aligned origin is span(e_{k+1}..)
            H_local += ginv[i, j] * proj
    return chart.rotation @ H_local / k


def curvature_report(m: ManifoldDescriptor, z, want_radius: float = 0.25) -> CurvatureReport:
    chart = graph_chart_at(m, z, want_radius)
    H = mean_curvature_vector(chart)
    sff = second_fundamental_form(chart)
    eigs = tuple(np.linalg.eigvalsh(sff[j]) for j in range(sff.shape[0]))
    return CurvatureReport(
        point=np.asarray(z, dtype=float),
        mean_curvature=H,
        sff_eigenvalues=eigs,
        norm_H=float(np.linalg.norm(H)),
    )


def support_points_near(m: ManifoldDescriptor, z, scales, count_per_scale: int = 4,
                        seed: int = 0) -> list[np.ndarray]:
    """Support points at given chart radii around z (for Taylor-bound probes)."""
    chart = graph_chart_at(m, z, max(scales) * 1.5)
    rng = np.random.default_rng(seed)
    pts = []
    for s in scales:
        for _ in range(count_per_scale):
            w = rng.standard_normal(m.k)
            w /= np.linalg.norm(w)
            pts.append(chart.to_ambient(s * w))
    return pts
