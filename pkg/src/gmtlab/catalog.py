"""Builtin surface measures, ball-mass profiles, and the rescaling transform."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._parallel import parallel_map
from .errors import UnknownLabel
from .geometry import ManifoldDescriptor
from .quadrature import DEFAULT_REL_TOL, BallRegion, integrate_over_ball

DEFAULT_PROFILE_RADII = tuple(2.0**-m for m in range(1, 11))


@dataclass(frozen=True)
class MeasureSpec:
    """A surface measure mu = c * H^k restricted to the manifold."""

    manifold: ManifoldDescriptor
    k: int
    c: float
    label: str

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("density multiplier c must be positive")
        if self.k != self.manifold.k:
            raise ValueError("measure dimension must match the manifold")

    def with_density(self, c: float) -> "MeasureSpec":
        return replace(self, c=float(c), label=f"{self.label}*c={c}")


@dataclass(frozen=True)
class RadialMassProfile:
    """Ball masses g(r) = mu(B(p, r)) on an increasing radius grid."""

    center: np.ndarray
    samples: tuple  # of (r, mass, error)

    def __post_init__(self):
        radii = [s[0] for s in self.samples]
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("profile radii must be strictly increasing")
        if any(r > 1.0 for r in radii):
            raise ValueError("profile radii must not exceed 1")


def builtin(label: str, **params) -> MeasureSpec:
    """Catalogued measures: plane, sphere, s3_in_r4, kp_cone (all with c = 1)."""
    if label == "plane":
        k = int(params.pop("k", 2))
        n1 = int(params.pop("n_plus_1", k + 1))
        m = ManifoldDescriptor.plane(k, n1)
    elif label == "sphere":
        k = int(params.pop("k", 2))
        rho = float(params.pop("rho", 1.0))
        m = ManifoldDescriptor.sphere(k, rho)
    elif label == "s3_in_r4":
        m = ManifoldDescriptor.sphere(3, float(params.pop("rho", 1.0)))
    elif label == "kp_cone":
        m = ManifoldDescriptor.kp_cone()
    else:
        raise UnknownLabel(f"no builtin measure {label!r}")
    if params:
        raise UnknownLabel(f"unexpected parameters for {label!r}: {sorted(params)}")
    return MeasureSpec(manifold=m, k=m.k, c=1.0, label=m.label)


def ball_mass(mu: MeasureSpec, region: BallRegion, rel_tol: float = DEFAULT_REL_TOL):
    """mu(B(z, r)) with its quadrature error estimate."""
    res = integrate_over_ball(
        mu.manifold, region, lambda pts: np.ones(len(pts)), rel_tol=rel_tol
    )
    return mu.c * res.value, mu.c * res.error_estimate, res


def radial_profile(
    mu: MeasureSpec,
    p,
    radii=DEFAULT_PROFILE_RADII,
    rel_tol: float = DEFAULT_REL_TOL,
) -> RadialMassProfile:
    """Sample g(r) = mu(B(p, r)) at the given radii (parallel over radii)."""
    p = np.asarray(p, dtype=float)
    radii = sorted(float(r) for r in radii)

    def one(r):
        mass, err, _ = ball_mass(mu, BallRegion(p, r), rel_tol=rel_tol)
        return (r, mass, err)

    return RadialMassProfile(center=p, samples=tuple(parallel_map(one, radii)))


def rescale(mu: MeasureSpec, r0: float, c_est: float) -> MeasureSpec:
    """The blow-up transform: dilate the support by 4/r0, divide density by c_est.

    If mu(B(x, r)) = c_est * w_k * r^k held for r <= r0/4 on the support, the
    returned measure is locally k-uniform (unit density, radii up to 1).
    """
    if r0 <= 0 or c_est <= 0:
        raise ValueError("r0 and c_est must be positive")
    lam = 4.0 / r0
    manifold = mu.manifold.dilate(lam)
    return MeasureSpec(
        manifold=manifold,
        k=mu.k,
        c=mu.c / c_est,
        label=f"rescale({mu.label},r0={r0},c={c_est})",
    )


def rescale_point(x, r0: float) -> np.ndarray:
    """Image of a support point under the rescale dilation."""
    return np.asarray(x, dtype=float) * (4.0 / r0)
