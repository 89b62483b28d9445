"""Ball moments: mass, second moments, the vectors b / b-tilde, forms Q / Q-tilde.

All moment integrands are evaluated in ambient coordinates; the chart pullback
is quadrature's business.  The normalized vector b is obtained from its plain
integral b-tilde through the exact scalar relation
b-tilde = (2 w_k r^(k+2) / (k+2)) b, never by a second quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import MeasureSpec
from .quadrature import DEFAULT_REL_TOL, BallRegion, QuadratureResult, integrate_over_ball


def unit_ball_volume(k: int) -> float:
    """Volume w_k of the unit ball in R^k: pi^(k/2) / Gamma(k/2 + 1)."""
    if k < 0 or int(k) != k:
        raise ValueError("k must be a nonnegative integer")
    return math.pi ** (k / 2) / math.gamma(k / 2 + 1)


@dataclass(frozen=True)
class MomentSet:
    """All degree-<=2 ball moments at one (center, radius)."""

    region: BallRegion
    mass: float
    second_moment: float  # ∫ |y-z|^2 dmu
    b: np.ndarray
    b_tilde: np.ndarray
    coord_second: np.ndarray  # ∫ (y-z)_j^2 dmu per ambient coordinate
    errors: dict
    evaluations: int
    converged: bool


@dataclass(frozen=True)
class QFormResult:
    """Second-moment quadratic form as a full symmetric ambient matrix."""

    region: BallRegion
    matrix: np.ndarray
    matrix_error: np.ndarray
    normalized: bool  # True: Q with the (k+2)/(w_k r^(k+2)) prefactor
    evaluations: int
    converged: bool

    def evaluate(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.matrix @ x)


def _btilde_factor(k: int, r: float) -> float:
    return 2.0 * unit_ball_volume(k) * r ** (k + 2) / (k + 2)


def moment_set(
    mu: MeasureSpec, region: BallRegion, rel_tol: float = DEFAULT_REL_TOL
) -> MomentSet:
    """Mass, second moment, b-tilde/b, and per-coordinate second moments.

    One vectorized cubature pass computes every field, so all entries share a
    consistent adaptive subdivision.
    """
    z, r = region.center, region.radius
    n1 = mu.manifold.n_plus_1

    def integrand(pts):
        d = pts - z
        d2 = np.sum(d * d, axis=1)
        w = (r * r - d2)[:, None] * d
        return np.concatenate(
            [np.ones((len(pts), 1)), d2[:, None], d * d, w], axis=1
        )

    res: QuadratureResult = integrate_over_ball(
        mu.manifold, region, integrand, rel_tol=rel_tol
    )
    vals = mu.c * np.asarray(res.value)
    errs = mu.c * np.asarray(res.error_estimate)
    mass, second = float(vals[0]), float(vals[1])
    coord_second = vals[2 : 2 + n1]
    b_tilde = vals[2 + n1 :]
    factor = _btilde_factor(mu.k, r)
    return MomentSet(
        region=region,
        mass=mass,
        second_moment=second,
        b=b_tilde / factor,
        b_tilde=b_tilde,
        coord_second=coord_second,
        errors={
            "mass": float(errs[0]),
            "second_moment": float(errs[1]),
            "coord_second": errs[2 : 2 + n1],
            "b_tilde": errs[2 + n1 :],
            "b": errs[2 + n1 :] / factor,
        },
        evaluations=res.evaluations,
        converged=res.converged,
    )


def q_form(
    mu: MeasureSpec,
    region: BallRegion,
    rel_tol: float = DEFAULT_REL_TOL,
    normalized: bool = True,
) -> QFormResult:
    """Matrix of ∫ (y-z)_i (y-z)_j dmu, optionally with the Q normalization."""
    z, r = region.center, region.radius
    n1 = mu.manifold.n_plus_1
    iu = np.triu_indices(n1)

    def integrand(pts):
        d = pts - z
        return d[:, iu[0]] * d[:, iu[1]]

    res = integrate_over_ball(mu.manifold, region, integrand, rel_tol=rel_tol)
    mat = np.zeros((n1, n1))
    err = np.zeros((n1, n1))
    mat[iu] = mu.c * np.asarray(res.value)
    err[iu] = mu.c * np.asarray(res.error_estimate)
    mat = mat + mat.T - np.diag(np.diag(mat))
    err = err + err.T - np.diag(np.diag(err))
    if normalized:
        pref = (mu.k + 2) / (unit_ball_volume(mu.k) * r ** (mu.k + 2))
        mat, err = pref * mat, pref * err
    return QFormResult(
        region=region,
        matrix=mat,
        matrix_error=err,
        normalized=normalized,
        evaluations=res.evaluations,
        converged=res.converged,
    )
