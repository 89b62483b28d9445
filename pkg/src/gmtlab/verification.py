"""Identity residual suites and the unique-continuation probes.

Everything here reduces to ball masses and degree-<=2 moments computed by the
quadrature layer, compared against the closed relations that locally uniform
measures must satisfy: the elementary second-moment identity, the key
equality linking b-tilde to the chart Laplacian, the per-direction quadratic
identity, orthogonality of b to the tangent plane, and the flatness
propagation probes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._parallel import parallel_map
from .catalog import (
    DEFAULT_PROFILE_RADII,
    MeasureSpec,
    RadialMassProfile,
    ball_mass,
    radial_profile,
    rescale,
    rescale_point,
)
from .errors import NonConvergent
from .geometry import graph_chart_at, mean_curvature_vector, second_fundamental_form
from .moments import moment_set, q_form, unit_ball_volume
from .quadrature import DEFAULT_REL_TOL, BallRegion

IDENTITY_RADII = (0.1, 0.25, 0.4)


# ---------------------------------------------------------------------------
# uniformity of ball masses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniformityEntry:
    center: np.ndarray
    radius: float
    mass: float
    error: float
    deviation: float
    deviation_error: float
    converged: bool


@dataclass(frozen=True)
class UniformityReport:
    measure_label: str
    entries: tuple
    max_abs_deviation: float
    verdict: str  # locally_uniform | not_uniform | inconclusive


def check_local_uniform(
    mu: MeasureSpec,
    centers,
    radii,
    tol: float = 1e-6,
    rel_tol: float = DEFAULT_REL_TOL,
) -> UniformityReport:
    """Deviations mu(B(x,r)) / (w_k r^k) - 1 over a (center, radius) grid."""
    wk = unit_ball_volume(mu.k)
    grid = [(np.asarray(c, dtype=float), float(r)) for c in centers for r in radii]
    if any(r <= 0 or r > 1 for _, r in grid):
        raise ValueError("uniformity radii must lie in (0, 1]")

    def one(cr):
        c, r = cr
        mass, err, res = ball_mass(mu, BallRegion(c, r), rel_tol=rel_tol)
        scale = wk * r**mu.k
        return UniformityEntry(
            center=c,
            radius=r,
            mass=mass,
            error=err,
            deviation=mass / scale - 1.0,
            deviation_error=err / scale,
            converged=res.converged,
        )

    entries = tuple(parallel_map(one, grid))
    max_dev = max(abs(e.deviation) for e in entries)
    if any(not e.converged for e in entries):
        verdict = "inconclusive"
    elif all(abs(e.deviation) <= tol + e.deviation_error for e in entries):
        verdict = "locally_uniform"
    else:
        verdict = "not_uniform"
    return UniformityReport(mu.label, entries, max_dev, verdict)


@dataclass(frozen=True)
class PairwiseEntry:
    radius: float
    masses: tuple
    errors: tuple
    max_pairwise: float
    within_tol: bool


@dataclass(frozen=True)
class DistributedReport:
    measure_label: str
    entries: tuple
    verdict: str  # uniformly_distributed | not_uniformly_distributed | inconclusive


def check_uniformly_distributed(
    mu: MeasureSpec,
    centers,
    radii,
    tol: float = 1e-6,
    rel_tol: float = DEFAULT_REL_TOL,
    per_center_measures=None,
) -> DistributedReport:
    """Pairwise equality of ball masses across centers at each radius.

    ``per_center_measures`` (one spec per center) lets a harness plant a
    defect, e.g. a doubled density at one center.
    """
    centers = [np.asarray(c, dtype=float) for c in centers]
    specs = per_center_measures or [mu] * len(centers)
    entries = []
    all_converged = True
    ok = True
    for r in radii:
        if not 0 < r <= 1:
            raise ValueError("radii must lie in (0, 1]")
        masses, errors = [], []
        for c, spec in zip(centers, specs):
            mass, err, res = ball_mass(spec, BallRegion(c, float(r)), rel_tol=rel_tol)
            all_converged = all_converged and res.converged
            masses.append(mass)
            errors.append(err)
        diffs = [
            abs(a - b) for i, a in enumerate(masses) for b in masses[i + 1 :]
        ]
        max_pair = max(diffs, default=0.0)
        scale = max(masses)
        within = max_pair <= tol * scale + 2 * max(errors)
        ok = ok and within
        entries.append(
            PairwiseEntry(float(r), tuple(masses), tuple(errors), max_pair, within)
        )
    if not all_converged:
        verdict = "inconclusive"
    else:
        verdict = "uniformly_distributed" if ok else "not_uniformly_distributed"
    return DistributedReport(mu.label, tuple(entries), verdict)


# ---------------------------------------------------------------------------
# density limits K and c
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityLimits:
    K_estimates: tuple  # (r, g/(g + w_k r^k))
    c_estimates: tuple  # (r, g/(w_k r^k))
    K: float
    c: float


def _richardson(samples, cauchy_tol):
    """Limit as r -> 0 assuming an even (O(r^2)) error on a shrinking grid."""
    pairs = sorted(samples)  # ascending r
    vals = [v for _, v in pairs]
    radii = [r for r, _ in pairs]
    if len(vals) < 2:
        raise NonConvergent("need at least two samples to extrapolate")
    extraps = []
    for i in range(len(vals) - 1):
        q = radii[i + 1] / radii[i]  # > 1
        extraps.append((q * q * vals[i] - vals[i + 1]) / (q * q - 1.0))
    # extrapolants from the smallest radii are the most converged
    if len(extraps) >= 2:
        a, b = extraps[0], extraps[1]
        if abs(a - b) > cauchy_tol * max(1.0, abs(a)):
            raise NonConvergent(
                f"extrapolants {b:.9g} -> {a:.9g} not Cauchy at {cauchy_tol}"
            )
    return extraps[0]


def density_limits(
    profile: RadialMassProfile, k: int, cauchy_tol: float = 1e-6
) -> DensityLimits:
    """Richardson-extrapolated density ratio limits from a radial mass profile."""
    radii = [s[0] for s in profile.samples]
    if len(radii) < 4 or max(radii) / min(radii) < 100.0:
        raise ValueError("profile must have >= 4 radii spanning >= 2 decades")
    wk = unit_ball_volume(k)
    c_est = tuple((r, g / (wk * r**k)) for r, g, _ in profile.samples)
    K_est = tuple((r, g / (g + wk * r**k)) for r, g, _ in profile.samples)
    c = _richardson(c_est, cauchy_tol)
    K = _richardson(K_est, cauchy_tol)
    return DensityLimits(K_estimates=K_est, c_estimates=c_est, K=K, c=c)


# ---------------------------------------------------------------------------
# identity residuals
# ---------------------------------------------------------------------------


def elementary_identity_residual(
    mu: MeasureSpec, z, r: float, rel_tol: float = DEFAULT_REL_TOL
):
    """|∫|y-z|^2 dmu - k w_k r^(k+2)/(k+2)| and its quadrature error."""
    ms = moment_set(mu, BallRegion(np.asarray(z, dtype=float), r), rel_tol=rel_tol)
    expected = mu.k * unit_ball_volume(mu.k) / (mu.k + 2) * r ** (mu.k + 2)
    return abs(ms.second_moment - expected), ms.errors["second_moment"], ms


@dataclass(frozen=True)
class KeyEqualityResult:
    lhs: float
    rhs: float
    residual: float
    error: float


def key_equality_residual(
    mu: MeasureSpec, z, r: float, rel_tol: float = DEFAULT_REL_TOL
) -> KeyEqualityResult:
    """Residual of (1/2) sum_j btilde^j laplacian(phi_j)(0) = sum_j ∫ y_j^2 dmu.

    Both sides live in the tangent-aligned chart frame at z; the right-hand
    side is the total normal second moment of the support ("height squared").
    """
    if not 0 < r < 0.5:
        raise ValueError("key equality requires 0 < r < 1/2")
    z = np.asarray(z, dtype=float)
    chart = graph_chart_at(mu.manifold, z, r)
    R = chart.rotation
    k = chart.k
    ms = moment_set(mu, BallRegion(z, r), rel_tol=rel_tol)
    hess = second_fundamental_form(chart)
    laplacians = np.trace(hess, axis1=-2, axis2=-1)
    b_tilde_chart = R.T @ ms.b_tilde
    lhs = 0.5 * float(b_tilde_chart[k:] @ laplacians)
    qf = q_form(mu, BallRegion(z, r), rel_tol=rel_tol, normalized=False)
    q_chart = R.T @ qf.matrix @ R
    rhs = float(np.trace(q_chart[k:, k:]))
    err = float(
        0.5 * np.abs(laplacians) @ (np.abs(R.T) @ ms.errors["b_tilde"])[k:]
        + np.trace((np.abs(R.T) @ qf.matrix_error @ np.abs(R))[k:, k:])
    )
    return KeyEqualityResult(lhs=lhs, rhs=rhs, residual=abs(lhs - rhs), error=err)


@dataclass(frozen=True)
class DirectionResidual:
    direction: np.ndarray  # unit vector in the chart tangent factor
    lhs: float
    rhs: float
    residual: float


@dataclass(frozen=True)
class Lemma32Report:
    entries: tuple
    max_residual: float
    error: float


def lemma32_residual(
    mu: MeasureSpec,
    z,
    r: float,
    directions=None,
    rel_tol: float = DEFAULT_REL_TOL,
    seed: int = 0,
) -> Lemma32Report:
    """Residuals of sum_j b^j <hess(phi_j)(0) e, e> = 1 - Q(e) per tangent e."""
    if not 0 < r < 0.5:
        raise ValueError("requires 0 < r < 1/2")
    z = np.asarray(z, dtype=float)
    chart = graph_chart_at(mu.manifold, z, r)
    k = chart.k
    R = chart.rotation
    if directions is None:
        rng = np.random.default_rng(seed)
        directions = [np.eye(k)[i] for i in range(k)]
        for _ in range(8):
            v = rng.standard_normal(k)
            directions.append(v / np.linalg.norm(v))
    ms = moment_set(mu, BallRegion(z, r), rel_tol=rel_tol)
    qf = q_form(mu, BallRegion(z, r), rel_tol=rel_tol, normalized=True)
    hess = second_fundamental_form(chart)
    b_chart = R.T @ ms.b
    q_chart = R.T @ qf.matrix @ R
    entries = []
    for e in directions:
        e = np.asarray(e, dtype=float)
        lhs = float(b_chart[k:] @ np.einsum("mij,i,j->m", hess, e, e))
        e_full = np.concatenate([e, np.zeros(chart.codim)])
        rhs = 1.0 - float(e_full @ q_chart @ e_full)
        entries.append(DirectionResidual(e, lhs, rhs, abs(lhs - rhs)))
    err = float(np.max(ms.errors["b"]) * np.max(np.abs(hess)) * k + np.max(qf.matrix_error) * 4)
    return Lemma32Report(tuple(entries), max(x.residual for x in entries), err)


@dataclass(frozen=True)
class OrthogonalityResult:
    b: np.ndarray
    tangential_norm: float
    normal_norm: float
    passed: bool


def orthogonality_check(
    mu: MeasureSpec, z, r: float, rel_tol: float = DEFAULT_REL_TOL, tol: float = 1e-7
) -> OrthogonalityResult:
    """Norm of the tangential part of b (zero for uniform measures)."""
    z = np.asarray(z, dtype=float)
    chart = graph_chart_at(mu.manifold, z, r)
    ms = moment_set(mu, BallRegion(z, r), rel_tol=rel_tol)
    b_chart = chart.rotation.T @ ms.b
    tangential = float(np.linalg.norm(b_chart[: chart.k]))
    normal = float(np.linalg.norm(b_chart[chart.k :]))
    b_norm = float(np.linalg.norm(ms.b))
    return OrthogonalityResult(
        b=ms.b,
        tangential_norm=tangential,
        normal_norm=normal,
        passed=tangential <= tol * (1.0 + b_norm),
    )


@dataclass(frozen=True)
class TaylorBoundReport:
    per_probe: tuple  # (|x-z|, ratio)
    per_scale_max: tuple  # (scale, max ratio)
    empirical_C: float
    stability: float  # relative spread of per-scale maxima
    verdict: str


def taylor_bound_check(
    mu: MeasureSpec,
    z,
    r: float,
    probe_points=None,
    rel_tol: float = DEFAULT_REL_TOL,
    stability_tol: float = 0.5,
    vanishing_tol: float = 1e-6,
) -> TaylorBoundReport:
    """Empirical constant in |<2b, x-z> + Q(x-z) - |x-z|^2| <= C |x-z|^3 / r.

    The constant is unquantified in theory; the check reports the max ratio
    over support probes in B(z, r/2) and whether it is stable across probe
    scales.  Nothing is asserted against a ground-truth C.
    """
    from .geometry import support_points_near

    z = np.asarray(z, dtype=float)
    if probe_points is None:
        scales = (0.125 * r, 0.25 * r, 0.375 * r)
        probe_points = support_points_near(mu.manifold, z, scales, count_per_scale=6)
    probe_points = [np.asarray(p, dtype=float) for p in probe_points]
    for p in probe_points:
        if np.linalg.norm(p - z) > r / 2:
            raise ValueError("probe points must lie in B(z, r/2)")
    ms = moment_set(mu, BallRegion(z, r), rel_tol=rel_tol)
    qf = q_form(mu, BallRegion(z, r), rel_tol=rel_tol, normalized=True)
    per_probe = []
    buckets: dict[float, float] = {}
    for p in probe_points:
        d = p - z
        dn = float(np.linalg.norm(d))
        lhs = abs(float(2 * ms.b @ d) + float(d @ qf.matrix @ d) - dn * dn)
        ratio = lhs * r / dn**3
        per_probe.append((dn, ratio))
        key = round(dn, 12)
        buckets[key] = max(buckets.get(key, 0.0), ratio)
    per_scale = tuple(sorted(buckets.items()))
    maxima = [v for _, v in per_scale]
    C = max(maxima)
    # a genuine cubic bound is witnessed when the ratio does not grow as the
    # probes shrink; growth toward small scales signals a lower-order term
    growth = C / maxima[-1] - 1.0 if maxima[-1] > 0 else 0.0
    if C <= vanishing_tol:
        verdict = "pass"
    else:
        verdict = "pass" if growth <= stability_tol else "unstable"
    return TaylorBoundReport(tuple(per_probe), per_scale, C, growth, verdict)


# ---------------------------------------------------------------------------
# unique continuation probes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SucpPointReport:
    point: np.ndarray
    H_norm: float
    verdict: str  # flat_confirmed | curved | curvature_nonvanishing
    chain: tuple = ()


def _flat_at(mu, z, radii, flat_tol, rel_tol):
    """Normal second moments (chart frame) below flat_tol * mass at every r."""
    chart = graph_chart_at(mu.manifold, z, max(radii))
    k = chart.k
    for r in radii:
        ms = moment_set(mu, BallRegion(z, float(r)), rel_tol=rel_tol)
        qf = q_form(mu, BallRegion(z, float(r)), rel_tol=rel_tol, normalized=False)
        qc = chart.rotation.T @ qf.matrix @ chart.rotation
        normal_moments = np.diag(qc)[k:]
        threshold = flat_tol * ms.mass + 3 * np.max(qf.matrix_error)
        if np.any(normal_moments > threshold):
            return False
    return True


def sucp_probe(
    mu: MeasureSpec,
    scan_points,
    r_list=(0.25, 0.4),
    h_tol: float = 1e-8,
    flat_tol: float = 1e-10,
    chain_length: int = 3,
    chain_step: float = 0.4,
    rel_tol: float = DEFAULT_REL_TOL,
) -> list[SucpPointReport]:
    """Strong-unique-continuation probe: vanishing |H| must propagate flatness.

    Where |H| <= h_tol the probe verifies per-radius normal flatness, then
    walks a chain of re-centerings (step < 1/2, mirroring the proof's chain
    of balls) along the detected tangent plane and re-verifies at each stop.
    """
    reports = []
    for z in scan_points:
        z = np.asarray(z, dtype=float)
        chart = graph_chart_at(mu.manifold, z, max(r_list))
        H = mean_curvature_vector(chart)
        h_norm = float(np.linalg.norm(H))
        if h_norm > h_tol:
            reports.append(SucpPointReport(z, h_norm, "curvature_nonvanishing"))
            continue
        if not _flat_at(mu, z, r_list, flat_tol, rel_tol):
            reports.append(SucpPointReport(z, h_norm, "curved"))
            continue
        direction = chart.tangent_basis()[:, 0]
        chain = []
        ok = True
        current = z
        for _ in range(chain_length):
            current = current + chain_step * direction
            if mu.manifold.implicit_residual(current) > 1e-8:
                ok = False
                break
            if not _flat_at(mu, current, r_list, flat_tol, rel_tol):
                ok = False
                break
            chain.append(current)
        verdict = "flat_confirmed" if ok else "curved"
        reports.append(SucpPointReport(z, h_norm, verdict, tuple(chain)))
    return reports


@dataclass(frozen=True)
class WucpReport:
    hypothesis_holds: bool
    c: float | None
    K: float | None
    rescaled_label: str | None
    uniformity: UniformityReport | None
    sucp: tuple | None
    verdict: str  # pass | hypothesis_fails | fail


def wucp_probe(
    mu: MeasureSpec,
    z0,
    r0: float,
    k_guess: int | None = None,
    tol: float = 1e-8,
    rel_tol: float = DEFAULT_REL_TOL,
) -> WucpReport:
    """Weak-unique-continuation pipeline for a flat patch of the support.

    Tests the flat-patch hypothesis numerically; when it holds, recovers the
    density constant c from the radial profile, rescales to a locally uniform
    measure, and runs the uniformity check plus the strong probe on the
    rescaled measure.
    """
    z0 = np.asarray(z0, dtype=float)
    k = k_guess if k_guess is not None else mu.k
    probe_radius = min(float(r0), 1.0)
    if not _flat_at(mu, z0, [probe_radius], tol, rel_tol):
        return WucpReport(False, None, None, None, None, None, "hypothesis_fails")
    top = min(r0 / 4.0, 0.5)
    radii = [top * 2.0**-i for i in range(8)]
    profile = radial_profile(mu, z0, radii, rel_tol=rel_tol)
    limits = density_limits(profile, k)
    rescaled = rescale(mu, r0, limits.c)
    z_new = rescale_point(z0, r0)
    centers = [z_new] + [
        np.asarray(c, dtype=float) for c in rescaled.manifold.default_centers()
    ]
    report = check_local_uniform(rescaled, centers, (0.25, 0.5, 1.0), rel_tol=rel_tol)
    sucp = sucp_probe(rescaled, [z_new], rel_tol=rel_tol)
    good = report.verdict == "locally_uniform" and all(
        s.verdict == "flat_confirmed" for s in sucp
    )
    return WucpReport(
        hypothesis_holds=True,
        c=limits.c,
        K=limits.K,
        rescaled_label=rescaled.label,
        uniformity=report,
        sucp=tuple(sucp),
        verdict="pass" if good else "fail",
    )


def dimension_probe(profile: RadialMassProfile) -> float:
    """Least-squares slope of log g(r) vs log r: a numerical dimension estimate."""
    if len(profile.samples) < 4:
        raise ValueError("need at least 4 radii")
    radii = np.array([s[0] for s in profile.samples])
    masses = np.array([s[1] for s in profile.samples])
    if np.any(masses <= 0):
        raise NonConvergent("nonpositive ball masses; no dimension estimate")
    slope, _ = np.polyfit(np.log(radii), np.log(masses), 1)
    return float(slope)
