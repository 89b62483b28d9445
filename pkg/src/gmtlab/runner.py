"""Suite orchestration: RunConfig in, ReportEnvelope out."""

from __future__ import annotations

import time

import numpy as np

from . import __version__
from .catalog import builtin, radial_profile
from .config import RunConfig
from .errors import GmtLabError
from .report import ReportEnvelope, record
from .verification import (
    IDENTITY_RADII,
    check_local_uniform,
    check_uniformly_distributed,
    dimension_probe,
    elementary_identity_residual,
    key_equality_residual,
    lemma32_residual,
    orthogonality_check,
    sucp_probe,
    taylor_bound_check,
    wucp_probe,
)


def _resolve_measure(config: RunConfig):
    return builtin(config.measure_label, **config.measure_params)


def _resolve_centers(config: RunConfig, mu):
    if config.centers is not None:
        return [np.asarray(c, dtype=float) for c in config.centers]
    return mu.manifold.default_centers()


def _nonsingular(mu, centers):
    return [c for c in centers if not mu.manifold.is_singular(c)]


def _identity_tol(mu) -> float:
    # closed-form-backed supports are held to the tight tolerance; the cone
    # is pure quadrature on both sides
    return 1e-5 if mu.manifold.kind == "kp_cone" else 1e-7


def _run_uniformity(config, mu, centers, records):
    rep = check_local_uniform(mu, centers, config.radii, tol=config.tol,
                              rel_tol=config.rel_tol)
    for e in rep.entries:
        records.append(
            record("uniformity", mu.label, e.center, e.radius, "deviation",
                   e.deviation, e.deviation_error,
                   "pass" if abs(e.deviation) <= config.tol + e.deviation_error else "fail")
        )
    return "pass" if rep.verdict == "locally_uniform" else "fail"


def _run_distributed(config, mu, centers, records):
    rep = check_uniformly_distributed(mu, centers, config.radii, tol=config.tol,
                                      rel_tol=config.rel_tol)
    for e in rep.entries:
        records.append(
            record("distributed", mu.label, None, e.radius, "max_pairwise_mass_diff",
                   e.max_pairwise, max(e.errors), "pass" if e.within_tol else "fail")
        )
    return "pass" if rep.verdict == "uniformly_distributed" else "fail"


def _run_identities(config, mu, centers, records):
    radii = [r for r in config.radii if 0 < r < 0.5] or list(IDENTITY_RADII)
    tol = _identity_tol(mu)
    ok = True
    for z in _nonsingular(mu, centers):
        for r in radii:
            res36, err36, ms = elementary_identity_residual(mu, z, r, config.rel_tol)
            good = res36 <= max(1e-7 * r ** (mu.k + 2), 3 * err36)
            ok &= good
            records.append(record("identities", mu.label, z, r, "eq_second_moment_residual",
                                  res36, err36, "pass" if good else "fail",
                                  evaluations=ms.evaluations))
            key = key_equality_residual(mu, z, r, rel_tol=config.rel_tol)
            good = key.residual <= max(tol, 3 * key.error)
            ok &= good
            records.append(record("identities", mu.label, z, r, "key_equality_residual",
                                  key.residual, key.error, "pass" if good else "fail"))
            lem = lemma32_residual(mu, z, r, rel_tol=config.rel_tol, seed=config.seed)
            good = lem.max_residual <= max(tol, 3 * lem.error)
            ok &= good
            records.append(record("identities", mu.label, z, r, "lemma32_max_residual",
                                  lem.max_residual, lem.error, "pass" if good else "fail",
                                  seed=config.seed))
            orth = orthogonality_check(mu, z, r, rel_tol=config.rel_tol, tol=tol)
            ok &= orth.passed
            records.append(record("identities", mu.label, z, r, "b_tangential_norm",
                                  orth.tangential_norm, 0.0,
                                  "pass" if orth.passed else "fail"))
            taylor = taylor_bound_check(mu, z, r, rel_tol=config.rel_tol)
            good = taylor.verdict == "pass"
            ok &= good
            records.append(record("identities", mu.label, z, r, "taylor_empirical_C",
                                  taylor.empirical_C, taylor.stability,
                                  taylor.verdict))
    return "pass" if ok else "fail"


def _run_sucp(config, mu, centers, records):
    pts = _nonsingular(mu, centers)
    r_list = tuple(r for r in config.radii if 0 < r < 0.5) or (0.25, 0.4)
    reports = sucp_probe(mu, pts, r_list=r_list, h_tol=config.h_tol,
                         flat_tol=config.flat_tol, rel_tol=config.rel_tol)
    for rep in reports:
        records.append(record("sucp", mu.label, rep.point, None, "mean_curvature_norm",
                              rep.H_norm, 0.0, rep.verdict))
    return "pass" if all(r.verdict != "curved" for r in reports) else "fail"


def _run_wucp(config, mu, centers, records):
    z0 = _nonsingular(mu, centers)[0]
    r0 = max(config.radii)
    rep = wucp_probe(mu, z0, r0, tol=config.tol, rel_tol=config.rel_tol)
    records.append(record("wucp", mu.label, z0, r0, "density_c",
                          rep.c if rep.c is not None else float("nan"),
                          0.0, rep.verdict))
    if rep.K is not None:
        records.append(record("wucp", mu.label, z0, r0, "density_K", rep.K, 0.0,
                              rep.verdict))
    return rep.verdict if rep.verdict != "hypothesis_fails" else "hypothesis_fails"


def _run_dimension(config, mu, centers, records):
    z = _resolve_dimension_center(mu, centers)
    profile = radial_profile(mu, z, rel_tol=config.rel_tol)
    slope = dimension_probe(profile)
    good = abs(slope - mu.k) <= 5e-2
    records.append(record("dimension", mu.label, z, None, "log_mass_slope",
                          slope, 0.0, "pass" if good else "fail"))
    return "pass" if good else "fail"


def _resolve_dimension_center(mu, centers):
    nonsing = _nonsingular(mu, centers)
    return nonsing[0] if nonsing else centers[0]


_SUITE_RUNNERS = {
    "uniformity": _run_uniformity,
    "distributed": _run_distributed,
    "identities": _run_identities,
    "sucp": _run_sucp,
    "wucp": _run_wucp,
    "dimension": _run_dimension,
}


def run(config: RunConfig) -> ReportEnvelope:
    """Execute the requested suites and assemble the report envelope."""
    start = time.perf_counter()
    mu = _resolve_measure(config)
    centers = _resolve_centers(config, mu)
    suites = list(_SUITE_RUNNERS) if config.suite == "all" else [config.suite]
    records: list = []
    verdicts: dict = {}
    for suite in suites:
        try:
            verdicts[suite] = _SUITE_RUNNERS[suite](config, mu, centers, records)
        except GmtLabError as exc:
            records.append(record(suite, mu.label, None, None, "error",
                                  float("nan"), 0.0, f"error:{exc}"))
            verdicts[suite] = "error"
    if any(v == "error" for v in verdicts.values()):
        overall = "error"
    elif all(v == "pass" for v in verdicts.values()):
        overall = "pass"
    else:
        overall = "fail"
    return ReportEnvelope(
        tool_version=__version__,
        config=config.echo(),
        records=records,
        suite_verdicts=verdicts,
        overall_verdict=overall,
        wall_time_s=time.perf_counter() - start,
    )
