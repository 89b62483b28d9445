"""Command-line entry points.

Subcommands
    verify-identities   residual suites (second-moment identity, key equality,
                        per-direction identity, orthogonality, Taylor bound)
    check-uniformity    ball-mass deviations from w_k r^k (add --pairwise for
                        the uniformly-distributed check)
    curvature-scan      mean-curvature scan with flatness propagation
    wucp                flat-patch hypothesis, density recovery, rescale, rescan
    dimension           log-log mass slope
    report              render CSV + figures from a JSON report

Exit codes: 0 all suites pass, 1 a suite fails its verdict, 2 execution error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .config import build_config, load_config_file
from .errors import ConfigError, GmtLabError
from .figures import render_figures
from .report import ReportEnvelope, emit
from .runner import run

_SUBCOMMAND_SUITES = {
    "verify-identities": "identities",
    "check-uniformity": "uniformity",
    "curvature-scan": "sucp",
    "wucp": "wucp",
    "dimension": "dimension",
    "run": None,  # suite taken from --suite / config
}


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (flags override it)")
    p.add_argument("--measure", help="measure label, e.g. sphere:k=2,rho=1")
    p.add_argument("--radius", type=float, help="single ball radius")
    p.add_argument("--radii", help="comma-separated ball radii")
    p.add_argument("--centers", help="semicolon-separated points, e.g. 0,0,-1;1,0,0")
    p.add_argument("--tol", type=float, help="verdict tolerance")
    p.add_argument("--rel-tol", type=float, dest="rel_tol", help="quadrature tolerance")
    p.add_argument("--seed", type=int, help="Monte Carlo / direction seed")
    p.add_argument("--out", help="report output path")
    p.add_argument("--format", choices=("json", "csv"), help="report format")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmtlab",
        description="Numerical laboratory for locally uniform surface measures.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMAND_SUITES:
        p = sub.add_parser(name)
        _add_common_flags(p)
        if name == "run":
            p.add_argument("--suite", help="suite name or 'all'")
        if name == "check-uniformity":
            p.add_argument("--pairwise", action="store_true",
                           help="run the uniformly-distributed pairwise check")
    rp = sub.add_parser("report", help="render CSV and figures from a JSON report")
    rp.add_argument("--in", dest="in_path", required=True, help="JSON report path")
    rp.add_argument("--out-dir", required=True, help="output directory")
    return parser


def _cmd_report(args) -> int:
    with open(args.in_path, "r", encoding="utf-8") as fh:
        envelope = ReportEnvelope.from_dict(json.load(fh))
    import os

    os.makedirs(args.out_dir, exist_ok=True)
    csv_path = os.path.join(args.out_dir, "records.csv")
    emit(envelope, "csv", csv_path)
    paths = render_figures(envelope, args.out_dir)
    for p in [csv_path] + paths:
        print(p)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command == "report":
        try:
            return _cmd_report(args)
        except (OSError, ValueError, KeyError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2

    overrides = {
        "measure": args.measure,
        "centers": args.centers,
        "tol": args.tol,
        "rel_tol": args.rel_tol,
        "seed": args.seed,
        "out": args.out,
        "format": args.format,
    }
    if args.radii:
        overrides["radii"] = args.radii
    elif args.radius is not None:
        overrides["radii"] = [args.radius]
    suite = _SUBCOMMAND_SUITES[args.command]
    if suite is not None:
        overrides["suite"] = suite
    elif getattr(args, "suite", None):
        overrides["suite"] = args.suite
    if getattr(args, "pairwise", False):
        overrides["suite"] = "distributed"

    try:
        file_values = load_config_file(args.config) if args.config else None
        config = build_config(file_values, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        envelope = run(config)
    except GmtLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if config.out:
        emit(envelope, config.format, config.out)
    else:
        print(json.dumps(envelope.to_dict(), indent=2))

    for suite_name, verdict in envelope.suite_verdicts.items():
        print(f"{suite_name}: {verdict}", file=sys.stderr)
    if envelope.overall_verdict == "pass":
        return 0
    if envelope.overall_verdict == "error":
        return 2
    return 1


if __name__ == "__main__":
    raise SystemExit(main())
