"""Machine-readable report envelope and JSON/CSV emission."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

SCHEMA_VERSION = "1"

CSV_COLUMNS = ("suite", "measure", "center", "radius", "quantity", "value", "error", "verdict")


def record(
    suite: str,
    measure: str,
    center,
    radius,
    quantity: str,
    value,
    error,
    verdict: str,
    method: str = "adaptive_cubature",
    evaluations: int = 0,
    seed: int | None = None,
) -> dict:
    """One numeric record; every number carries its error and provenance."""
    return {
        "suite": suite,
        "measure": measure,
        "center": None if center is None else [float(v) for v in center],
        "radius": None if radius is None else float(radius),
        "quantity": quantity,
        "value": float(value),
        "error": float(error),
        "verdict": verdict,
        "provenance": {
            "method": method,
            "evaluations": int(evaluations),
            "seed": seed,
        },
    }


@dataclass
class ReportEnvelope:
    tool_version: str
    config: dict
    records: list = field(default_factory=list)
    suite_verdicts: dict = field(default_factory=dict)
    overall_verdict: str = "pass"
    wall_time_s: float = 0.0

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "tool_version": self.tool_version,
            "config": self.config,
            "suite_verdicts": self.suite_verdicts,
            "overall_verdict": self.overall_verdict,
            "records": self.records,
        }
        if include_timing:
            out["wall_time_s"] = self.wall_time_s
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ReportEnvelope":
        env = cls(
            tool_version=data["tool_version"],
            config=data["config"],
            records=list(data["records"]),
            suite_verdicts=dict(data["suite_verdicts"]),
            overall_verdict=data["overall_verdict"],
            wall_time_s=float(data.get("wall_time_s", 0.0)),
        )
        return env


def _fmt(value) -> str:
    if value is None:
        return ""
    return format(value, ".17g")


def emit(envelope: ReportEnvelope, fmt: str, path: str, include_timing: bool = True) -> str:
    """Write the envelope as JSON (one object) or CSV (one row per record)."""
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(envelope.to_dict(include_timing=include_timing), fh, indent=2)
            fh.write("\n")
        return path
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for rec in envelope.records:
                center = rec["center"]
                writer.writerow(
                    [
                        rec["suite"],
                        rec["measure"],
                        "" if center is None else ";".join(_fmt(v) for v in center),
                        _fmt(rec["radius"]),
                        rec["quantity"],
                        _fmt(rec["value"]),
                        _fmt(rec["error"]),
                        rec["verdict"],
                    ]
                )
        return path
    raise ValueError(f"unknown report format {fmt!r}")
