"""Figure rendering for the report path: (radius, value) series per suite."""

from __future__ import annotations

import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .report import ReportEnvelope


def render_figures(envelope: ReportEnvelope, out_dir: str) -> list[str]:
    """One PNG per suite: every quantity plotted against ball radius.

    Records without a radius (point scans, slopes) are drawn as index series.
    Returns the list of written file paths.
    """
    os.makedirs(out_dir, exist_ok=True)
    by_suite: dict[str, list] = defaultdict(list)
    for rec in envelope.records:
        by_suite[rec["suite"]].append(rec)
    written = []
    for suite, recs in sorted(by_suite.items()):
        quantities = sorted({r["quantity"] for r in recs})
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for q in quantities:
            rows = [r for r in recs if r["quantity"] == q]
            has_radius = all(r["radius"] is not None for r in rows)
            xs = [r["radius"] for r in rows] if has_radius else list(range(len(rows)))
            ys = [r["value"] for r in rows]
            es = [r["error"] for r in rows]
            ax.errorbar(xs, ys, yerr=es, fmt="o", ms=4, capsize=2, label=q)
        ax.set_xlabel("ball radius r" if any(r["radius"] is not None for r in recs)
                      else "record index")
        ax.set_ylabel("value")
        ax.set_title(f"{suite} — {envelope.config.get('measure_label', '')}")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        path = os.path.join(out_dir, f"{suite}.png")
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
