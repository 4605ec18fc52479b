"""Serialize experiment reports to JSON, CSV and (optionally) SVG.

Files are first written to a scratch directory next to the destination and
then moved into place, so a failure never leaves a partial set behind.
Existing outputs are only replaced when overwriting is requested.
"""
from __future__ import annotations

import csv
import io
import json
import os
import shutil
import tempfile
from datetime import datetime, timezone
from pathlib import Path

from .config import to_document

__all__ = [
    "OutputExistsError",
    "report_document",
    "distances_rows",
    "write_outputs",
    "emit_report",
    "REPORT_FILES",
    "PLOT_FILES",
]

REPORT_FILES = ("report.json", "distances.csv", "ratios.csv", "gaps.csv")
PLOT_FILES = ("distance_vs_t.svg", "d0_vs_n.svg")


class OutputExistsError(FileExistsError):
    """Refusal to replace existing outputs without the overwrite flag."""


def _g(x):
    return "%.17g" % x


def report_document(report):
    """JSON-ready dict; ``run_info`` holds the only non-deterministic fields."""
    cfg = report.config
    recs = []
    for r in report.records:
        recs.append({
            "n": r.n,
            "L": r.L,
            "N": r.N,
            "dt": r.dt,
            "d0": r.d0,
            "d": [{"t": t, "value": v} for t, v in r.d.items()],
            "approx_gap": [
                {"omega": o, "t": t, "H^s-1": g["H^s-1"], "H^s": g["H^s"]}
                for o, per_t in r.approx_gap.items()
                for t, g in per_t.items()
            ],
            "lemma_ratio": r.lemma_ratio,
            "eps": r.budget.eps,
            "eps_prime": r.budget.eps_prime,
            "growth_factor": {str(o): v for o, v in r.growth.items()},
            "mean_drift": {str(o): v for o, v in r.drift.items()},
        })
    d0 = report.column("d0")
    validation = {
        "d0_strictly_decreasing": all(a > b for a, b in zip(d0, d0[1:])),
        "d0_loglog_slope": report.d0_slope() if len(d0) > 1 else None,
        "max_growth_factor": max(max(r.growth.values()) for r in report.records),
        "max_mean_drift": max(max(r.drift.values()) for r in report.records),
    }
    return {
        "config": to_document(cfg),
        "oracle": {"phi2": report.phi2, "phi2_cutoff": report.phi2_cutoff},
        "theory": [{"t": t, "value": report.theory(t)} for t in cfg.sample_times],
        "records": recs,
        "validation": validation,
        "run_info": {
            "timestamp": report.timestamp or datetime.now(timezone.utc).isoformat(),
            "wall_clock": {str(r.n): r.wall_clock for r in report.records},
        },
    }


def distances_rows(report):
    """One row per ``(n, t)``, always starting with ``t = 0`` where ``d = d0``."""
    rows = []
    for r in report.records:
        series = {0.0: r.d0, **r.d}
        for t in sorted(series):
            rows.append([r.n, t, series[t], r.d0, r.budget.eps, r.budget.eps_prime, report.theory(t)])
    return rows


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_g(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _report_texts(report):
    limit = report.phi2 / 2 ** 0.5
    texts = {
        "report.json": json.dumps(report_document(report), indent=2) + "\n",
        "distances.csv": _csv(
            ["n", "t", "d", "d0", "eps", "eps_prime", "theory"], distances_rows(report)
        ),
        "ratios.csv": _csv(
            ["n", "lemma_ratio", "limit", "deviation"],
            [[r.n, r.lemma_ratio, limit, abs(r.lemma_ratio - limit)] for r in report.records],
        ),
        "gaps.csv": _csv(
            ["n", "omega", "t", "gap_Hs-1", "gap_Hs"],
            [
                [r.n, o, t, g["H^s-1"], g["H^s"]]
                for r in report.records
                for o, per_t in sorted(r.approx_gap.items())
                for t, g in per_t.items()
            ],
        ),
    }
    return texts


def _plot_texts(report):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    matplotlib.rcParams["svg.hashsalt"] = "gdplab"
    out = {}

    fig, ax = plt.subplots(figsize=(6, 4))
    tt = np.linspace(0, max(report.config.sample_times + (1e-3,)), 200)
    ax.plot(tt, [report.theory(t) for t in tt], "k--", label=r"$\sqrt{2}\,\|\varphi\|_{L^2}|\sin t|$")
    for r in report.records:
        series = {0.0: r.d0, **r.d}
        ts = sorted(series)
        ax.plot(ts, [series[t] for t in ts], "o-", label="n = %d" % r.n)
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\|V_1(t) - V_0(t)\|_{H^s}$")
    ax.legend(fontsize=8)
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    out["distance_vs_t.svg"] = buf.getvalue()

    fig, ax = plt.subplots(figsize=(6, 4))
    ns = report.n_values
    d0 = report.column("d0")
    ax.loglog(ns, d0, "o-", label="d0")
    if len(ns) > 1:
        slope = report.d0_slope()
        ax.text(0.05, 0.08, "slope = %.3f" % slope, transform=ax.transAxes)
    ax.set_xlabel("n")
    ax.set_ylabel("d0")
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    out["d0_vs_n.svg"] = buf.getvalue()
    return out


def check_targets(out_dir, names, overwrite):
    """Raise :class:`OutputExistsError` if any target exists and overwriting is off."""
    out_dir = Path(out_dir)
    existing = [n for n in names if (out_dir / n).exists()]
    if existing and not overwrite:
        raise OutputExistsError(
            "refusing to overwrite %s in %s (pass --overwrite)" % (", ".join(existing), out_dir)
        )


def write_outputs(out_dir, texts, overwrite=False):
    """Atomically publish ``{filename: text}`` into ``out_dir``; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    check_targets(out_dir, texts, overwrite)
    scratch = Path(tempfile.mkdtemp(prefix=".partial-", dir=out_dir))
    try:
        for name, text in texts.items():
            (scratch / name).write_text(text)
        paths = []
        for name in texts:
            os.replace(scratch / name, out_dir / name)
            paths.append(out_dir / name)
    finally:
        shutil.rmtree(scratch, ignore_errors=True)
    return paths


def emit_report(report, out_dir, overwrite=False, emit_plots=False):
    """Write report.json, distances.csv, ratios.csv, gaps.csv and optional SVG plots."""
    names = list(REPORT_FILES) + (list(PLOT_FILES) if emit_plots else [])
    check_targets(out_dir, names, overwrite)
    texts = _report_texts(report)
    if emit_plots:
        texts.update(_plot_texts(report))
    return write_outputs(out_dir, texts, overwrite=overwrite)
