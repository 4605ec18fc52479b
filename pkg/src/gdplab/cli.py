"""Command-line entry point: ``gdplab {solve,norms,lemma,nonuniform,validate}``.

Exit statuses:

    0  success
    2  configuration error (bad document, violated parameter constraint)
    3  numerical blow-up
    4  validation failure (a study ran but its checks did not pass)
    5  I/O error (including refusal to overwrite existing outputs)
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import LemmaJob, NormsJob, SolveJob, ValidateJob, parse_config, to_document
from .dynamics import (
    growth_factor,
    mean_drift,
    solve,
    write_diagnostics_csv,
    write_trajectory_csv,
)
from .errors import BlowUpError, ConfigurationError, ResourceError
from .experiments import ExperimentConfig, convergence_study, lemma_ratio, nonuniform_run
from .packets import PLATEAU, bump_norm
from .reporting import (
    PLOT_FILES,
    REPORT_FILES,
    check_targets,
    emit_report,
    write_outputs,
)
from .spectral import SUP, field_norm, sobolev_norm

log = logging.getLogger("gdplab")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_VALIDATION = 4
EXIT_IO = 5

COMMANDS = ("solve", "norms", "lemma", "nonuniform", "validate")
_KIND = {
    "solve": "solver",
    "norms": "norms",
    "lemma": "lemma",
    "nonuniform": "experiment",
    "validate": "validate",
}
_DEFAULTS = {
    "solve": SolveJob,
    "norms": NormsJob,
    "lemma": LemmaJob,
    "nonuniform": ExperimentConfig,
    "validate": ValidateJob,
}
_OUTPUTS = {
    "solve": ("trajectory.csv", "diagnostics.csv", "solve.json"),
    "norms": ("norms.json",),
    "lemma": ("lemma.json", "lemma.csv"),
    "nonuniform": REPORT_FILES,
    "validate": ("validation.json",),
}


@dataclass
class RunManifest:
    command: str
    config: Path | None
    out: Path
    overwrite: bool = False
    emit_plots: bool = False
    workers: int | None = None


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def _load(manifest):
    if manifest.config is None:
        return _DEFAULTS[manifest.command]()
    text = Path(manifest.config).read_text()
    return parse_config(text, expect=_KIND[manifest.command])


def _run_solve(job, manifest):
    grid = job.grid()
    u0 = job.initial.build(grid)
    traj = solve(u0, job.solver)
    summary = {
        "config": to_document(job),
        "dt": traj.dt,
        "steps": traj.steps,
        "mean_drift": mean_drift(traj),
        "growth_factor": {
            "%g" % s: growth_factor(traj, s) for s in job.solver.norm_orders
        } if sobolev_norm(u0, 0) > 0 else {},
    }
    texts = {"solve.json": _dump(summary)}
    for name, writer in (("trajectory.csv", write_trajectory_csv),
                         ("diagnostics.csv", write_diagnostics_csv)):
        buf = io.StringIO()
        writer(traj, buf)
        texts[name] = buf.getvalue()
    write_outputs(manifest.out, texts, manifest.overwrite)
    return EXIT_OK


def _run_norms(job, manifest):
    u = job.initial.build(job.grid())
    doc = {
        "config": to_document(job),
        "sup": field_norm(u, SUP),
        "sobolev": [{"s": s, "value": sobolev_norm(u, s)} for s in job.orders],
    }
    write_outputs(manifest.out, {"norms.json": _dump(doc)}, manifest.overwrite)
    return EXIT_OK


def _run_lemma(job, manifest):
    phi2 = bump_norm(PLATEAU)
    limit = phi2 / math.sqrt(2)
    rows = []
    for carrier in job.carriers:
        for s in job.s_list:
            for alpha in job.alpha_list:
                for n in job.n_list:
                    r = lemma_ratio(n, job.delta, s, alpha, carrier=carrier)
                    rows.append({"carrier": carrier, "s": s, "alpha": alpha, "n": n,
                                 "ratio": r, "deviation": abs(r - limit)})
    lines = ["carrier,s,alpha,n,ratio,deviation"]
    for r in rows:
        lines.append("%s,%.17g,%.17g,%d,%.17g,%.17g" % (
            r["carrier"], r["s"], r["alpha"], r["n"], r["ratio"], r["deviation"]))
    doc = {"config": to_document(job), "phi2": phi2, "limit": limit, "rows": rows}
    write_outputs(manifest.out, {"lemma.json": _dump(doc), "lemma.csv": "\n".join(lines) + "\n"},
                  manifest.overwrite)
    return EXIT_OK


def _run_nonuniform(cfg, manifest):
    def progress(n, omega, kind):
        log.info("solved n=%d omega=%d (%s)", n, omega, kind)

    workers = manifest.workers or os.cpu_count() or 1
    report = nonuniform_run(cfg, workers=workers, progress=progress)
    emit_report(report, manifest.out, overwrite=manifest.overwrite, emit_plots=manifest.emit_plots)
    return EXIT_OK


def _run_validate(job, manifest):
    amp = job.amplitude
    rep = convergence_study(lambda x: amp * np.cos(x), job.dt_list, job.N_list, T=job.T)
    doc = {
        "config": to_document(job),
        "status": rep.status,
        "differences": rep.differences,
        "orders": rep.orders,
        "order": rep.order if rep.orders else None,
        "order_range": list(rep.order_range),
        "spatial_difference": rep.spatial_difference,
        "tail_fraction": rep.tail_fraction,
        "passed": rep.passed,
    }
    write_outputs(manifest.out, {"validation.json": _dump(doc)}, manifest.overwrite)
    log.info("validation %s: order %s", "passed" if rep.passed else "FAILED", doc["order"])
    return EXIT_OK if rep.passed else EXIT_VALIDATION


_RUNNERS = {
    "solve": _run_solve,
    "norms": _run_norms,
    "lemma": _run_lemma,
    "nonuniform": _run_nonuniform,
    "validate": _run_validate,
}


def run(manifest):
    """Dispatch a study; returns the process exit status."""
    try:
        cfg = _load(manifest)
        names = list(_OUTPUTS[manifest.command])
        if manifest.command == "nonuniform" and manifest.emit_plots:
            names += list(PLOT_FILES)
        check_targets(manifest.out, names, manifest.overwrite)
        return _RUNNERS[manifest.command](cfg, manifest)
    except (ConfigurationError, ResourceError) as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except BlowUpError as exc:
        log.error("numerical blow-up: %s (last finite time %s)", exc, exc.last_time)
        return EXIT_BLOWUP
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO


def build_parser():
    parser = argparse.ArgumentParser(prog="gdplab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None, help="JSON configuration document")
        p.add_argument("--out", type=Path, required=True, help="output directory")
        p.add_argument("--overwrite", action="store_true")
        p.add_argument("--plots", action="store_true", help="also write SVG figures")
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    manifest = RunManifest(args.command, args.config, args.out, args.overwrite, args.plots, args.workers)
    return run(manifest)


if __name__ == "__main__":
    sys.exit(main())
