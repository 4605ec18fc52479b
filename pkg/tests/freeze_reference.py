"""Regenerate tests/expected/reference_run.json from the default experiment.

Run by hand (``python tests/freeze_reference.py``) only when the numerics
change on purpose; the acceptance suite compares against the committed file.
"""
import json
import math
from pathlib import Path

from gdplab.experiments import ExperimentConfig, nonuniform_run

# Closeness constant for |d(t, n) - theory(t)| <= K eps'(n); fixed, not fitted.
K = 3.0


def main():
    report = nonuniform_run(ExperimentConfig())
    ratios = [
        abs(r.d[t] - report.theory(t)) / r.budget.eps_prime
        for r in report.records
        for t in report.config.sample_times
    ]
    doc = {
        "K": K,
        "measured_max_K": max(ratios),
        "phi2": report.phi2,
        "phi2_cutoff": report.phi2_cutoff,
        "records": [
            {
                "n": r.n,
                "d0": r.d0,
                "d": {repr(t): v for t, v in r.d.items()},
                "gap_Hs-1_omega1": {repr(t): g["H^s-1"] for t, g in r.approx_gap[1].items()},
                "lemma_ratio": r.lemma_ratio,
                "growth": {str(o): v for o, v in r.growth.items()},
            }
            for r in report.records
        ],
    }
    assert doc["measured_max_K"] <= K and math.isfinite(doc["measured_max_K"])
    path = Path(__file__).parent / "expected" / "reference_run.json"
    path.write_text(json.dumps(doc, indent=2) + "\n")
    print("wrote", path, "max K ratio %.4f" % doc["measured_max_K"])


if __name__ == "__main__":
    main()
