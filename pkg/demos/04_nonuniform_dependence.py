"""
Close data, distant solutions
=============================

Two data families that start n^(delta-1)-close in H^2 but separate to
about sqrt(2) ||PLATEAU||_{L2} |sin t| within unit time.
Pass an output directory to also write the report files.
"""
import sys

from gdplab import ExperimentConfig, emit_report, nonuniform_run

cfg = ExperimentConfig(s=2.0, delta=0.4, n_list=(16, 32, 64, 128),
                       sample_times=(0.25, 0.5, 0.75, 1.0))
report = nonuniform_run(cfg)

print("   n        d0   " + "".join("  d(%.2f)" % t for t in cfg.sample_times))
for r in report.records:
    print("%4d  %8.4f   " % (r.n, r.d0) + "".join("  %6.4f" % r.d[t] for t in cfg.sample_times))
print("theory          " + "".join("  %6.4f" % report.theory(t) for t in cfg.sample_times))

# d0 falls with n while the separation at positive times does not
print("\nlog-log slope of d0: %.3f" % report.d0_slope())

if len(sys.argv) > 1:
    for path in emit_report(report, sys.argv[1], overwrite=True):
        print("wrote", path)
