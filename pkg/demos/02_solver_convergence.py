"""
Fourth-order time stepping
==========================

Self-convergence of the RK4 pseudo-spectral solver on a small cosine.
"""
import numpy as np

from gdplab import convergence_study

rep = convergence_study(lambda x: 0.1 * np.cos(x), dt_list=(1e-2, 5e-3, 2.5e-3))

for dt, diff in zip(rep.dt_list, rep.differences):
    print("dt = %.4g   ||u_dt - u_dt/2|| = %.3e" % (dt, diff))

# each halving of dt should shrink the difference by about 2^4
print("observed orders:", ["%.3f" % p for p in rep.orders])
print("64 vs 128 nodes:", "%.1e" % rep.spatial_difference)
print("passed:", rep.passed)
