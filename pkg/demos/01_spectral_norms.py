"""
Sobolev norms on a periodic grid
================================

Norms of pure modes, and how the weight (1 + xi^2)^s separates
smooth from oscillatory data.
"""
import math

import numpy as np

from gdplab import Field, Grid, sobolev_norm

grid = Grid(2 * math.pi, 64)
x = grid.nodes

# ||cos x||_{H^s} = sqrt(2^s pi) on the 2 pi torus
u = Field(grid, np.cos(x))
for s in (-1, 0, 1, 2):
    print("s = %2d   norm = %.15f   exact = %.15f" % (s, sobolev_norm(u, s), math.sqrt(2 ** s * math.pi)))

# a high mode pays (1 + k^2)^(s/2) for every extra order
for k in (1, 4, 16):
    v = Field(grid, np.cos(k * x))
    print("k = %2d   H^2 / L^2 = %8.2f" % (k, sobolev_norm(v, 2) / sobolev_norm(v, 0)))
