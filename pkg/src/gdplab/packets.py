"""Smooth bumps and the high/low frequency wave-packet families.

For carrier frequency ``n``, envelope exponent ``delta``, Sobolev index ``s``
and family switch ``omega`` in {0, 1}:

    high packet    n^(-delta/2 - s) * PLATEAU(x / n^delta) * cos(n x + 2 omega t)
    low datum      omega * n^(-1) * CUTOFF(x / n^delta)
    initial datum  high packet at t = 0 + low datum

CUTOFF equals 1 on the support of PLATEAU, so CUTOFF * PLATEAU == PLATEAU.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError
from .spectral import L2, Field, Grid, field_norm

__all__ = [
    "BumpSpec",
    "PLATEAU",
    "CUTOFF",
    "FamilyParams",
    "bump_profile",
    "bump",
    "bump_norm",
    "modulated_bump",
    "high_freq_packet",
    "low_freq_initial",
    "family_initial",
    "approximate_solution",
    "REFERENCE_GRID",
]

DOMAIN_MARGIN = 4.0
REFERENCE_GRID = (64.0, 65536)


@dataclass(frozen=True)
class BumpSpec:
    """Even bump equal to 1 on ``|x| <= inner`` and 0 on ``|x| >= outer``."""

    name: str
    inner: float
    outer: float


PLATEAU = BumpSpec("plateau", 1.0, 2.0)
CUTOFF = BumpSpec("cutoff", 2.0, 4.0)


def _h(t):
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def bump_profile(x, spec):
    """Evaluate the C-infinity partition ``h(r2-|x|) / (h(r2-|x|) + h(|x|-r1))``."""
    a = np.abs(np.asarray(x, dtype=float))
    scalar = a.ndim == 0
    a = np.atleast_1d(a)
    hi = _h(spec.outer - a)
    lo = _h(a - spec.inner)
    out = np.zeros_like(a)
    mid = (a > spec.inner) & (a < spec.outer)
    out[mid] = hi[mid] / (hi[mid] + lo[mid])
    out[a <= spec.inner] = 1.0
    return float(out[0]) if scalar else out


def _check_support(grid, spec, scale):
    reach = spec.outer * scale
    if reach > grid.length / 2 - DOMAIN_MARGIN:
        need = 2 * (reach + DOMAIN_MARGIN)
        raise ConfigurationError(
            "%s bump of scale %g needs L >= %g (have L = %g)"
            % (spec.name, scale, need, grid.length),
            field="L",
        )


def bump(grid, spec, scale=1.0):
    """``spec(x / scale)`` sampled on ``grid``."""
    _check_support(grid, spec, scale)
    return Field(grid, bump_profile(grid.nodes / scale, spec))


@lru_cache(maxsize=None)
def bump_norm(spec, L=REFERENCE_GRID[0], N=REFERENCE_GRID[1]):
    """``||spec||_{L2}`` by spectral quadrature on a fine reference grid."""
    return field_norm(bump(Grid(L, N), spec, 1.0), L2)


@dataclass(frozen=True)
class FamilyParams:
    """Wave-packet parameters; requires ``s > 3/2`` and ``0 < delta < min(s - 3/2, 1)``."""

    n: int
    delta: float
    s: float
    omega: int = 0

    def __post_init__(self):
        problems = family_problems(self.n, self.delta, self.s, self.omega)
        if problems:
            raise ConfigurationError("; ".join(problems), field=problems[0].split(":")[0])

    @property
    def scale(self):
        return self.n ** self.delta

    @property
    def amplitude(self):
        return self.n ** (-self.delta / 2 - self.s)

    def with_omega(self, omega):
        return FamilyParams(self.n, self.delta, self.s, omega)


def family_problems(n, delta, s, omega=0):
    """All violated parameter constraints, as ``"field: message"`` strings."""
    out = []
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        out.append("n: must be a positive integer (got %r)" % (n,))
    if omega not in (0, 1):
        out.append("omega: must be 0 or 1 (got %r)" % (omega,))
    if not s > 1.5:
        out.append("s: s must exceed 3/2 (got %r)" % (s,))
    if not 0 < delta < 1:
        out.append("delta: must lie in (0, 1) (got %r)" % (delta,))
    if math.isfinite(s) and math.isfinite(delta):
        if not s - 1 - delta > 0.5:
            out.append(
                "delta: s - 1 - delta > 1/2 is required (s - 1 - delta = %g)" % (s - 1 - delta)
            )
        bound = min(s - 1.5, 1.0)
        if not delta < bound:
            out.append(
                "delta: delta < min{s - 3/2, 1} = %g is required (got %g)" % (bound, delta)
            )
    return out


def _check_carrier(grid, n):
    if n > 2 * math.pi / grid.length * grid.dealias_cutoff:
        need = 3 * n * grid.length / (2 * math.pi)
        raise ConfigurationError(
            "carrier n = %g lies outside the dealiased band; need N >= %d" % (n, math.ceil(need)),
            field="N",
        )


def modulated_bump(grid, n, delta, phase=0.0, carrier=np.cos, spec=PLATEAU):
    """``spec(x / n^delta) * carrier(n x + phase)`` (unnormalized)."""
    _check_carrier(grid, n)
    env = bump(grid, spec, n ** delta)
    return Field(grid, env.values * carrier(n * grid.nodes + phase))


def high_freq_packet(grid, p, t=0.0):
    """``n^(-delta/2-s) PLATEAU(x/n^delta) cos(n x + 2 omega t)``."""
    f = modulated_bump(grid, p.n, p.delta, phase=2.0 * p.omega * t)
    return p.amplitude * f


def low_freq_initial(grid, p):
    """``omega n^(-1) CUTOFF(x/n^delta)``; identically zero for ``omega = 0``."""
    env = bump(grid, CUTOFF, p.scale)
    return (p.omega / p.n) * env


def family_initial(grid, p):
    return high_freq_packet(grid, p, 0.0) + low_freq_initial(grid, p)


def approximate_solution(grid, p, low_traj, t):
    """High packet at time ``t`` plus the solved low-frequency part recorded at ``t``."""
    return high_freq_packet(grid, p, t) + low_traj.at(t)
