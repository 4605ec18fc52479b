"""Periodic Fourier grid, multiplier operators and fractional Sobolev norms.

All operators act on real samples over the torus ``[-L/2, L/2)``. Fourier
coefficients follow the convention

    c_m = (1/N) * sum_j f(x_j) exp(-i xi_m x_j),    xi_m = 2 pi m / L,

and norms are weighted by ``L`` so that for band-limited functions the
discrete norms coincide with their continuum counterparts, e.g.
``||f||_{L2}^2 = integral of |f|^2 dx``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, DomainError

__all__ = [
    "Grid",
    "Field",
    "Spectrum",
    "NormSpec",
    "L2",
    "SUP",
    "build_grid",
    "analysis",
    "synthesis",
    "derivative",
    "helmholtz_solve",
    "dealias",
    "nonlocal_term",
    "field_norm",
    "sobolev_norm",
    "product_ratio",
    "write_field_csv",
    "read_field_csv",
]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid with ``points`` nodes on a torus of length ``length``."""

    length: float
    points: int

    def __post_init__(self):
        if isinstance(self.points, bool) or int(self.points) != self.points:
            raise ConfigurationError("N must be an integer", field="N")
        if self.points % 2:
            raise ConfigurationError("N must be even (got %d)" % self.points, field="N")
        if self.points < 8:
            raise ConfigurationError("N must be at least 8 (got %d)" % self.points, field="N")
        if not np.isfinite(self.length) or self.length <= 0:
            raise ConfigurationError("L must be positive (got %r)" % self.length, field="L")
        object.__setattr__(self, "points", int(self.points))
        object.__setattr__(self, "length", float(self.length))

    @property
    def dx(self):
        return self.length / self.points

    @cached_property
    def modes(self):
        """Integer mode numbers ``m = -N/2 .. N/2-1`` in ascending order."""
        return np.arange(-(self.points // 2), self.points // 2)

    @cached_property
    def nodes(self):
        # (j - N/2) * dx keeps the grid exactly symmetric about x = 0
        return (np.arange(self.points) - self.points // 2) * self.dx

    @cached_property
    def wavenumbers(self):
        """Wavenumbers ``xi_m`` matching :attr:`modes`."""
        return 2.0 * np.pi * self.modes / self.length

    # rfft-ordered helpers used by the operators (m = 0 .. N/2, last entry is Nyquist)

    @cached_property
    def rfft_wavenumbers(self):
        return 2.0 * np.pi * np.arange(self.points // 2 + 1) / self.length

    @cached_property
    def rfft_weights(self):
        """Multiplicity of each rfft mode in the full two-sided spectrum."""
        w = np.full(self.points // 2 + 1, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        return w

    @cached_property
    def derivative_symbol(self):
        sym = 1j * self.rfft_wavenumbers
        sym[-1] = 0.0
        return sym

    @cached_property
    def helmholtz_symbol(self):
        return 1.0 / (1.0 + self.rfft_wavenumbers ** 2)

    @cached_property
    def nonlocal_symbol(self):
        """Symbol of ``d/dx (1 - d^2/dx^2)^{-1} (1 + d/dx)``."""
        d = self.derivative_symbol
        return d * self.helmholtz_symbol * (1.0 + d)

    @cached_property
    def dealias_cutoff(self):
        """Largest retained mode number under the 2/3 rule."""
        return self.points // 3

    @cached_property
    def dealias_mask(self):
        return np.arange(self.points // 2 + 1) <= self.dealias_cutoff

    def sobolev_weights(self, s):
        """``(1 + xi^2)^s`` on the rfft modes, evaluated in log space."""
        return np.exp(s * np.log1p(self.rfft_wavenumbers ** 2))

    def max_resolved_wavenumber(self):
        return 2.0 * np.pi * (self.points // 2) / self.length


def build_grid(L, N):
    """Return the periodic grid of length ``L`` with ``N`` nodes."""
    return Grid(L, N)


class Field:
    """Real samples of a function on a :class:`Grid`.

    Values are stored read-only; arithmetic returns new fields and is only
    defined between fields on identical grids.
    """

    __slots__ = ("grid", "values")
    __array_ufunc__ = None  # make numpy scalars defer to Field arithmetic

    def __init__(self, grid, values):
        values = np.array(values, dtype=float)
        if values.shape != (grid.points,):
            raise ValueError(
                "expected %d samples, got shape %s" % (grid.points, values.shape)
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        values.flags.writeable = False
        self.grid = grid
        self.values = values

    @classmethod
    def from_function(cls, grid, func):
        return cls(grid, func(grid.nodes))

    @classmethod
    def constant(cls, grid, c):
        return cls(grid, np.full(grid.points, float(c)))

    @classmethod
    def zeros(cls, grid):
        return cls.constant(grid, 0.0)

    def _check(self, other):
        if isinstance(other, Field):
            if other.grid != self.grid:
                raise ValueError("fields live on different grids")
            return other.values
        return other

    def __add__(self, other):
        return Field(self.grid, self.values + self._check(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Field(self.grid, self.values - self._check(other))

    def __rsub__(self, other):
        return Field(self.grid, self._check(other) - self.values)

    def __mul__(self, other):
        return Field(self.grid, self.values * self._check(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Field(self.grid, self.values / self._check(other))

    def __neg__(self):
        return Field(self.grid, -self.values)

    def __repr__(self):
        return "Field(L=%g, N=%d)" % (self.grid.length, self.grid.points)

    def mean(self):
        return float(np.mean(self.values))


@dataclass(frozen=True)
class Spectrum:
    """Two-sided Fourier coefficients ordered as ``grid.modes``."""

    grid: Grid
    coefficients: np.ndarray


def _phase(grid):
    # exp(+i xi_m L/2) = (-1)^m accounts for the grid starting at -L/2
    return np.where(grid.modes % 2 == 0, 1.0, -1.0)


def analysis(f):
    """Fourier coefficients of ``f``."""
    g = f.grid
    c = np.fft.fftshift(np.fft.fft(f.values)) / g.points
    return Spectrum(g, c * _phase(g))


def synthesis(spec):
    """Real field with the given coefficients (imaginary round-off is dropped)."""
    g = spec.grid
    c = np.fft.ifftshift(spec.coefficients * _phase(g))
    return Field(g, np.fft.ifft(c * g.points).real)


def _apply(f, symbol):
    g = f.grid
    return Field(g, np.fft.irfft(symbol * np.fft.rfft(f.values), n=g.points))


def derivative(f):
    """Spectral derivative ``d/dx``; the Nyquist mode is dropped."""
    return _apply(f, f.grid.derivative_symbol)


def helmholtz_solve(f):
    """Apply ``(1 - d^2/dx^2)^{-1}``, i.e. the multiplier ``1/(1 + xi^2)``."""
    return _apply(f, f.grid.helmholtz_symbol)


def dealias(f):
    """Zero all modes with ``|m| > N/3``."""
    return _apply(f, f.grid.dealias_mask.astype(float))


def nonlocal_term(u, dealias=True):
    """``d/dx (1 - d^2/dx^2)^{-1} (u^2 + (u^2)_x)``.

    With ``dealias`` the square is formed from the 2/3-truncated field and
    truncated again before the multiplier is applied.
    """
    g = u.grid
    uh = np.fft.rfft(u.values)
    if dealias:
        uh = uh * g.dealias_mask
    u_d = np.fft.irfft(uh, n=g.points)
    sq = np.fft.rfft(u_d * u_d)
    if dealias:
        sq = sq * g.dealias_mask
    return Field(g, np.fft.irfft(g.nonlocal_symbol * sq, n=g.points))


@dataclass(frozen=True)
class NormSpec:
    """Which norm to measure: ``"sobolev"`` (with order ``s``), ``"l2"`` or ``"sup"``."""

    kind: str
    s: float = 0.0

    def __post_init__(self):
        if self.kind not in ("sobolev", "l2", "sup"):
            raise ValueError("unknown norm kind %r" % self.kind)

    @classmethod
    def sobolev(cls, s):
        return cls("sobolev", float(s))


L2 = NormSpec("l2")
SUP = NormSpec("sup")


def _sobolev_sq(grid, values, s):
    c = np.fft.rfft(values) / grid.points
    power = grid.rfft_weights * (c.real ** 2 + c.imag ** 2)
    if s != 0:
        power = power * grid.sobolev_weights(s)
    return grid.length * float(np.sum(power))


def sobolev_norm(f, s):
    """``sqrt(L * sum_m (1 + xi_m^2)^s |c_m|^2)``."""
    # power-of-two rescaling: exact, and squaring can neither under- nor overflow
    peak = float(np.max(np.abs(f.values)))
    if peak == 0.0:
        return 0.0
    scale = math.ldexp(1.0, math.frexp(peak)[1])
    return scale * float(np.sqrt(_sobolev_sq(f.grid, f.values / scale, s)))


def field_norm(f, spec):
    if spec.kind == "sup":
        return float(np.max(np.abs(f.values)))
    if spec.kind == "l2":
        return sobolev_norm(f, 0.0)
    return sobolev_norm(f, spec.s)


def product_ratio(f, g, s):
    """Empirical constant in the Sobolev product estimate.

    Returns ``||fg||_{H^s} / (||f||_{H^s} ||g||_sup + ||g||_{H^s} ||f||_sup)``.
    This is a probe for reporting; no bound on it is assumed.
    """
    if s <= 0:
        raise DomainError("product_ratio needs s > 0 (got %r)" % s)
    denom = sobolev_norm(f, s) * field_norm(g, SUP) + sobolev_norm(g, s) * field_norm(f, SUP)
    if denom == 0:
        raise DomainError("product_ratio undefined: zero denominator")
    return sobolev_norm(f * g, s) / denom


def write_field_csv(f, path):
    """Write ``x,value`` rows at 17 significant digits."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "value"])
        for x, v in zip(f.grid.nodes, f.values):
            w.writerow(["%.17g" % x, "%.17g" % v])


def read_field_csv(path, L):
    """Inverse of :func:`write_field_csv`; the torus length must be supplied."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    values = [float(r[1]) for r in rows]
    return Field(Grid(L, len(values)), values)
