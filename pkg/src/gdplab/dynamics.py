"""Time integration of the generalized Degasperis-Procesi equation

    u_t - 2 u u_x = d/dx (1 - d^2/dx^2)^{-1} (u^2 + (u^2)_x)

on a periodic grid, by the pseudo-spectral method with classical RK4.

Every term on the right is an exact x-derivative, so the spatial mean of
``u`` is conserved; the solver reports its drift as a diagnostic.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import BlowUpError, ConfigurationError, DomainError, SampleLookupError
from .spectral import Field, sobolev_norm

__all__ = [
    "SolverConfig",
    "Trajectory",
    "default_dt",
    "rhs",
    "rk4_step",
    "solve",
    "mean_drift",
    "growth_factor",
    "write_trajectory_csv",
    "write_diagnostics_csv",
]

MAX_DEFAULT_DT = 5e-4


def _rhs_hat(grid, uh, dealias):
    """rfft of ``2 u u_x + nonlocal(u)`` given the rfft ``uh`` of ``u``."""
    n = grid.points
    if dealias:
        uh = uh * grid.dealias_mask
    u = np.fft.irfft(uh, n=n)
    ux = np.fft.irfft(grid.derivative_symbol * uh, n=n)
    out = 2.0 * np.fft.rfft(u * ux) + grid.nonlocal_symbol * np.fft.rfft(u * u)
    if dealias:
        out *= grid.dealias_mask
    return out


def _rk4_hat(grid, uh, dt, dealias):
    k1 = _rhs_hat(grid, uh, dealias)
    k2 = _rhs_hat(grid, uh + 0.5 * dt * k1, dealias)
    k3 = _rhs_hat(grid, uh + 0.5 * dt * k2, dealias)
    k4 = _rhs_hat(grid, uh + dt * k3, dealias)
    return uh + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rhs(u, dealias=True):
    """Time derivative ``u_t = 2 u u_x + d/dx (1 - d^2/dx^2)^{-1} (u^2 + (u^2)_x)``."""
    g = u.grid
    return Field(g, np.fft.irfft(_rhs_hat(g, np.fft.rfft(u.values), dealias), n=g.points))


def rk4_step(u, dt, dealias=True):
    """Advance ``u`` by one classical Runge-Kutta step of size ``dt``."""
    if dt <= 0:
        raise ConfigurationError("dt must be positive", field="dt")
    g = u.grid
    with np.errstate(over="ignore", invalid="ignore"):
        uh = _rk4_hat(g, np.fft.rfft(u.values), dt, dealias)
    if not np.all(np.isfinite(uh)):
        raise BlowUpError("non-finite state after RK4 step", last_time=0.0)
    return Field(g, np.fft.irfft(uh, n=g.points))


def default_dt(u0):
    """Advection-limited step: ``min(5e-4, 0.25 dx / max(1e-6, 2 sup|u0|))``."""
    speed = max(1e-6, 2.0 * float(np.max(np.abs(u0.values))))
    return min(MAX_DEFAULT_DT, 0.25 * u0.grid.dx / speed)


@dataclass
class SolverConfig:
    """Fixed-step RK4 settings.

    ``dt=None`` selects :func:`default_dt` from the initial datum. The state
    is always recorded at ``t = 0`` and ``t = T`` in addition to
    ``record_times``.
    """

    T: float = 1.0
    dt: float | None = None
    dealias: bool = True
    record_times: tuple = ()
    norm_orders: tuple = ()

    def __post_init__(self):
        self.record_times = tuple(float(t) for t in self.record_times)
        self.norm_orders = tuple(float(s) for s in self.norm_orders)

    def problems(self):
        out = []
        if not (isinstance(self.T, (int, float)) and math.isfinite(self.T) and self.T > 0):
            out.append("T: horizon must be a positive number (got %r)" % (self.T,))
        if self.dt is not None:
            if not (math.isfinite(self.dt) and self.dt > 0):
                out.append("dt: step must be positive (got %r)" % (self.dt,))
            elif not out and self.dt > self.T:
                out.append("dt: step %g exceeds the horizon T = %g" % (self.dt, self.T))
        rt = list(self.record_times)
        if rt != sorted(rt):
            out.append("record_times: must be sorted ascending")
        if rt and (rt[0] < 0 or (not out and rt[-1] > self.T)):
            out.append("record_times: must lie in [0, T]")
        return out

    def validate(self):
        problems = self.problems()
        if problems:
            raise ConfigurationError("; ".join(problems), field=problems[0].split(":")[0])
        return self


@dataclass
class Trajectory:
    """Recorded states ``(t, u)`` with per-sample diagnostics."""

    samples: list
    diagnostics: list
    mean0: float
    dt: float = float("nan")
    steps: int = 0

    @property
    def times(self):
        return [t for t, _ in self.samples]

    def at(self, t, tol=1e-12):
        """The recorded state at time ``t``; no interpolation is attempted."""
        for ts, u in self.samples:
            if abs(ts - t) <= tol * max(1.0, abs(t)):
                return u
        raise SampleLookupError("t = %r is not a recorded sample (have %s)" % (t, self.times))

    @property
    def final(self):
        return self.samples[-1][1]


def _diagnostics(t, u, orders):
    return {
        "t": t,
        "mean": u.mean(),
        "norms": {s: sobolev_norm(u, s) for s in orders},
    }


def _plan(gap, dt):
    """Number of full steps and the trailing partial step covering ``gap``."""
    ratio = gap / dt
    k = round(ratio)
    if abs(ratio - k) <= 1e-9 * max(1.0, ratio):
        return int(k), 0.0
    k = int(math.floor(ratio))
    return k, gap - k * dt


def solve(u0, cfg):
    """March ``u0`` to ``cfg.T`` with fixed-step RK4.

    The final step before every record time is shortened so the state is
    sampled exactly there. Raises :class:`BlowUpError` (with the last finite
    time) if the state stops being finite.
    """
    cfg.validate()
    g = u0.grid
    dt = cfg.dt if cfg.dt is not None else default_dt(u0)
    targets = sorted({0.0, float(cfg.T), *cfg.record_times})

    samples = [(0.0, u0)]
    diags = [_diagnostics(0.0, u0, cfg.norm_orders)]
    uh = np.fft.rfft(u0.values)
    t = 0.0
    steps = 0
    for target in targets[1:]:
        nfull, rem = _plan(target - t, dt)
        for h in [dt] * nfull + ([rem] if rem > 0 else []):
            with np.errstate(over="ignore", invalid="ignore"):
                new = _rk4_hat(g, uh, h, cfg.dealias)
            if not np.all(np.isfinite(new)):
                raise BlowUpError(
                    "solution blew up after t = %.6g" % t, last_time=t
                )
            uh = new
            t += h
            steps += 1
        t = target
        u = Field(g, np.fft.irfft(uh, n=g.points))
        samples.append((t, u))
        diags.append(_diagnostics(t, u, cfg.norm_orders))
    return Trajectory(samples, diags, mean0=u0.mean(), dt=dt, steps=steps)


def mean_drift(traj):
    """Largest deviation of the spatial mean from its initial value."""
    return max(abs(d["mean"] - traj.mean0) for d in traj.diagnostics)


def growth_factor(traj, s):
    """``max_t ||u(t)||_{H^s} / ||u(0)||_{H^s}`` over the recorded samples."""
    s = float(s)
    if all(s in d["norms"] for d in traj.diagnostics):
        norms = [d["norms"][s] for d in traj.diagnostics]
    else:
        norms = [sobolev_norm(u, s) for _, u in traj.samples]
    if norms[0] == 0:
        raise DomainError("growth factor undefined for zero initial data")
    return max(norms) / norms[0]


def _writer(dest, rows):
    if hasattr(dest, "write"):
        csv.writer(dest, lineterminator="\n").writerows(rows)
        return
    with open(dest, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def write_trajectory_csv(traj, dest):
    """Long-form ``t,x,u`` table at 17 significant digits (path or text stream)."""
    rows = [["t", "x", "u"]]
    for t, u in traj.samples:
        rows.extend(["%.17g" % t, "%.17g" % x, "%.17g" % v] for x, v in zip(u.grid.nodes, u.values))
    _writer(dest, rows)


def write_diagnostics_csv(traj, dest):
    orders = sorted(traj.diagnostics[0]["norms"])
    rows = [["t", "mean"] + ["H^%g" % s for s in orders]]
    for d in traj.diagnostics:
        rows.append(
            ["%.17g" % d["t"], "%.17g" % d["mean"]] + ["%.17g" % d["norms"][s] for s in orders]
        )
    _writer(dest, rows)
