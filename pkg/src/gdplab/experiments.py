"""Experiments showing that the data-to-solution map is not uniformly continuous.

For each carrier frequency ``n`` two solutions ``V_0`` and ``V_1`` are
computed from the packet data of :mod:`gdplab.packets`. Their initial
distance ``d0`` tends to zero as ``n`` grows. Their distance at time ``t``
instead approaches ``sqrt(2) * ||PLATEAU||_{L2} * |sin t|``.

The module also contains the finite-``n`` study of the packet norm
asymptotics (:func:`lemma_ratio`) and the solver self-convergence study
(:func:`convergence_study`).
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .dynamics import SolverConfig, Trajectory, growth_factor, mean_drift, solve
from .errors import BlowUpError, ConfigurationError, ResourceError
from .packets import (
    CUTOFF,
    PLATEAU,
    FamilyParams,
    approximate_solution,
    bump_norm,
    family_initial,
    family_problems,
    low_freq_initial,
    modulated_bump,
)
from .spectral import L2, Field, Grid, field_norm, sobolev_norm

__all__ = [
    "ExperimentConfig",
    "EpsilonBudget",
    "NRecord",
    "ExperimentReport",
    "ConvergenceReport",
    "grid_policy",
    "lemma_ratio",
    "epsilon_bounds",
    "theory_curve",
    "nonuniform_run",
    "convergence_study",
    "loglog_slope",
    "ladder_orders",
]


MAX_POINTS = 2 ** 22
POLICY_MAX_DT = 5e-4


def _next_pow2(x):
    return 1 << max(0, math.ceil(math.log2(x)))


def grid_policy(n, delta):
    """Torus length, node count and time step for carrier ``n``.

    ``L`` is the smallest power of two >= max(64, 10 n^delta), which keeps the
    CUTOFF envelope (radius 4 n^delta) well inside the box. ``N`` is the
    smallest power of two >= 1.5 n L / pi, so the carrier sits inside the
    2/3-dealiased band. The step is the solver default evaluated with the
    bound sup|u0| <= 2/n that every family datum satisfies.
    """
    if n < 1:
        raise ConfigurationError("n must be >= 1 (got %r)" % (n,), field="n")
    if not 0 < delta < 1:
        raise ConfigurationError("delta must lie in (0, 1) (got %r)" % (delta,), field="delta")
    L = float(_next_pow2(max(64.0, 10.0 * n ** delta)))
    N = _next_pow2(1.5 * n * L / math.pi)
    if N > MAX_POINTS:
        raise ResourceError(
            "n = %d needs N = %d > 2^22 grid points; use a smaller n" % (n, N)
        )
    dt = min(POLICY_MAX_DT, 0.25 * (L / N) / (2.0 * 2.0 / n))
    return L, N, dt


def _policy_grid(n, delta, override=None):
    if override is not None:
        L, N = override
        return Grid(L, N), POLICY_MAX_DT
    L, N, dt = grid_policy(n, delta)
    return Grid(L, N), dt


def lemma_ratio(n, delta, s, alpha=0.0, carrier="cos", grid=None):
    """``n^(-delta/2-s) ||PLATEAU(x/n^delta) cos(n x - alpha)||_{H^s}`` on the policy grid.

    ``carrier="sin"`` uses the sine instead. The large-``n`` limit is
    ``||PLATEAU||_{L2} / sqrt(2)``.
    """
    fn = {"cos": np.cos, "sin": np.sin}[carrier]
    if grid is None:
        grid, _ = _policy_grid(n, delta)
    f = modulated_bump(grid, n, delta, phase=-alpha, carrier=fn)
    return n ** (-delta / 2 - s) * sobolev_norm(f, s)


@dataclass(frozen=True)
class EpsilonBudget:
    eps: float
    eps_prime: float


def epsilon_bounds(n, delta):
    """``eps = (n^-delta + n^(delta-1))^(1/2)`` and ``eps' = eps + n^(delta/2 - 1)``."""
    eps = math.sqrt(n ** (-delta) + n ** (delta - 1))
    return EpsilonBudget(eps, eps + n ** (delta / 2 - 1))


def theory_curve(t, phi2):
    """Limit separation ``sqrt(2) * phi2 * |sin t|``."""
    return math.sqrt(2.0) * phi2 * abs(math.sin(t))


@dataclass
class ExperimentConfig:
    """Parameters of the non-uniform dependence experiment.

    ``solver`` is a template: its horizon and record times are replaced by
    ``max(sample_times)`` and ``sample_times``, and a ``dt`` of ``None``
    means the :func:`grid_policy` step.
    """

    s: float = 2.0
    delta: float = 0.4
    n_list: tuple = (16, 32, 64, 128)
    sample_times: tuple = (0.25, 0.5, 0.75, 1.0)
    solver: SolverConfig = field(default_factory=SolverConfig)
    grid_override: tuple | None = None
    alpha: float = 0.0

    def __post_init__(self):
        self.n_list = tuple(self.n_list)
        self.sample_times = tuple(float(t) for t in self.sample_times)
        if self.grid_override is not None:
            self.grid_override = tuple(self.grid_override)

    def problems(self):
        out = []
        if not self.n_list:
            out.append("n_list: must not be empty")
        if list(self.n_list) != sorted(set(self.n_list)):
            out.append("n_list: must be strictly increasing")
        seen = set()
        for n in self.n_list or (1,):
            for p in family_problems(n, self.delta, self.s):
                if p not in seen:
                    seen.add(p)
                    out.append(p)
        if not self.sample_times:
            out.append("sample_times: must not be empty")
        elif any(not (0.0 <= t <= 1.0) for t in self.sample_times):
            out.append("sample_times: every time must lie in [0, 1]")
        elif list(self.sample_times) != sorted(set(self.sample_times)):
            out.append("sample_times: must be strictly increasing")
        if self.grid_override is not None and len(self.grid_override) != 2:
            out.append("grid_override: must be a pair (L, N)")
        out.extend("solver." + p for p in self.solver.problems())
        return out

    def validate(self):
        problems = self.problems()
        if problems:
            raise ConfigurationError("; ".join(problems), field=problems[0].split(":")[0])
        return self

    @property
    def horizon(self):
        return max(self.sample_times)


@dataclass
class NRecord:
    """Everything measured for one carrier frequency ``n``."""

    n: int
    L: float
    N: int
    dt: float
    d0: float
    d: dict
    approx_gap: dict
    lemma_ratio: float
    budget: EpsilonBudget
    growth: dict
    drift: dict
    wall_clock: float = 0.0


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    phi2: float
    phi2_cutoff: float
    records: list
    timestamp: str = ""

    def theory(self, t):
        return theory_curve(t, self.phi2)

    def column(self, name):
        return [getattr(r, name) for r in self.records]

    @property
    def n_values(self):
        return [r.n for r in self.records]

    def d0_slope(self):
        return loglog_slope(self.n_values, self.column("d0"))


def loglog_slope(xs, ys):
    """Least-squares slope of ``log y`` against ``log x``."""
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def _zero_trajectory(u0, times):
    return Trajectory(
        [(t, u0) for t in times],
        [{"t": t, "mean": 0.0, "norms": {}} for t in times],
        mean0=0.0,
    )


def _solve_task(task):
    start = time.perf_counter()
    traj = _solve_one(*task)
    return traj, time.perf_counter() - start


def _solve_one(n, omega, kind, cfg):
    try:
        return _solve_family(n, omega, kind, cfg)
    except (BlowUpError, ConfigurationError) as exc:
        msg = "[n=%d, omega=%d, %s] %s" % (n, omega, kind, exc)
        if isinstance(exc, BlowUpError):
            raise BlowUpError(msg, last_time=exc.last_time) from exc
        raise ConfigurationError(msg, field=exc.field) from exc


def _solve_family(n, omega, kind, cfg):
    grid, dt = _policy_grid(n, cfg.delta, cfg.grid_override)
    p = FamilyParams(n, cfg.delta, cfg.s, omega)
    u0 = family_initial(grid, p) if kind == "full" else low_freq_initial(grid, p)
    times = sorted({0.0, *cfg.sample_times})
    if cfg.horizon == 0.0:
        return _zero_trajectory(u0, [0.0]) if kind == "low" else Trajectory(
            [(0.0, u0)], [{"t": 0.0, "mean": u0.mean(), "norms": {}}], mean0=u0.mean()
        )
    if kind == "low" and omega == 0:
        # zero is an exact equilibrium
        return _zero_trajectory(u0, sorted({*times, cfg.horizon}))
    scfg = replace(
        cfg.solver,
        T=cfg.horizon,
        dt=cfg.solver.dt if cfg.solver.dt is not None else dt,
        record_times=tuple(times),
        norm_orders=tuple(sorted({*cfg.solver.norm_orders, cfg.s})),
    )
    return solve(u0, scfg)


def _map(tasks, workers):
    if workers and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            yield from zip(tasks, pool.map(_solve_task, tasks))
    else:
        for task in tasks:
            yield task, _solve_task(task)


def nonuniform_run(cfg, workers=1, progress=None):
    """Solve both families for every ``n`` and measure their separation.

    ``progress`` is called with ``(n, omega, kind)`` as each solve finishes.
    Solver and grid errors propagate, annotated with ``(n, omega)``.
    """
    cfg.validate()
    s = cfg.s
    phi2 = bump_norm(PLATEAU)
    phi2_cut = bump_norm(CUTOFF)
    tasks = [
        (n, omega, kind, cfg)
        for n in cfg.n_list
        for omega, kind in ((0, "full"), (1, "full"), (1, "low"), (0, "low"))
    ]
    trajs = {}
    clock = dict.fromkeys(cfg.n_list, 0.0)
    for (n, omega, kind, _), (traj, elapsed) in _map(tasks, workers):
        trajs[n, omega, kind] = traj
        clock[n] += elapsed
        if progress is not None:
            progress(n, omega, kind)

    records = []
    for n in cfg.n_list:
        grid, dt = _policy_grid(n, cfg.delta, cfg.grid_override)
        p1 = FamilyParams(n, cfg.delta, s, 1)
        p0 = p1.with_omega(0)
        V = {0: trajs[n, 0, "full"], 1: trajs[n, 1, "full"]}
        low = {0: trajs[n, 0, "low"], 1: trajs[n, 1, "low"]}
        d0 = sobolev_norm(V[1].at(0.0) - V[0].at(0.0), s)
        d = {t: sobolev_norm(V[1].at(t) - V[0].at(t), s) for t in cfg.sample_times}
        gap = {}
        for omega, p in ((0, p0), (1, p1)):
            gap[omega] = {}
            for t in cfg.sample_times:
                w = approximate_solution(grid, p, low[omega], t) - V[omega].at(t)
                gap[omega][t] = {"H^s-1": sobolev_norm(w, s - 1), "H^s": sobolev_norm(w, s)}
        records.append(
            NRecord(
                n=n,
                L=grid.length,
                N=grid.points,
                dt=cfg.solver.dt if cfg.solver.dt is not None else dt,
                d0=d0,
                d=d,
                approx_gap=gap,
                lemma_ratio=lemma_ratio(n, cfg.delta, s, cfg.alpha, grid=grid),
                budget=epsilon_bounds(n, cfg.delta),
                growth={o: growth_factor(V[o], s) for o in (0, 1)},
                drift={o: mean_drift(V[o]) for o in (0, 1)},
                wall_clock=clock[n],
            )
        )
    return ExperimentReport(cfg, phi2, phi2_cut, records)


def ladder_orders(diffs):
    """Observed orders ``log2(e_k / e_{k+1})`` and a status for a factor-2 ladder.

    Status is ``"exact"`` when every difference vanishes, ``"non-monotone"``
    when the differences fail to shrink, else ``"ok"``.
    """
    if all(e == 0 for e in diffs):
        return [], "exact"
    orders = [
        math.log2(a / b) if a > 0 and b > 0 else float("nan")
        for a, b in zip(diffs, diffs[1:])
    ]
    monotone = all(a > b for a, b in zip(diffs, diffs[1:]))
    return orders, "ok" if monotone else "non-monotone"


@dataclass
class ConvergenceReport:
    """Outcome of :func:`convergence_study`; ``passed`` summarizes the checks."""

    dt_list: list
    differences: list
    orders: list
    status: str
    N_list: list
    spatial_difference: float
    tail_fraction: float
    order_range: tuple = (3.7, 4.3)
    spatial_tol: float = 1e-8
    tail_tol: float = 1e-10

    @property
    def order(self):
        return self.orders[-1] if self.orders else float("nan")

    @property
    def passed(self):
        if self.status == "exact":
            return True
        if self.status != "ok":
            return False
        lo, hi = self.order_range
        return (
            lo <= self.order <= hi
            and self.spatial_difference <= self.spatial_tol
            and self.tail_fraction <= self.tail_tol
        )


def convergence_study(u0, dt_list=(1e-2, 5e-3, 2.5e-3), N_list=(64, 128), T=1.0,
                      L=2 * math.pi):
    """Richardson self-convergence in time and resolution check in space.

    ``u0`` is a callable of ``x``. Successive final-state differences for the
    factor-two ``dt`` ladder give the temporal order. The spatial check
    compares final states across ``N_list`` on shared nodes and measures the
    fraction of energy above the 2/3 band. Failures are reported through
    ``status``/``passed`` rather than raised.
    """
    dt_list = list(dt_list)
    if len(dt_list) < 3:
        raise ConfigurationError("need at least three time steps", field="dt_list")
    for a, b in zip(dt_list, dt_list[1:]):
        if not math.isclose(a, 2 * b, rel_tol=1e-12):
            raise ConfigurationError("dt_list must be a factor-2 ladder", field="dt_list")

    grid = Grid(L, min(N_list))
    finals = [
        solve(Field.from_function(grid, u0), SolverConfig(T=T, dt=dt)).final
        for dt in dt_list
    ]
    diffs = [field_norm(a - b, L2) for a, b in zip(finals, finals[1:])]
    orders, status = ladder_orders(diffs)

    spatial = []
    for N in sorted(N_list):
        g = Grid(L, N)
        spatial.append(solve(Field.from_function(g, u0), SolverConfig(T=T, dt=dt_list[-1])).final)
    coarse = spatial[0]
    worst = 0.0
    for fine in spatial[1:]:
        step = fine.grid.points // coarse.grid.points
        sub = Field(coarse.grid, fine.values[::step])
        worst = max(worst, field_norm(sub - coarse, L2))
    fine = spatial[-1]
    c = np.abs(np.fft.rfft(fine.values)) ** 2 * fine.grid.rfft_weights
    total = float(np.sum(c))
    tail = float(np.sum(c[~fine.grid.dealias_mask])) / total if total > 0 else 0.0
    return ConvergenceReport(dt_list, diffs, orders, status, sorted(N_list), worst, tail)
