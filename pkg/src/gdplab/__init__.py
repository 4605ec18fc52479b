"""Pseudo-spectral laboratory for the generalized Degasperis-Procesi equation.

The package solves

    u_t - 2 u u_x = d/dx (1 - d^2/dx^2)^{-1} (u^2 + (u^2)_x)

on a large periodic box. It builds two families of wave-packet solutions
whose initial data converge in H^s while the solutions stay a fixed
distance apart, which shows that the solution map is not uniformly
continuous.
"""
from .config import parse_config, serialize
from .dynamics import (
    SolverConfig,
    Trajectory,
    growth_factor,
    mean_drift,
    rhs,
    rk4_step,
    solve,
)
from .errors import (
    BlowUpError,
    ConfigurationError,
    ConfigValidationError,
    DomainError,
    ResourceError,
    SampleLookupError,
)
from .experiments import (
    EpsilonBudget,
    ExperimentConfig,
    ExperimentReport,
    convergence_study,
    epsilon_bounds,
    grid_policy,
    lemma_ratio,
    nonuniform_run,
)
from .packets import (
    CUTOFF,
    PLATEAU,
    BumpSpec,
    FamilyParams,
    approximate_solution,
    bump,
    bump_norm,
    family_initial,
    high_freq_packet,
    low_freq_initial,
)
from .reporting import emit_report
from .spectral import (
    L2,
    SUP,
    Field,
    Grid,
    NormSpec,
    Spectrum,
    analysis,
    build_grid,
    derivative,
    field_norm,
    helmholtz_solve,
    nonlocal_term,
    product_ratio,
    sobolev_norm,
    synthesis,
)

__version__ = "0.1.0"

__all__ = [
    "analysis",
    "approximate_solution",
    "BlowUpError",
    "build_grid",
    "bump",
    "bump_norm",
    "BumpSpec",
    "ConfigurationError",
    "ConfigValidationError",
    "convergence_study",
    "CUTOFF",
    "derivative",
    "DomainError",
    "emit_report",
    "epsilon_bounds",
    "EpsilonBudget",
    "ExperimentConfig",
    "ExperimentReport",
    "family_initial",
    "FamilyParams",
    "Field",
    "field_norm",
    "Grid",
    "grid_policy",
    "growth_factor",
    "helmholtz_solve",
    "high_freq_packet",
    "L2",
    "lemma_ratio",
    "low_freq_initial",
    "mean_drift",
    "nonlocal_term",
    "nonuniform_run",
    "NormSpec",
    "parse_config",
    "PLATEAU",
    "product_ratio",
    "ResourceError",
    "rhs",
    "rk4_step",
    "SampleLookupError",
    "serialize",
    "sobolev_norm",
    "solve",
    "SolverConfig",
    "Spectrum",
    "SUP",
    "synthesis",
    "Trajectory",
]
