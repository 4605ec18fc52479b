"""JSON configuration documents for the command-line studies.

Every document is a JSON object whose ``"kind"`` names the study
(``experiment``, ``solver``, ``norms``, ``lemma`` or ``validate``). A
missing kind means ``experiment``. :func:`parse_config` reports every
problem it finds at once. :func:`serialize` is its exact inverse.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import SolverConfig
from .errors import ConfigurationError, ConfigValidationError
from .experiments import ExperimentConfig
from .packets import FamilyParams, family_initial, family_problems
from .spectral import Field, Grid

__all__ = [
    "ConfigParseError",
    "InitialSpec",
    "SolveJob",
    "NormsJob",
    "LemmaJob",
    "ValidateJob",
    "parse_config",
    "serialize",
    "to_document",
    "KINDS",
]


class ConfigParseError(ConfigurationError):
    """The document is not well-formed JSON."""

    def __init__(self, message, line, column):
        super().__init__("%s (line %d, column %d)" % (message, line, column))
        self.line = line
        self.column = column


@dataclass
class InitialSpec:
    """Initial datum: ``amplitude * cos(wavenumber * x) + offset`` or a packet family member."""

    type: str = "cosine"
    amplitude: float = 0.1
    wavenumber: float = 1.0
    offset: float = 0.0
    n: int = 16
    delta: float = 0.4
    s: float = 2.0
    omega: int = 0

    def problems(self):
        if self.type == "cosine":
            return []
        if self.type == "family":
            return ["initial." + p for p in family_problems(self.n, self.delta, self.s, self.omega)]
        return ["initial.type: must be 'cosine' or 'family' (got %r)" % (self.type,)]

    def build(self, grid):
        if self.type == "family":
            return family_initial(grid, FamilyParams(self.n, self.delta, self.s, self.omega))
        x = grid.nodes
        return Field(grid, self.amplitude * np.cos(self.wavenumber * x) + self.offset)


@dataclass
class SolveJob:
    L: float = 2 * math.pi
    N: int = 64
    initial: InitialSpec = field(default_factory=InitialSpec)
    solver: SolverConfig = field(default_factory=SolverConfig)

    def grid(self):
        return Grid(self.L, self.N)

    def problems(self):
        out = _grid_problems(self.L, self.N)
        return out + self.initial.problems() + ["solver." + p for p in self.solver.problems()]


@dataclass
class NormsJob:
    L: float = 2 * math.pi
    N: int = 64
    initial: InitialSpec = field(default_factory=InitialSpec)
    orders: tuple = (0.0, 1.0, 2.0)

    def __post_init__(self):
        self.orders = tuple(float(s) for s in self.orders)

    def grid(self):
        return Grid(self.L, self.N)

    def problems(self):
        return _grid_problems(self.L, self.N) + self.initial.problems()


@dataclass
class LemmaJob:
    delta: float = 0.5
    s_list: tuple = (0.0, 2.0)
    alpha_list: tuple = (0.0, math.pi / 4)
    n_list: tuple = (16, 32, 64, 128)
    carriers: tuple = ("cos",)

    def __post_init__(self):
        self.s_list = tuple(float(s) for s in self.s_list)
        self.alpha_list = tuple(float(a) for a in self.alpha_list)
        self.n_list = tuple(self.n_list)
        self.carriers = tuple(self.carriers)

    def problems(self):
        out = []
        if not 0 < self.delta < 1:
            out.append("delta: must lie in (0, 1) (got %r)" % (self.delta,))
        if any(s < 0 for s in self.s_list):
            out.append("s_list: orders must be nonnegative")
        if not self.n_list or any(not isinstance(n, int) or n < 1 for n in self.n_list):
            out.append("n_list: must be a nonempty list of positive integers")
        if any(c not in ("cos", "sin") for c in self.carriers):
            out.append("carriers: entries must be 'cos' or 'sin'")
        return out


@dataclass
class ValidateJob:
    amplitude: float = 0.1
    T: float = 1.0
    dt_list: tuple = (1e-2, 5e-3, 2.5e-3)
    N_list: tuple = (64, 128)

    def __post_init__(self):
        self.dt_list = tuple(float(d) for d in self.dt_list)
        self.N_list = tuple(self.N_list)

    def problems(self):
        out = []
        if len(self.dt_list) < 3:
            out.append("dt_list: need at least three steps")
        elif any(not math.isclose(a, 2 * b, rel_tol=1e-12) for a, b in zip(self.dt_list, self.dt_list[1:])):
            out.append("dt_list: must be a factor-2 ladder")
        if not self.T > 0:
            out.append("T: must be positive")
        for N in self.N_list:
            out.extend(_grid_problems(2 * math.pi, N))
        return out


def _grid_problems(L, N):
    out = []
    if not (isinstance(N, int) and N >= 8 and N % 2 == 0):
        out.append("N: must be an even integer >= 8 (got %r)" % (N,))
    if not (isinstance(L, (int, float)) and L > 0):
        out.append("L: must be positive (got %r)" % (L,))
    return out


KINDS = {
    "experiment": ExperimentConfig,
    "solver": SolveJob,
    "norms": NormsJob,
    "lemma": LemmaJob,
    "validate": ValidateJob,
}
_KIND_OF = {cls: kind for kind, cls in KINDS.items()}

_NUMBER = (int, float)


def _is_number(v):
    return isinstance(v, _NUMBER) and not isinstance(v, bool) and math.isfinite(v)


def _check_value(name, value, default, problems):
    """Type-check a scalar or list against its default's type."""
    if isinstance(default, bool):
        if not isinstance(value, bool):
            problems.append("%s: expected true/false (got %r)" % (name, value))
    elif isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            problems.append("%s: expected an integer (got %r)" % (name, value))
    elif isinstance(default, float) or default is None:
        if value is not None and not _is_number(value):
            problems.append("%s: expected a number (got %r)" % (name, value))
    elif isinstance(default, tuple):
        if not isinstance(value, list):
            problems.append("%s: expected a list (got %r)" % (name, value))
        elif default and isinstance(default[0], str):
            if not all(isinstance(v, str) for v in value):
                problems.append("%s: expected a list of strings" % name)
        elif default and isinstance(default[0], int) and not isinstance(default[0], bool):
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
                problems.append("%s: expected a list of integers" % name)
        elif not all(_is_number(v) for v in value):
            problems.append("%s: expected a list of numbers" % name)
    elif isinstance(default, str):
        if not isinstance(value, str):
            problems.append("%s: expected a string (got %r)" % (name, value))


def _build(cls, doc, prefix, problems):
    """Instantiate dataclass ``cls`` from ``doc``, collecting type problems."""
    if not isinstance(doc, dict):
        problems.append("%s: expected an object" % (prefix or "document"))
        return cls()
    template = cls()
    kwargs = {}
    names = set(template.__dataclass_fields__)
    for key, value in doc.items():
        name = prefix + key
        if key not in names:
            problems.append("%s: unknown field" % name)
            continue
        default = getattr(template, key)
        if isinstance(default, SolverConfig):
            kwargs[key] = _build(SolverConfig, value, name + ".", problems)
        elif isinstance(default, InitialSpec):
            kwargs[key] = _build(InitialSpec, value, name + ".", problems)
        elif key == "grid_override":
            if value is not None and not (
                isinstance(value, list) and len(value) == 2
                and _is_number(value[0]) and isinstance(value[1], int)
            ):
                problems.append("%s: expected null or [L, N]" % name)
            else:
                kwargs[key] = value
        else:
            n_before = len(problems)
            _check_value(name, value, default, problems)
            if len(problems) == n_before:
                kwargs[key] = float(value) if isinstance(default, float) and value is not None else value
    return cls(**kwargs)


def parse_config(text, expect=None):
    """Parse and validate a configuration document.

    Returns the config object for the document's kind. Raises
    :class:`ConfigParseError` for malformed JSON and
    :class:`ConfigValidationError` listing every violated constraint.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ConfigValidationError(["document: top level must be a JSON object"])
    doc = dict(doc)
    kind = doc.pop("kind", "experiment")
    if kind not in KINDS:
        raise ConfigValidationError(
            ["kind: must be one of %s (got %r)" % (sorted(KINDS), kind)]
        )
    if expect is not None and kind != expect:
        raise ConfigValidationError(["kind: expected %r for this command (got %r)" % (expect, kind)])
    problems = []
    try:
        cfg = _build(KINDS[kind], doc, "", problems)
    except (TypeError, ValueError) as exc:
        problems.append("document: %s" % exc)
        cfg = None
    if cfg is not None and not problems:
        problems.extend(cfg.problems())
    if problems:
        raise ConfigValidationError(problems)
    return cfg


def _plain(obj):
    if hasattr(obj, "__dataclass_fields__"):
        return {k: _plain(getattr(obj, k)) for k in obj.__dataclass_fields__}
    if isinstance(obj, tuple):
        return [_plain(v) for v in obj]
    return obj


def to_document(cfg):
    """JSON-ready dict (with ``kind``) for any configuration object."""
    doc = {"kind": _KIND_OF[type(cfg)]}
    doc.update(_plain(cfg))
    return doc


def serialize(cfg):
    return json.dumps(to_document(cfg), indent=2)
