"""Run configuration for the command-line front end.

A :class:`RunConfig` is a flat JSON object. Every field can be overridden by
a command-line flag; the config is validated in full before any computation.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import ConfigError
from .fileio import read_operator_csv
from .fock import FockState, TruncationConfig
from .functions import PhaseSpaceFunction, parse_function
from .measurement import make_rng
from .phase_space import GeneratingOperator, PhaseGrid
from .quantizer import QuantizerA, QuantizerWeyl

__all__ = ["RunConfig", "parse_generator", "parse_state"]

MAPS = ("a", "weyl")
AXES = ("position", "momentum")


def parse_generator(text: str, dim: int, tol: float = 1e-10) -> GeneratingOperator:
    """``fock:<n>``, ``weights:<t0>,<t1>,...`` (Fock-diagonal) or ``matrix:<csv path>``."""
    head, _, arg = text.partition(":")
    try:
        if head == "fock":
            n = int(arg)
            if not 0 <= n < dim:
                raise ValueError(f"level {n} outside the {dim}-level basis")
            return GeneratingOperator.fock_projector(n, dim)
        if head == "weights":
            w = np.array([float(x) for x in arg.split(",")])
            if w.size > dim:
                raise ValueError("more weights than basis levels")
            if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
                raise ValueError("weights must be nonnegative and sum to 1")
            return GeneratingOperator.fock_diagonal(w, dim)
        if head == "matrix":
            return GeneratingOperator(read_operator_csv(arg, dim), tol)
    except (ValueError, OSError) as exc:
        raise ConfigError(f"bad generating operator {text!r}: {exc}") from exc
    raise ConfigError(f"unknown generating operator {text!r}; use fock:, weights: or matrix:")


def parse_state(text: str, dim: int) -> FockState:
    """``fock:<n>``, ``amps:<a0>,<a1>,...`` (normalized here) or ``random:<seed>[:<levels>]``."""
    head, _, arg = text.partition(":")
    try:
        if head == "fock":
            n = int(arg)
            if not 0 <= n < dim:
                raise ValueError(f"level {n} outside the {dim}-level basis")
            return FockState.basis(n, dim)
        if head == "amps":
            amps = [complex(x.replace(" ", "")) for x in arg.split(",")]
            if len(amps) > dim or not any(amps):
                raise ValueError("need between 1 and dim amplitudes, not all zero")
            return FockState.from_amplitudes(amps, dim)
        if head == "random":
            parts = arg.split(":")
            levels = int(parts[1]) if len(parts) > 1 else min(dim, 8)
            if not 1 <= levels <= dim:
                raise ValueError("levels must lie in [1, dim]")
            return FockState.random(dim, make_rng(int(parts[0])), levels)
    except ValueError as exc:
        raise ConfigError(f"bad state {text!r}: {exc}") from exc
    raise ConfigError(f"unknown state {text!r}; use fock:, amps: or random:")


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs; see the README for the field reference.

    ``grid`` is a :class:`PhaseGrid` dictionary or None for the command's
    default (a covering Gauss-Legendre grid for quantization, the +-8 midpoint
    grid for fields).
    """

    dim: int = 64
    map: str = "a"
    generator: str = "fock:0"
    function: str | None = None
    state: str = "fock:0"
    grid: dict | None = None
    tail_tol: float = 1e-6
    eig_tol: float = 1e-10
    effect_tol: float = 1e-8
    max_degree: int = 4
    seed: int = 0
    n: int = 100_000
    k_max: int = 3
    axis: str = "position"
    bins: list | None = None
    output: str = "out"
    checks: list | None = field(default=None)

    @classmethod
    def fields(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls)]

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        unknown = set(d) - set(cls.fields())
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            d = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(d)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def with_overrides(self, **kw) -> "RunConfig":
        """Replace the fields given with a value other than None."""
        return dataclasses.replace(self, **{k: v for k, v in kw.items() if v is not None})

    # validation and builders ---------------------------------------------

    def validate(self) -> "RunConfig":
        if not isinstance(self.dim, int) or self.dim < 2:
            raise ConfigError(f"dim must be an integer >= 2, got {self.dim!r}")
        if self.map not in MAPS:
            raise ConfigError(f"map must be one of {MAPS}, got {self.map!r}")
        if self.axis not in AXES:
            raise ConfigError(f"axis must be one of {AXES}, got {self.axis!r}")
        for name in ("tail_tol", "eig_tol", "effect_tol"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and 0 <= v < 1):
                raise ConfigError(f"{name} must lie in [0, 1), got {v!r}")
        for name, lo in (("max_degree", 0), ("seed", 0), ("n", 1), ("k_max", 1)):
            v = getattr(self, name)
            if not isinstance(v, int) or v < lo:
                raise ConfigError(f"{name} must be an integer >= {lo}, got {v!r}")
        if self.bins is not None:
            e = np.asarray(self.bins, dtype=float)
            if e.ndim != 1 or e.size < 1 or not np.all(np.isfinite(e)) or np.any(np.diff(e) <= 0):
                raise ConfigError("bins must be a nonempty, finite, strictly increasing list")
        if self.checks is not None and not all(isinstance(c, str) for c in self.checks):
            raise ConfigError("checks must be a list of check names")
        self.truncation()
        self.phase_grid("quantize")
        self.generating_operator()
        self.build_state()
        if self.function is not None:
            self.build_function()
        return self

    def truncation(self) -> TruncationConfig:
        try:
            return TruncationConfig(self.dim, self.tail_tol, self.eig_tol)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def phase_grid(self, purpose: str) -> PhaseGrid:
        """The configured grid, or the default for ``purpose`` ('quantize' or 'field')."""
        if self.grid is not None:
            try:
                return PhaseGrid.from_dict(self.grid)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad grid: {exc}") from exc
        return PhaseGrid.covering(self.dim) if purpose == "quantize" else PhaseGrid()

    def generating_operator(self) -> GeneratingOperator:
        return parse_generator(self.generator, self.dim, self.eig_tol)

    def build_state(self) -> FockState:
        return parse_state(self.state, self.dim)

    def build_function(self) -> PhaseSpaceFunction:
        if self.function is None:
            raise ConfigError("this command needs a function (--function)")
        return parse_function(self.function)

    def quantizer(self) -> QuantizerA | QuantizerWeyl:
        grid = self.phase_grid("quantize")
        if self.map == "weyl":
            return QuantizerWeyl(self.dim, grid, self.tail_tol, max_degree=self.max_degree)
        return QuantizerA(self.generating_operator(), grid, self.tail_tol, max_degree=self.max_degree)
