"""Classical phase-space variables f(q, p) and their quadrature rules.

Every function knows how to produce a quadrature rule ``(q, p, w, values)``
covering its support inside a :class:`PhaseGrid`. Indicators get rules
adapted to their region (tensor panels aligned with rectangle edges, rotated
frames for half-planes, polar coordinates for sectors and discs), so the
integrand is smooth on every panel and Gauss-Legendre converges
exponentially. A uniform grid would leave an O(h) error at each edge.
"""
from __future__ import annotations

import math
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ._numerics import composite_gauss_legendre
from .borel import BorelSet1D
from .exceptions import ConfigError, UnboundedFunctionError
from .phase_space import PhaseGrid, PhasePoint

__all__ = [
    "PhaseSpaceFunction",
    "Monomial",
    "Indicator",
    "ArrivalTime",
    "GridSampled",
    "Rectangle",
    "HalfPlane",
    "Sector",
    "Disc",
    "position_question",
    "momentum_question",
    "arrival_time_question",
    "parse_function",
]

TWO_PI = 2.0 * math.pi


def _tensor(q, wq, p, wp):
    qq, pp = np.meshgrid(q, p, indexing="ij")
    return qq.ravel(), pp.ravel(), np.outer(wq, wp).ravel()


def _empty_rule():
    e = np.empty(0)
    return e, e, e


def _fmt(v: float) -> str:
    return repr(float(v))


# regions -------------------------------------------------------------------

class Region(ABC):
    @abstractmethod
    def contains(self, q, p): ...

    @abstractmethod
    def rule(self, grid: PhaseGrid):
        """Quadrature nodes ``(q, p, w)`` covering the region inside ``grid``."""

    @abstractmethod
    def translated(self, dq: float, dp: float) -> "Region": ...

    def complement(self) -> "Region":
        raise NotImplementedError(f"{type(self).__name__} has no closed-form complement")

    def spec(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Rectangle(Region):
    """Product set B_q x B_p."""

    q_set: BorelSet1D
    p_set: BorelSet1D

    def contains(self, q, p):
        return self.q_set.contains(q) & self.p_set.contains(p)

    def rule(self, grid):
        parts = []
        for a, b in self.q_set.clipped(grid.q_min, grid.q_max):
            q, wq = composite_gauss_legendre(a, b, grid.density)
            for c, d in self.p_set.clipped(grid.p_min, grid.p_max):
                p, wp = composite_gauss_legendre(c, d, grid.density)
                parts.append(_tensor(q, wq, p, wp))
        if not parts:
            return _empty_rule()
        return tuple(np.concatenate(x) for x in zip(*parts))

    def translated(self, dq, dp):
        return Rectangle(self.q_set.shifted(dq), self.p_set.shifted(dp))

    def complement(self):
        real = BorelSet1D.real_line()
        if self.p_set == real:
            return Rectangle(self.q_set.complement(), real)
        if self.q_set == real:
            return Rectangle(real, self.p_set.complement())
        return super().complement()

    def spec(self):
        return f"rect:{self.q_set}x{self.p_set}"


@dataclass(frozen=True)
class HalfPlane(Region):
    """Points with q cos(angle) + p sin(angle) >= offset."""

    angle: float
    offset: float = 0.0

    def _frame(self):
        n = np.array([math.cos(self.angle), math.sin(self.angle)])
        t = np.array([-n[1], n[0]])
        return n, t

    def contains(self, q, p):
        n, _ = self._frame()
        return np.asarray(q) * n[0] + np.asarray(p) * n[1] >= self.offset

    def rule(self, grid):
        n, t = self._frame()
        corners = np.array(grid.corners())
        u_lo, u_hi = max(self.offset, (corners @ n).min()), (corners @ n).max()
        v_lo, v_hi = (corners @ t).min(), (corners @ t).max()
        u, wu = composite_gauss_legendre(u_lo, u_hi, grid.density)
        v, wv = composite_gauss_legendre(v_lo, v_hi, grid.density)
        uu, vv, w = _tensor(u, wu, v, wv)
        return uu * n[0] + vv * t[0], uu * n[1] + vv * t[1], w

    def translated(self, dq, dp):
        n, _ = self._frame()
        return HalfPlane(self.angle, self.offset + dq * n[0] + dp * n[1])

    def complement(self):
        return HalfPlane(self.angle + math.pi, -self.offset)

    def spec(self):
        return f"halfplane:{_fmt(math.degrees(self.angle))}:{_fmt(self.offset)}"


def _farthest(apex, grid, th_lo, th_hi) -> float:
    # largest distance from apex to the part of the grid box seen within the angle range
    qs = np.linspace(grid.q_min, grid.q_max, 801)
    ps = np.linspace(grid.p_min, grid.p_max, 801)
    edge = np.concatenate([
        np.stack([qs, np.full_like(qs, grid.p_min)]), np.stack([qs, np.full_like(qs, grid.p_max)]),
        np.stack([np.full_like(ps, grid.q_min), ps]), np.stack([np.full_like(ps, grid.q_max), ps]),
    ], axis=1)
    dq, dp = edge[0] - apex[0], edge[1] - apex[1]
    ang = np.mod(np.arctan2(dp, dq) - th_lo, TWO_PI)
    seen = ang <= (th_hi - th_lo) + 1e-12
    r = np.hypot(dq, dp)
    step = 2 * max(grid.q_max - grid.q_min, grid.p_max - grid.p_min) / 800
    return float(r[seen].max() + step) if seen.any() else float(r.max())


@dataclass(frozen=True)
class Sector(Region):
    """Angular region theta in [theta_min, theta_max) seen from ``apex``."""

    theta_min: float
    theta_max: float
    apex: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not 0 < self.theta_max - self.theta_min <= TWO_PI:
            raise ValueError("sector needs 0 < theta_max - theta_min <= 2 pi")

    def contains(self, q, p):
        ang = np.arctan2(np.asarray(p) - self.apex[1], np.asarray(q) - self.apex[0])
        rel = np.mod(ang - self.theta_min, TWO_PI)
        return rel < self.theta_max - self.theta_min

    def rule(self, grid):
        rmax = _farthest(self.apex, grid, self.theta_min, self.theta_max)
        r, wr = composite_gauss_legendre(0.0, rmax, grid.density)
        span = self.theta_max - self.theta_min
        th, wt = composite_gauss_legendre(self.theta_min, self.theta_max, max(grid.density * rmax, 32 / span))
        rr, tt, w = _tensor(r, wr * r, th, wt)
        return self.apex[0] + rr * np.cos(tt), self.apex[1] + rr * np.sin(tt), w

    def translated(self, dq, dp):
        return Sector(self.theta_min, self.theta_max, (self.apex[0] + dq, self.apex[1] + dp))

    def complement(self):
        return Sector(self.theta_max, self.theta_min + TWO_PI, self.apex)

    def spec(self):
        s = f"sector:{_fmt(math.degrees(self.theta_min))}:{_fmt(math.degrees(self.theta_max))}"
        if self.apex != (0.0, 0.0):
            s += f":{_fmt(self.apex[0])}:{_fmt(self.apex[1])}"
        return s


@dataclass(frozen=True)
class Disc(Region):
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disc radius must be positive")

    def contains(self, q, p):
        return np.hypot(np.asarray(q) - self.center[0], np.asarray(p) - self.center[1]) <= self.radius

    def rule(self, grid):
        r, wr = composite_gauss_legendre(0.0, self.radius, grid.density)
        th, wt = composite_gauss_legendre(0.0, TWO_PI, max(grid.density * self.radius, 32 / TWO_PI))
        rr, tt, w = _tensor(r, wr * r, th, wt)
        return self.center[0] + rr * np.cos(tt), self.center[1] + rr * np.sin(tt), w

    def translated(self, dq, dp):
        return Disc((self.center[0] + dq, self.center[1] + dp), self.radius)

    def spec(self):
        return f"disc:{_fmt(self.center[0])}:{_fmt(self.center[1])}:{_fmt(self.radius)}"


# functions -----------------------------------------------------------------

class PhaseSpaceFunction(ABC):
    """A real classical variable f(q, p)."""

    bounded: bool = True

    @abstractmethod
    def __call__(self, q, p): ...

    @abstractmethod
    def rule(self, grid: PhaseGrid):
        """Return ``(q, p, w, values)`` so that sum(w * values * g) ~ int f g dq dp."""

    def power(self, k: int) -> "PhaseSpaceFunction":
        raise NotImplementedError(f"powers of {type(self).__name__} are not representable")

    def spec(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Monomial(PhaseSpaceFunction):
    """q^a p^b; Monomial(1, 0) is the position variable x, Monomial(0, 1) the momentum y."""

    a: int
    b: int = 0

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("monomial exponents must be nonnegative")

    @property
    def bounded(self):
        return self.a == 0 and self.b == 0

    @property
    def degree(self) -> int:
        return self.a + self.b

    def __call__(self, q, p):
        return np.asarray(q, dtype=float) ** self.a * np.asarray(p, dtype=float) ** self.b

    def rule(self, grid):
        q, p, w = grid.nodes()
        return q, p, w, self(q, p)

    def power(self, k):
        return Monomial(self.a * k, self.b * k)

    def spec(self):
        return f"monomial:{self.a}:{self.b}"


@dataclass(frozen=True)
class Indicator(PhaseSpaceFunction):
    """Question variable: 1 on ``region``, 0 elsewhere."""

    region: Region

    def __call__(self, q, p):
        return self.region.contains(q, p).astype(float)

    def rule(self, grid):
        q, p, w = self.region.rule(grid)
        return q, p, w, np.ones_like(w)

    def power(self, k):
        # chi^k = chi for k >= 1
        return self if k >= 1 else Monomial(0, 0)

    def translated(self, dq: float, dp: float) -> "Indicator":
        return Indicator(self.region.translated(dq, dp))

    def complement(self) -> "Indicator":
        return Indicator(self.region.complement())

    def spec(self):
        return f"indicator:{self.region.spec()}"


@dataclass(frozen=True)
class ArrivalTime(PhaseSpaceFunction):
    """Classical arrival time at the origin, f(q, p) = -q/p (undefined at p = 0)."""

    bounded = False

    def __call__(self, q, p):
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(p != 0, -q / np.where(p != 0, p, 1.0), np.nan)

    def rule(self, grid):
        raise UnboundedFunctionError("the arrival time is unbounded; quantize its questions instead")

    def power(self, k):
        return _ArrivalPower(k)

    def spec(self):
        return "arrival"


@dataclass(frozen=True)
class _ArrivalPower(PhaseSpaceFunction):
    k: int
    bounded = False

    def __call__(self, q, p):
        return ArrivalTime()(q, p) ** self.k

    def rule(self, grid):
        raise UnboundedFunctionError("powers of the arrival time are unbounded")


class GridSampled(PhaseSpaceFunction):
    """Values tabulated on a :class:`PhaseGrid`, read by nearest-node lookup."""

    def __init__(self, grid: PhaseGrid, values):
        values = np.array(values, dtype=float)
        if values.shape != grid.shape:
            raise ValueError(f"values must have shape {grid.shape}, got {values.shape}")
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    @property
    def bounded(self):
        return bool(np.all(np.isfinite(self.values)))

    @classmethod
    def sample(cls, f: PhaseSpaceFunction, grid: PhaseGrid) -> "GridSampled":
        q, p, _ = grid.nodes()
        return cls(grid, np.asarray(f(q, p), dtype=float).reshape(grid.shape))

    def __call__(self, q, p):
        qa, _ = self.grid.axis("q")
        pa, _ = self.grid.axis("p")
        i = np.abs(np.asarray(q, dtype=float)[..., None] - qa).argmin(axis=-1)
        j = np.abs(np.asarray(p, dtype=float)[..., None] - pa).argmin(axis=-1)
        return self.values[i, j]

    def rule(self, grid=None):
        if not self.bounded:
            raise UnboundedFunctionError("grid-sampled function has non-finite values")
        q, p, w = self.grid.nodes()
        return q, p, w, self.values.ravel()

    def power(self, k):
        return GridSampled(self.grid, self.values ** k)

    def spec(self):
        return "grid-sampled"


# helpers -------------------------------------------------------------------

def position_question(borel: BorelSet1D) -> Indicator:
    """chi_B composed with the position variable, i.e. the cylinder B x R."""
    return Indicator(Rectangle(borel, BorelSet1D.real_line()))


def momentum_question(borel: BorelSet1D) -> Indicator:
    return Indicator(Rectangle(BorelSet1D.real_line(), borel))


def arrival_time_question(t_min: float, t_max: float) -> Indicator:
    """Question 'does the arrival time -q/p lie in [t_min, t_max]' for q < 0 < p.

    In that quadrant -q/p = t is the ray at angle pi/2 + atan(t), so the
    question is a sector.
    """
    if not 0 <= t_min < t_max:
        raise ValueError("need 0 <= t_min < t_max (t_max may be inf)")
    return Indicator(Sector(math.pi / 2 + math.atan(t_min), math.pi / 2 + math.atan(t_max)))


def parse_function(text: str) -> PhaseSpaceFunction:
    """Parse the CLI notation for phase-space functions.

    ``constant``, ``monomial:a:b``, ``indicator:rect:<Bq>x<Bp>``,
    ``indicator:halfplane:<deg>:<offset>``, ``indicator:sector:<deg>:<deg>[:q0:p0]``,
    ``indicator:disc:<q0>:<p0>:<r>``, ``arrival`` and ``arrival:<t_min>:<t_max>``.
    """
    text = text.strip()
    try:
        if text == "constant":
            return Monomial(0, 0)
        if text == "arrival":
            return ArrivalTime()
        head, _, rest = text.partition(":")
        if head == "monomial":
            a, b = rest.split(":")
            return Monomial(int(a), int(b))
        if head == "arrival":
            lo, hi = rest.split(":")
            return arrival_time_question(float(lo), float(hi))
        if head == "indicator":
            kind, _, args = rest.partition(":")
            if kind == "rect":
                m = re.fullmatch(r"(.+?)x(.+)", args)
                if m is None:
                    raise ValueError(args)
                return Indicator(Rectangle(BorelSet1D.parse(m.group(1)), BorelSet1D.parse(m.group(2))))
            vals = [float(v) for v in args.split(":")]
            if kind == "halfplane":
                return Indicator(HalfPlane(math.radians(vals[0]), vals[1] if len(vals) > 1 else 0.0))
            if kind == "sector":
                apex = (vals[2], vals[3]) if len(vals) == 4 else (0.0, 0.0)
                return Indicator(Sector(math.radians(vals[0]), math.radians(vals[1]), apex))
            if kind == "disc":
                return Indicator(Disc((vals[0], vals[1]), vals[2]))
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"cannot parse function {text!r}: {exc}") from exc
    raise ConfigError(f"unknown function {text!r}")


def classical_value(f: PhaseSpaceFunction, pt: PhasePoint) -> float:
    return float(np.asarray(f(pt.q, pt.p)))
