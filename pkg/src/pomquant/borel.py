"""Finite unions of real intervals, the only Borel sets the library needs."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

__all__ = ["Interval", "BorelSet1D"]


@dataclass(frozen=True, order=True)
class Interval:
    """Interval with independently open or closed ends; ends may be infinite."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoints must not be NaN")
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")
        # infinite ends are never attained
        if math.isinf(self.lo):
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(self.hi):
            object.__setattr__(self, "hi_closed", False)

    @property
    def is_empty(self) -> bool:
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        lo = x >= self.lo if self.lo_closed else x > self.lo
        hi = x <= self.hi if self.hi_closed else x < self.hi
        return lo & hi

    def __str__(self):
        return f"{'[' if self.lo_closed else '('}{_fmt(self.lo)},{_fmt(self.hi)}{']' if self.hi_closed else ')'}"


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    short = f"{v:g}"
    return short if float(short) == v else repr(v)


def _touching(a: Interval, b: Interval) -> bool:
    # a sorted before b; true when the union is a single interval
    if b.lo < a.hi:
        return True
    return b.lo == a.hi and (a.hi_closed or b.lo_closed)


class BorelSet1D:
    """A finite union of disjoint intervals kept in sorted canonical form.

    Overlapping or touching pieces are merged on construction, so two sets
    describing the same points compare equal.

    >>> str(BorelSet1D.parse("[1,3]u(-inf,-0.5]u[2,4)"))
    '(-inf,-0.5]u[1,4)'
    """

    def __init__(self, intervals=()):
        # closed left ends first, so a merge never reopens an earlier comparison
        items = sorted((iv for iv in intervals if not iv.is_empty), key=lambda iv: (iv.lo, not iv.lo_closed))
        merged: list[Interval] = []
        for iv in items:
            if merged and _touching(merged[-1], iv):
                last = merged[-1]
                if iv.hi > last.hi or (iv.hi == last.hi and iv.hi_closed):
                    hi, hi_closed = iv.hi, iv.hi_closed or (iv.hi == last.hi and last.hi_closed)
                else:
                    hi, hi_closed = last.hi, last.hi_closed
                lo_closed = last.lo_closed or (iv.lo == last.lo and iv.lo_closed)
                merged[-1] = Interval(last.lo, hi, lo_closed, hi_closed)
            else:
                merged.append(iv)
        self.intervals: tuple[Interval, ...] = tuple(merged)

    # constructors -------------------------------------------------------
    @classmethod
    def real_line(cls) -> "BorelSet1D":
        return cls([Interval(-math.inf, math.inf)])

    @classmethod
    def closed(cls, lo: float, hi: float) -> "BorelSet1D":
        return cls([Interval(lo, hi)])

    @classmethod
    def half_open(cls, lo: float, hi: float) -> "BorelSet1D":
        """The set [lo, hi)."""
        return cls([Interval(lo, hi, True, False)])

    @classmethod
    def parse(cls, text: str) -> "BorelSet1D":
        """Parse strings like ``"[0,inf)"``, ``"R"`` or ``"(-inf,-0.5]u[1,3]"``."""
        text = text.strip().replace(" ", "")
        if text in ("R", "ℝ", "real"):
            return cls.real_line()
        pieces = re.split(r"[uU∪]", text)
        out = []
        for piece in pieces:
            m = re.fullmatch(r"([\[(])([^,]+),([^,\])]+)([\])])", piece)
            if m is None:
                raise ValueError(f"cannot parse interval {piece!r}")
            out.append(
                Interval(float(m.group(2)), float(m.group(3)), m.group(1) == "[", m.group(4) == "]")
            )
        return cls(out)

    # set algebra --------------------------------------------------------
    def complement(self) -> "BorelSet1D":
        out = []
        lo, lo_closed = -math.inf, False
        for iv in self.intervals:
            out.append(Interval(lo, iv.lo, lo_closed, not iv.lo_closed))
            lo, lo_closed = iv.hi, not iv.hi_closed
        out.append(Interval(lo, math.inf, lo_closed, False))
        return BorelSet1D(iv for iv in out if not (iv.lo == iv.hi and not (iv.lo_closed and iv.hi_closed)))

    def union(self, other: "BorelSet1D") -> "BorelSet1D":
        return BorelSet1D(self.intervals + other.intervals)

    def shifted(self, offset: float) -> "BorelSet1D":
        return BorelSet1D(
            Interval(iv.lo + offset, iv.hi + offset, iv.lo_closed, iv.hi_closed) for iv in self.intervals
        )

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        hit = np.zeros(x.shape, dtype=bool)
        for iv in self.intervals:
            hit |= iv.contains(x)
        return hit

    def clipped(self, lo: float, hi: float) -> list[tuple[float, float]]:
        """Finite (a, b) pieces of the set inside [lo, hi], for quadrature."""
        out = []
        for iv in self.intervals:
            a, b = max(iv.lo, lo), min(iv.hi, hi)
            if b > a:
                out.append((a, b))
        return out

    @property
    def length(self) -> float:
        """Lebesgue measure of the set."""
        return sum(iv.hi - iv.lo for iv in self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def __eq__(self, other):
        return isinstance(other, BorelSet1D) and self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __str__(self):
        if self.intervals == (Interval(-math.inf, math.inf),):
            return "R"
        return "u".join(str(iv) for iv in self.intervals) or "{}"

    def __repr__(self):
        return f"BorelSet1D({str(self)!r})"
