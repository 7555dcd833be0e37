"""Piecewise-constant potentials and the complex phase integral.

Only piecewise-constant potentials are supported: the phase integral then has
an exact closed form per segment and no quadrature error.  Boundary
convention: a segment owns its left edge (closed-left, open-right), so the
slice propagator and the closed form agree bit for bit when slices align with
segment edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BoundaryAmbiguity
from .numerics import complex_sqrt_2m

__all__ = ["Segment", "PiecewisePotential", "PhaseIntegralResult",
           "phase_integral", "local_momentum"]


class Segment(NamedTuple):
    x_start: float
    x_end: float
    v: float


@dataclass(frozen=True)
class PiecewisePotential:
    """Ordered, non-overlapping constant-V segments; zero outside all segments."""

    segments: tuple[Segment, ...]

    def __init__(self, segments: Sequence[tuple[float, float, float]]):
        segs = tuple(Segment(*s) for s in segments)
        for s in segs:
            if not s.x_start < s.x_end:
                raise ValueError(f"segment {s} has x_start >= x_end")
        for a, b in zip(segs, segs[1:]):
            if a.x_end > b.x_start:
                raise ValueError(f"segments {a} and {b} overlap or are unsorted")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def free(cls) -> "PiecewisePotential":
        return cls(())

    @classmethod
    def square_barrier(cls, v0: float, length: float) -> "PiecewisePotential":
        """Single barrier of height v0 on (0, length)."""
        return cls(((0.0, length, v0),))

    @property
    def edges(self) -> tuple[float, ...]:
        out = []
        for s in self.segments:
            out.extend((s.x_start, s.x_end))
        return tuple(sorted(set(out)))

    def value_at(self, x: float) -> float:
        """V(x) with the closed-left, open-right edge convention."""
        for s in self.segments:
            if s.x_start <= x < s.x_end:
                return s.v
        return 0.0

    def is_edge(self, x: float) -> bool:
        return any(x == s.x_start or x == s.x_end for s in self.segments)

    def pieces(self, a: float, b: float) -> list[tuple[float, float]]:
        """Split [a, b] (a < b) at segment edges; yields (length, V) pairs."""
        cuts = sorted({a, b, *(e for e in self.edges if a < e < b)})
        out = []
        for lo, hi in zip(cuts, cuts[1:]):
            out.append((hi - lo, self.value_at(lo)))
        return out


@dataclass(frozen=True)
class PhaseIntegralResult:
    """Accumulated complex phase theta = integral sqrt(2m[E-V]) dx' / hbar.

    ``real_part`` is the oscillatory phase, ``evanescent_decay`` the positive
    decay exponent accumulated in forbidden regions (nonnegative whenever the
    integration runs in the +x direction).  theta may be an array when E is.
    """

    theta: np.ndarray | complex

    @property
    def real_part(self):
        return np.real(self.theta)

    @property
    def evanescent_decay(self):
        return np.imag(self.theta)


def phase_theta(pot: PiecewisePotential, E, m: float, hbar: float,
                x0: float, x: float):
    """Complex theta(E; x0 -> x); E may be an array. Exact segment sum."""
    if x == x0:
        return np.zeros_like(np.asarray(E, dtype=float)) * 1j if np.ndim(E) else 0j
    if x < x0:
        return -phase_theta(pot, E, m, hbar, x, x0)
    theta = 0j
    for length, v in pot.pieces(x0, x):
        theta = theta + length * complex_sqrt_2m(E, v, m) / hbar
    return theta


def phase_integral(pot: PiecewisePotential, E, m: float, hbar: float,
                   x0: float, x: float) -> PhaseIntegralResult:
    """Phase integral over [x0, x] (either order; reversal flips the sign)."""
    return PhaseIntegralResult(phase_theta(pot, E, m, hbar, x0, x))


def local_momentum(pot: PiecewisePotential, E: float, m: float, x: float):
    """Momentum eigenvalue pair (+p, -p) at x, p = sqrt(2m[E - V(x)]).

    Raises BoundaryAmbiguity when x sits exactly on a segment edge, where the
    one-sided values differ; displace the query point by +/- eps instead.
    """
    if pot.is_edge(x):
        raise BoundaryAmbiguity(f"x = {x} coincides with a segment edge")
    p = complex_sqrt_2m(E, pot.value_at(x), m)
    return p, -p
