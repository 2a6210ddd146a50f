"""The convex polytope of feasible fan diagonals under rooted spherical confinement.

For an equilateral n-gon the fan diagonals d = (d_1, ..., d_{n-3}) satisfy the
triangle inequalities

    0 <= d_1 <= 2,   0 <= d_{n-3} <= 2,
    1 <= d_i + d_{i+1},   -1 <= d_i - d_{i+1} <= 1   (i = 1..n-4),

and confinement to a ball of radius R about the root vertex adds d_i <= R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

CONTAINMENT_SLACK = 1e-12
_DIRECTION_EPS = 1e-14


class DimensionMismatch(ValueError):
    """A diagonal vector has the wrong length for the polytope."""


class ExteriorPoint(ValueError):
    """A chord query started from a point outside the polytope."""


def _inequalities(n: int, radius: float) -> tuple[np.ndarray, np.ndarray]:
    """Rows (A, b) with the polytope given by A @ d <= b."""
    m = n - 3
    rows = []
    rhs = []

    def add(coeffs, bound):
        row = np.zeros(m)
        for idx, c in coeffs:
            row[idx] = c
        rows.append(row)
        rhs.append(bound)

    for i in range(m):
        add([(i, -1.0)], 0.0)  # d_i >= 0
    add([(0, 1.0)], 2.0)
    add([(m - 1, 1.0)], 2.0)
    for i in range(m - 1):
        add([(i, -1.0), (i + 1, -1.0)], -1.0)  # d_i + d_{i+1} >= 1
        add([(i, 1.0), (i + 1, -1.0)], 1.0)
        add([(i, -1.0), (i + 1, 1.0)], 1.0)
    if math.isfinite(radius):
        for i in range(m):
            add([(i, 1.0)], radius)
    return np.array(rows), np.array(rhs)


@dataclass(frozen=True)
class MomentPolytope:
    """Feasible diagonal vectors for equilateral n-gons confined to radius R.

    Parameters
    ----------
    n : int
        Polygon size, at least 4.
    radius : float
        Confinement radius (>= 1); ``math.inf`` for unconfined polygons.
    """

    n: int
    radius: float = math.inf
    A: np.ndarray = field(init=False, repr=False, compare=False)
    b: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("need n >= 4")
        if not (self.radius >= 1.0):
            raise ValueError("confinement radius must be >= 1 (the second vertex "
                             "is at distance 1 from the root)")
        A, b = _inequalities(self.n, self.radius)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def dim(self) -> int:
        return self.n - 3

    def _check_dim(self, d: np.ndarray) -> np.ndarray:
        d = np.asarray(d, dtype=float)
        if d.shape != (self.dim,):
            raise DimensionMismatch(f"expected {self.dim} diagonals, got shape {d.shape}")
        return d

    def contains(self, d) -> bool:
        """True iff every inequality holds within slack 1e-12."""
        d = self._check_dim(d)
        return bool(np.all(self.A @ d <= self.b + CONTAINMENT_SLACK))

    def chord_interval(self, p, v) -> tuple[float, float]:
        """Intersection of the line p + t*v with the polytope, as (t0, t1).

        The returned interval is maximal with t0 <= 0 <= t1; p must be
        contained (within slack) and v must be a unit vector.
        """
        p = self._check_dim(p)
        v = self._check_dim(v)
        if not self.contains(p):
            raise ExteriorPoint("chord query from an exterior point")
        av = self.A @ v
        slack = self.b - self.A @ p
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = slack / av
        t1 = float(np.min(ratio[av > _DIRECTION_EPS], initial=math.inf))
        t0 = float(np.max(ratio[av < -_DIRECTION_EPS], initial=-math.inf))
        # p is feasible only up to slack, so clamp tiny sign errors.
        return min(t0, 0.0), max(t1, 0.0)

    def interior_point(self) -> np.ndarray:
        """The all-ones diagonal vector, feasible for every n >= 4, R >= 1."""
        return np.ones(self.dim)


def polytope_contains(polytope: MomentPolytope, d) -> bool:
    """Functional alias for :meth:`MomentPolytope.contains`."""
    return polytope.contains(d)


def chord_interval(polytope: MomentPolytope, p, v) -> tuple[float, float]:
    """Functional alias for :meth:`MomentPolytope.chord_interval`."""
    return polytope.chord_interval(p, v)
