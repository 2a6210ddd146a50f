"""Equilateral certification and knot-type-preserving tightening.

A floating-point polygon with every edge length within min(mu/n, mu^2/4) of 1,
where mu is the minimum distance between non-adjacent edges, is isotopic to an
exactly equilateral polygon of the same knot type; the certificate records both
sides of that inequality. Tightening hill-climbs mu by random crankshaft moves
that keep the classification fixed, widening the certificate margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    DegenerateChord,
    Polygon,
    crankshaft,
    edge_lengths,
    min_nonadjacent_distance,
)

# The certification inequality is stated for unit-length targets, so polygons
# at a different scale are rejected instead of silently mis-certified.
SCALE_GUARD = 0.01


class ScaleMismatch(ValueError):
    """Mean edge length is not within 1% of 1, so the unit-edge test is meaningless."""


@dataclass(frozen=True)
class Certificate:
    """Result of the equilateral certification test.

    passed is exactly max_edge_deviation < bound with bound = min(mu/n, mu^2/4);
    margin_exponent = log10(max_edge_deviation / bound) quantifies how easily
    the inequality holds (more negative is better).
    """

    mu: float
    max_edge_deviation: float
    bound: float
    margin_exponent: float
    passed: bool

    def tsv_line(self) -> str:
        return (f"{self.mu:.12g}\t{self.max_edge_deviation:.12g}\t{self.bound:.12g}"
                f"\t{self.margin_exponent:.4f}\t{str(self.passed).lower()}")


def certify(p: Polygon) -> Certificate:
    """Certify that a near-equilateral polygon admits a true equilateral
    representative of the same knot type.

    Raises
    ------
    ScaleMismatch
        If the mean edge length is not within 1% of 1.
    """
    if p.n < 4:
        raise ValueError("certification needs n >= 4")
    lengths = edge_lengths(p)
    mean = float(np.mean(lengths))
    if abs(mean - 1.0) > SCALE_GUARD:
        raise ScaleMismatch(f"mean edge length {mean:.6f} is not within 1% of 1")
    mu = min_nonadjacent_distance(p)
    max_dev = float(np.max(np.abs(lengths - 1.0)))
    bound = min(mu / p.n, mu * mu / 4.0)
    if max_dev == 0.0:
        margin = -math.inf
    elif bound == 0.0:
        margin = math.inf
    else:
        margin = math.log10(max_dev / bound)
    return Certificate(mu=mu, max_edge_deviation=max_dev, bound=bound,
                       margin_exponent=margin, passed=max_dev < bound)


def renormalize(p: Polygon) -> Polygon:
    """Snap a near-equilateral polygon to exactly unit edge directions.

    Edge vectors are normalized and their tiny closure defect is spread evenly,
    iterating to machine precision; this stops edge-length drift from
    accumulating over long runs of accepted moves.
    """
    v = p.vertices
    dirs = v - np.roll(v, 1, axis=0)
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    for _ in range(4):
        defect = dirs.sum(axis=0)
        if float(np.linalg.norm(defect)) < 1e-15:
            break
        dirs -= defect / len(dirs)
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    rebuilt = v[0] + np.cumsum(dirs[1:], axis=0)
    return Polygon(np.vstack([v[0], rebuilt]))


def tighten(p: Polygon, iterations: int, rng: np.random.Generator,
            classifier) -> Polygon:
    """Hill-climb mu by stochastic crankshaft rotations, keeping the knot type.

    A proposal rotates the arc between a random nondegenerate vertex pair by a
    uniform angle in [-pi, pi); it is accepted only if mu strictly increases
    and `classifier` (a callable Polygon -> Classification) reports the same
    outcome as for the input. The returned polygon always satisfies
    mu(result) >= mu(input).
    """
    baseline = classifier(p)
    if baseline.outcome == "unknown":
        raise ValueError("refusing to tighten an unidentified conformation")
    target = (baseline.outcome, baseline.names)
    current = p
    mu_cur = min_nonadjacent_distance(current)
    n = p.n
    for _ in range(iterations):
        i = int(rng.integers(n))
        j = int(rng.integers(n))
        if i == j:
            continue
        angle = float(rng.uniform(-math.pi, math.pi))
        try:
            proposal = renormalize(crankshaft(current, i, j, angle))
        except DegenerateChord:
            continue
        mu_new = min_nonadjacent_distance(proposal)
        if mu_new <= mu_cur:
            continue
        verdict = classifier(proposal)
        if (verdict.outcome, verdict.names) != target:
            continue
        current = proposal
        mu_cur = mu_new
    return current
