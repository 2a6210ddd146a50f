"""Markov chain sampling of confined equilateral polygons.

The chain state is a point (d, theta) in P_n(R) x T^{n-3}; each step either
performs a block of hit-and-run moves on the diagonal polytope or resamples all
torus angles, which together give an ergodic chain whose stationary law pushes
forward to the natural measure on confined polygon space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .geometry import ActionAngle, DegenerateDiagonal, Polygon, reconstruct
from .polytope import MomentPolytope


def chain_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for (seed, stream); distinct streams never overlap."""
    return np.random.Generator(np.random.Philox(key=[np.uint64(seed), np.uint64(stream)]))


@dataclass(frozen=True)
class SamplerConfig:
    """Chain parameters.

    beta is the probability of a hit-and-run block, gamma the number of
    hit-and-run iterations per block; burn_in defaults to 100*n when None.
    """

    beta: float = 0.5
    gamma: int = 10
    burn_in: int | None = None
    thin: int = 1
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie strictly between 0 and 1")
        if self.gamma < 1:
            raise ValueError("gamma must be a positive integer")
        if self.burn_in is not None and self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        if self.thin < 1:
            raise ValueError("thin must be a positive integer")

    def resolved_burn_in(self, n: int) -> int:
        return 100 * n if self.burn_in is None else self.burn_in


@dataclass(frozen=True)
class ChainState:
    """Current position in P_n(R) x T^{n-3} plus a step counter."""

    d: np.ndarray
    theta: np.ndarray
    step: int = 0

    @property
    def coords(self) -> ActionAngle:
        return ActionAngle(d=self.d.copy(), theta=self.theta.copy())


def random_direction(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Uniform unit vector from normalized independent Gaussians."""
    while True:
        v = rng.standard_normal(dim)
        norm = float(np.linalg.norm(v))
        if norm > 1e-12:
            return v / norm


def hit_and_run_step(polytope: MomentPolytope, state: ChainState,
                     rng: np.random.Generator) -> ChainState:
    """One hit-and-run move: uniform point on the random chord through state.d."""
    v = random_direction(rng, polytope.dim)
    t0, t1 = polytope.chord_interval(state.d, v)
    t = rng.uniform(t0, t1)
    return ChainState(d=state.d + t * v, theta=state.theta, step=state.step + 1)


def tsmcmc_step(polytope: MomentPolytope, state: ChainState, config: SamplerConfig,
                rng: np.random.Generator) -> ChainState:
    """One mixed step: with probability beta, gamma hit-and-run moves on the
    diagonals (angles unchanged); otherwise a fresh uniform draw of every angle
    (diagonals unchanged)."""
    if rng.random() < config.beta:
        d = state.d
        for _ in range(config.gamma):
            v = random_direction(rng, polytope.dim)
            t0, t1 = polytope.chord_interval(d, v)
            d = d + rng.uniform(t0, t1) * v
        return ChainState(d=d, theta=state.theta, step=state.step + 1)
    theta = rng.uniform(-math.pi, math.pi, polytope.dim)
    return ChainState(d=state.d, theta=theta, step=state.step + 1)


class TsmcmcSampler:
    """Ergodic sampler of equilateral n-gons in rooted spherical confinement.

    Streams reconstructed polygons after burn-in; reconstructions that hit a
    degenerate fan triangle (measure zero) are skipped and counted in
    ``degenerate_skips`` rather than retried, leaving the chain law untouched.
    """

    def __init__(self, n: int, radius: float = math.inf,
                 config: SamplerConfig | None = None, stream: int = 0):
        self.config = config or SamplerConfig()
        self.polytope = MomentPolytope(n, radius)
        self.rng = chain_rng(self.config.seed, stream)
        theta = self.rng.uniform(-math.pi, math.pi, self.polytope.dim)
        self.state = ChainState(d=self.polytope.interior_point(), theta=theta)
        self.degenerate_skips = 0
        self._burned_in = False

    def burn_in(self) -> None:
        if self._burned_in:
            return
        for _ in range(self.config.resolved_burn_in(self.polytope.n)):
            self.state = tsmcmc_step(self.polytope, self.state, self.config, self.rng)
        self._burned_in = True

    def polygons(self, count: int):
        """Yield `count` polygons, advancing the chain by `thin` steps per draw."""
        self.burn_in()
        emitted = 0
        while emitted < count:
            for _ in range(self.config.thin):
                self.state = tsmcmc_step(self.polytope, self.state, self.config, self.rng)
            try:
                yield reconstruct(self.state.coords)
            except DegenerateDiagonal:
                self.degenerate_skips += 1
                continue
            emitted += 1


def sample_polygons(n: int, radius: float, count: int,
                    config: SamplerConfig | None = None):
    """Generator of `count` random equilateral n-gons in radius-R confinement.

    Deterministic for a fixed (n, radius, count, config) including the seed.
    """
    yield from TsmcmcSampler(n, radius, config).polygons(count)
