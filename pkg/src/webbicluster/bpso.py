"""Binary particle swarm optimisation over encoded biclusters.

A bicluster on an ``n x m`` matrix is a bit string of length ``n + m``:
the first ``n`` bits select rows, the remaining ``m`` select columns.  Each
particle carries such a position, a real velocity per bit and its personal
best.  One step per bit::

    v <- w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x)      clamped to +-v_max
    x <- 1 if r3 < 1 / (1 + exp(-v)) else 0

with ``r1, r2, r3`` fresh uniforms drawn in that order for every bit.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import _rng
from .coherence import Bicluster, FitnessPolicy, acv

__all__ = [
    "SwarmConfig",
    "Particle",
    "SwarmState",
    "TraceEntry",
    "MiningResult",
    "encode",
    "decode",
    "sigmoid",
    "inertia",
    "step_particle",
    "evaluate",
    "run",
]


@dataclass(frozen=True)
class SwarmConfig:
    """Hyperparameters of the swarm.

    ``inertia_mode`` is ``"variable"`` (linear decay from ``w_max`` to
    ``w_min`` over ``iter_max`` iterations) or ``"fixed"`` (constant
    ``w_fixed``).  ``stall_limit=None`` disables early stopping.
    """

    w_max: float = 0.9
    w_min: float = 0.4
    inertia_mode: str = "variable"
    w_fixed: Optional[float] = None
    c1: float = 2.0
    c2: float = 2.0
    v_max: float = 4.0
    iter_max: int = 100
    stall_limit: Optional[int] = 25
    seed: int = 0
    n_jobs: int = 1

    def __post_init__(self):
        if self.w_min > self.w_max:
            raise ValueError("w_min must not exceed w_max")
        if self.inertia_mode == "fixed":
            if self.w_fixed is None:
                raise ValueError("fixed inertia needs w_fixed")
        elif self.inertia_mode != "variable":
            raise ValueError(f"unknown inertia mode {self.inertia_mode!r}")
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("acceleration coefficients must be non-negative")
        if self.v_max <= 0:
            raise ValueError("v_max must be positive")
        if self.iter_max < 0:
            raise ValueError("iter_max must be non-negative")
        if self.stall_limit is not None and self.stall_limit < 1:
            raise ValueError("stall_limit must be positive or None")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.n_jobs < 1:
            raise ValueError("n_jobs must be positive")

    @property
    def inertia_label(self) -> str:
        if self.inertia_mode == "variable":
            return "variable"
        return f"fixed:{self.w_fixed:g}"

    @classmethod
    def with_inertia(cls, spec: str, **kwargs) -> "SwarmConfig":
        """Build a config from an inertia string: ``variable`` or ``fixed:<w>``."""
        if spec == "variable":
            return cls(inertia_mode="variable", **kwargs)
        if spec.startswith("fixed:"):
            try:
                w = float(spec.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"bad inertia weight in {spec!r}") from None
            return cls(inertia_mode="fixed", w_fixed=w, **kwargs)
        raise ValueError(f"inertia must be 'variable' or 'fixed:<w>', got {spec!r}")


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_fitness: float = 0.0
    pbest_acv: float = math.nan


class TraceEntry(NamedTuple):
    iteration: int
    gbest_fitness: float
    mean_pbest_fitness: float
    mean_pbest_acv: float


@dataclass
class SwarmState:
    particles: list[Particle]
    gbest_position: np.ndarray
    gbest_fitness: float
    gbest_acv: float
    iteration: int = 0
    trace: list[TraceEntry] = field(default_factory=list)


@dataclass
class MiningResult:
    gbest: Bicluster
    pbests: list[Bicluster]
    trace: list[TraceEntry]
    stats: dict
    delta: float
    iterations: int


def encode(b: Bicluster, n: int, m: int) -> np.ndarray:
    b.check_bounds(n, m)
    bits = np.zeros(n + m, dtype=np.uint8)
    bits[list(b.rows)] = 1
    bits[[n + j for j in b.cols]] = 1
    return bits


def decode(bits, n: int, m: int) -> Bicluster:
    bits = np.asarray(bits)
    if bits.shape != (n + m,):
        raise ValueError(f"expected {n + m} bits, got shape {bits.shape}")
    return Bicluster(np.flatnonzero(bits[:n]), np.flatnonzero(bits[n:]))


def sigmoid(v):
    """Logistic function, evaluated without overflow for large ``|v|``."""
    v = np.asarray(v, dtype=np.float64)
    out = np.empty_like(v)
    pos = v >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-v[pos]))
    ev = np.exp(v[~pos])
    out[~pos] = ev / (1.0 + ev)
    return out if out.ndim else float(out)


def inertia(cfg: SwarmConfig, iteration: int) -> float:
    """Inertia weight at ``iteration``; the linear schedule ends exactly on ``w_min``."""
    if cfg.inertia_mode == "fixed":
        return float(cfg.w_fixed)
    if not (0 <= iteration <= cfg.iter_max):
        raise ValueError(f"iteration {iteration} outside [0, {cfg.iter_max}]")
    if iteration == cfg.iter_max:
        return cfg.w_min if cfg.iter_max else cfg.w_max
    return cfg.w_max - ((cfg.w_max - cfg.w_min) / cfg.iter_max) * iteration


def step_particle(p: Particle, gbest_position, w: float, cfg: SwarmConfig,
                  rng: np.random.Generator) -> Particle:
    """One velocity/position update; the personal best is carried over unchanged."""
    x = p.position.astype(np.float64)
    r1, r2, r3 = rng.random((x.size, 3)).T
    velocity = (w * p.velocity
                + cfg.c1 * r1 * (p.pbest_position - x)
                + cfg.c2 * r2 * (np.asarray(gbest_position, dtype=np.float64) - x))
    np.clip(velocity, -cfg.v_max, cfg.v_max, out=velocity)
    position = (r3 < sigmoid(velocity)).astype(np.uint8)
    return replace(p, position=position, velocity=velocity)


def evaluate(matrix, bits, policy: FitnessPolicy) -> tuple[float, float]:
    """Fitness and ACV (``nan`` below 2x2) of an encoded bicluster."""
    b = decode(bits, matrix.n, matrix.m)
    if b.is_degenerate:
        return 0.0, math.nan
    value = acv(matrix, b)
    feasible = policy.admits(b) and value >= policy.delta
    return (float(b.volume) if feasible else 0.0), value


def _better(fit, score, old_fit, old_score):
    if fit != old_fit:
        return fit > old_fit
    score = -1.0 if math.isnan(score) else score
    old_score = -1.0 if math.isnan(old_score) else old_score
    return score > old_score


def _update_gbest(state: SwarmState) -> bool:
    best = max(range(len(state.particles)),
               key=lambda i: (state.particles[i].pbest_fitness, -i))
    p = state.particles[best]
    improved = p.pbest_fitness > state.gbest_fitness
    state.gbest_position = p.pbest_position.copy()
    state.gbest_fitness = p.pbest_fitness
    state.gbest_acv = p.pbest_acv
    return improved


def _record(state: SwarmState):
    fits = [p.pbest_fitness for p in state.particles]
    scores = [p.pbest_acv for p in state.particles if not math.isnan(p.pbest_acv)]
    state.trace.append(TraceEntry(
        state.iteration,
        state.gbest_fitness,
        math.fsum(fits) / len(fits),
        math.fsum(scores) / len(scores) if scores else math.nan,
    ))


def run(matrix, seeds: Sequence[Bicluster], policy: FitnessPolicy,
        cfg: SwarmConfig = SwarmConfig()) -> MiningResult:
    """Optimise a swarm with one particle per seed bicluster.

    Particles start at their seed with zero velocity.  Every iteration moves
    all particles, evaluates them, then updates personal bests (higher
    fitness wins, ties go to higher ACV, then the incumbent) and the global
    best (highest personal best, ties to the lowest particle index).  The
    loop ends after ``iter_max`` iterations or ``stall_limit`` consecutive
    iterations without a strictly better global best.

    Particle ``i`` at iteration ``t`` draws from its own stream keyed by
    ``(seed, i, t)``, so results do not depend on ``cfg.n_jobs``.
    """
    if not seeds:
        raise ValueError("cannot run a swarm without seeds")
    n, m = matrix.n, matrix.m
    cache: dict[bytes, tuple[float, float]] = {}

    def score(bits):
        key = bits.tobytes()
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = evaluate(matrix, bits, policy)
        return hit

    particles = []
    for s in seeds:
        bits = encode(s, n, m)
        fit, val = score(bits)
        particles.append(Particle(bits, np.zeros(n + m), bits.copy(), fit, val))
    state = SwarmState(particles, particles[0].pbest_position, -1.0, math.nan)
    _update_gbest(state)
    _record(state)

    def advance(i, w, gbest, iteration):
        rng = _rng.stream(cfg.seed, _rng.SWARM, i, iteration)
        moved = step_particle(state.particles[i], gbest, w, cfg, rng)
        return moved, score(moved.position)

    pool = ThreadPoolExecutor(max_workers=cfg.n_jobs) if cfg.n_jobs > 1 else None
    stall = 0
    try:
        for t in range(cfg.iter_max):
            w = inertia(cfg, t)
            gbest = state.gbest_position
            jobs = range(len(particles))
            if pool is None:
                outcomes = [advance(i, w, gbest, t) for i in jobs]
            else:
                outcomes = list(pool.map(lambda i: advance(i, w, gbest, t), jobs))
            for i, (moved, (fit, val)) in enumerate(outcomes):
                if _better(fit, val, moved.pbest_fitness, moved.pbest_acv):
                    moved.pbest_position = moved.position.copy()
                    moved.pbest_fitness, moved.pbest_acv = fit, val
                state.particles[i] = moved
            state.iteration = t + 1
            stall = 0 if _update_gbest(state) else stall + 1
            _record(state)
            if cfg.stall_limit is not None and stall >= cfg.stall_limit:
                break
    finally:
        if pool is not None:
            pool.shutdown()

    gbest = decode(state.gbest_position, n, m).with_acv(matrix)
    pbests = [decode(p.pbest_position, n, m).with_acv(matrix) for p in state.particles]
    last = state.trace[-1]
    stats = {
        "swarm_size": len(particles),
        "gbest_volume": gbest.volume,
        "gbest_acv": gbest.acv,
        "gbest_fitness": state.gbest_fitness,
        "mean_pbest_volume": last.mean_pbest_fitness,
        "mean_pbest_acv": last.mean_pbest_acv,
    }
    return MiningResult(gbest, pbests, state.trace, stats, policy.delta, state.iteration)
