"""End-to-end mining: two-way K-Means seeds, optional greedy pass, swarm."""

from __future__ import annotations

from typing import Optional

from .bpso import MiningResult, SwarmConfig, run
from .coherence import FitnessPolicy
from .greedy import DEFAULT_MIN_GAIN, greedy_seeds
from .seeding import SeedingConfig, initial_biclusters

__all__ = ["mine", "SEED_MODES"]

SEED_MODES = ("greedy", "raw")


def mine(matrix, seeding: SeedingConfig = SeedingConfig(), swarm: SwarmConfig = SwarmConfig(),
         delta: Optional[float] = None, seed_mode: str = "greedy",
         min_gain: float = DEFAULT_MIN_GAIN, min_shape: tuple[int, int] = (3, 3)) -> MiningResult:
    """Mine the highest-volume bicluster whose ACV clears the threshold.

    ``delta=None`` sets the threshold to the mean ACV of the raw K-Means
    seeds.  With ``seed_mode="greedy"`` every seed is enlarged and refined
    before it becomes a particle; ``"raw"`` uses the K-Means seeds directly.
    Biclusters smaller than ``min_shape`` (rows, columns) score zero.
    """
    if seed_mode not in SEED_MODES:
        raise ValueError(f"seed_mode must be one of {SEED_MODES}, got {seed_mode!r}")
    seeds = initial_biclusters(matrix, seeding)
    floor = dict(min_rows=min_shape[0], min_cols=min_shape[1])
    if delta is None:
        policy = FitnessPolicy.auto(matrix, seeds, **floor)
    else:
        policy = FitnessPolicy(delta, **floor)
    if seed_mode == "greedy":
        seeds = greedy_seeds(matrix, seeds, policy.delta, min_gain=min_gain,
                             n_jobs=swarm.n_jobs, **floor)
    return run(matrix, seeds, policy, swarm)
