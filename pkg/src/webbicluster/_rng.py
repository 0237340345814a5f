"""Counter-based random streams.

Every consumer derives its own generator from the master seed plus a tuple
of integer keys (purpose, particle index, iteration, ...), so the numbers a
component sees never depend on how work is scheduled across threads.
"""

import numpy as np

# stream purposes
KMEANS_ROWS = 1
KMEANS_COLS = 2
SWARM = 3
SYNTH = 4


def stream(seed: int, *keys: int) -> np.random.Generator:
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, *(int(k) for k in keys)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))
