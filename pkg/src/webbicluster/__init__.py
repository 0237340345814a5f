"""Coherent biclustering of web usage data.

Users and pages form an access matrix of hit counts.  The library looks for
large submatrices whose rows (or columns) are strongly correlated.  Two-way
K-Means seeds are improved by greedy node addition and deletion before a
binary particle swarm searches further.
"""

from .bpso import MiningResult, SwarmConfig, TraceEntry, decode, encode, inertia, run, sigmoid
from .coherence import Bicluster, FitnessPolicy, acv, acv_terms, compute_delta, fitness, pearson
from .greedy import greedy_enlarge, greedy_refine, greedy_seeds
from .pipeline import mine
from .seeding import SeedingConfig, initial_biclusters, kmeans
from .synth import PlantSpec, jaccard_score, plant
from .usage_matrix import (
    AccessMatrix,
    Session,
    SessionLog,
    build_matrix,
    parse_clickstream,
    read_matrix_csv,
    write_matrix_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AccessMatrix",
    "Bicluster",
    "FitnessPolicy",
    "MiningResult",
    "PlantSpec",
    "SeedingConfig",
    "Session",
    "SessionLog",
    "SwarmConfig",
    "TraceEntry",
    "acv",
    "acv_terms",
    "build_matrix",
    "compute_delta",
    "decode",
    "encode",
    "fitness",
    "greedy_enlarge",
    "greedy_refine",
    "greedy_seeds",
    "inertia",
    "initial_biclusters",
    "jaccard_score",
    "kmeans",
    "mine",
    "parse_clickstream",
    "pearson",
    "plant",
    "read_matrix_csv",
    "run",
    "sigmoid",
    "write_matrix_csv",
]
