"""Walk through coherence, fitness and greedy search on a 4x4 toy matrix.

Four users, four pages.  Users u1, u2 and u4 visit pages p1, p3 and p4 in
the same relative pattern (each row is a shifted copy of the others), so
that 3x3 submatrix is perfectly coherent even though the raw counts differ.
"""

import numpy as np

from webbicluster import AccessMatrix, Bicluster, FitnessPolicy, acv, fitness
from webbicluster import greedy_enlarge, greedy_refine

values = np.array([
    [0, 5, 3, 6],
    [1, 20, 4, 7],
    [10, 10, 20, 6],
    [5, 0, 8, 11],
])
matrix = AccessMatrix(values, ["u1", "u2", "u3", "u4"], ["p1", "p2", "p3", "p4"])


def show(name, b):
    rows = [matrix.user_labels[i] for i in b.rows]
    cols = [matrix.page_labels[j] for j in b.cols]
    print(f"{name:<24} rows={rows} cols={cols} acv={acv(matrix, b):.4f}")


# The hidden block: every pair of its rows correlates perfectly.
hidden = Bicluster([0, 1, 3], [0, 2, 3])
show("hidden bicluster", hidden)
print("submatrix:\n", hidden.submatrix(matrix))

# Fitness is the volume when coherence clears the threshold, zero otherwise.
# The toy example allows 2x2 shapes; the default policy asks for 3x3.
policy = FitnessPolicy(0.9, min_rows=2, min_cols=2)
print("fitness at delta=0.9:", fitness(matrix, hidden, policy))
show("whole matrix", Bicluster(range(4), range(4)))
print("fitness of whole matrix:", fitness(matrix, Bicluster(range(4), range(4)), policy))

# Greedy enlargement from a 2x2 corner of the hidden block.  u3 is never
# added: its visits (10, 20, 6) break the shared pattern.
start = Bicluster([0, 1], [0, 2])
show("start", start)
show("after enlarge", greedy_enlarge(matrix, start, 0.9))

# Refinement goes the other way: from all users on p1, p3, p4 it drops u3.
noisy = Bicluster(range(4), [0, 2, 3])
show("noisy start", noisy)
show("after refine", greedy_refine(matrix, noisy, 0.9))
