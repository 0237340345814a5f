"""Correlation-based coherence of biclusters.

The Average Correlation Value (ACV) of a submatrix is the larger of two
averages: the mean absolute Pearson correlation over all ordered pairs of
distinct rows, and the same quantity over pairs of distinct columns.  A
pair involving a constant vector has no defined correlation and adds 0.

Fitness is the bicluster volume ``|I| * |J|`` when ACV clears the
threshold ``delta`` and zero otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "Bicluster",
    "FitnessPolicy",
    "pearson",
    "acv",
    "acv_terms",
    "mean_abs_correlation",
    "fitness",
    "compute_delta",
]


def _index_tuple(indices: Iterable[int], name: str) -> tuple[int, ...]:
    out = tuple(sorted({int(i) for i in indices}))
    if out and out[0] < 0:
        raise ValueError(f"negative {name} index {out[0]}")
    return out


@dataclass(frozen=True)
class Bicluster:
    """Row set ``I`` and column set ``J`` of a submatrix.

    Indices are normalised to sorted tuples without duplicates.  ``acv`` is
    an optional cached coherence value; it does not take part in equality.
    """

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    acv: Optional[float] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rows", _index_tuple(self.rows, "row"))
        object.__setattr__(self, "cols", _index_tuple(self.cols, "column"))

    @property
    def volume(self) -> int:
        return len(self.rows) * len(self.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def is_degenerate(self) -> bool:
        return len(self.rows) < 2 or len(self.cols) < 2

    def check_bounds(self, n: int, m: int) -> None:
        if self.rows and self.rows[-1] >= n:
            raise ValueError(f"row index {self.rows[-1]} out of bounds for {n} rows")
        if self.cols and self.cols[-1] >= m:
            raise ValueError(f"column index {self.cols[-1]} out of bounds for {m} columns")

    def with_acv(self, matrix) -> "Bicluster":
        """Copy with the ACV cache filled (``None`` for shapes below 2x2)."""
        value = None if self.is_degenerate else acv(matrix, self)
        return Bicluster(self.rows, self.cols, value)

    def submatrix(self, matrix) -> np.ndarray:
        return _values(matrix)[np.ix_(self.rows, self.cols)]


@dataclass(frozen=True)
class FitnessPolicy:
    """ACV threshold plus the smallest shape that can score.

    With only two columns every row correlation is +-1, so any ``k x 2``
    bicluster has ACV 1 regardless of content (likewise ``2 x k``).  The
    default floor of three rows and three columns keeps such strips from
    winning on volume alone.
    """

    delta: float
    delta_mode: str = "fixed"
    min_rows: int = 3
    min_cols: int = 3

    def __post_init__(self):
        if self.min_rows < 2 or self.min_cols < 2:
            raise ValueError("min_rows and min_cols must be at least 2")
        if self.delta_mode not in ("auto-mean-of-seeds", "fixed"):
            raise ValueError(f"unknown delta mode {self.delta_mode!r}")
        if not (0.0 <= self.delta <= 1.0):
            raise ValueError(f"δ out of range: {self.delta} (must lie in [0, 1])")

    @classmethod
    def auto(cls, matrix, seeds: Sequence[Bicluster], **kwargs) -> "FitnessPolicy":
        return cls(compute_delta(matrix, seeds), "auto-mean-of-seeds", **kwargs)

    def admits(self, bicluster: Bicluster) -> bool:
        return len(bicluster.rows) >= self.min_rows and len(bicluster.cols) >= self.min_cols


def _values(matrix) -> np.ndarray:
    return matrix.values if hasattr(matrix, "values") else np.asarray(matrix, dtype=np.float64)


def pearson(x, y) -> float:
    """Pearson product-moment correlation; ``nan`` if either vector is constant."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError(f"pearson needs equal-length 1-D vectors, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise ValueError("pearson needs vectors of length >= 2")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        return math.nan
    dx = x - x.mean()
    dy = y - y.mean()
    r = float(dx @ dy / math.sqrt(float(dx @ dx) * float(dy @ dy)))
    return min(1.0, max(-1.0, r))


def mean_abs_correlation(vectors: np.ndarray) -> float:
    """Mean ``|corr|`` over ordered pairs of distinct rows of ``vectors``.

    Equals ``(sum_ij |r_ij| - k) / (k^2 - k)`` with the diagonal counted as
    one; pairs with a constant row contribute zero.
    """
    k = vectors.shape[0]
    if k < 2:
        raise ValueError("need at least two vectors")
    centered = vectors - vectors.mean(axis=1, keepdims=True)
    flat = np.ptp(vectors, axis=1) == 0
    norms = np.sqrt(np.einsum("ij,ij->i", centered, centered))
    norms[flat] = 1.0
    unit = centered / norms[:, None]
    unit[flat] = 0.0
    corr = np.abs(unit @ unit.T)
    np.minimum(corr, 1.0, out=corr)
    off_diagonal = corr.sum() - np.trace(corr)
    return float(off_diagonal / (k * k - k))


def acv_terms(matrix, bicluster: Bicluster) -> tuple[float, float]:
    """Row-pair and column-pair mean absolute correlations of the submatrix."""
    if bicluster.is_degenerate:
        raise ValueError(f"ACV undefined below 2x2 (got {bicluster.shape[0]}x{bicluster.shape[1]})")
    sub = bicluster.submatrix(matrix)
    return mean_abs_correlation(sub), mean_abs_correlation(sub.T)


def acv(matrix, bicluster: Bicluster) -> float:
    """Average Correlation Value of ``matrix[I, J]``, clamped to ``[0, 1]``."""
    row_term, col_term = acv_terms(matrix, bicluster)
    return min(1.0, max(0.0, row_term, col_term))


def fitness(matrix, bicluster: Bicluster, policy: FitnessPolicy) -> float:
    """Volume when the bicluster meets the policy's shape floor and ACV >= delta, else 0."""
    if not policy.admits(bicluster):
        return 0.0
    value = bicluster.acv if bicluster.acv is not None else acv(matrix, bicluster)
    return float(bicluster.volume) if value >= policy.delta else 0.0


def compute_delta(matrix, seeds: Sequence[Bicluster]) -> float:
    """Mean ACV over the seeds that are at least 2x2."""
    if not seeds:
        raise ValueError("cannot auto-compute δ: no seeds")
    scores = [
        s.acv if s.acv is not None else acv(matrix, s) for s in seeds if not s.is_degenerate
    ]
    if not scores:
        raise ValueError("cannot auto-compute δ: every seed is smaller than 2x2")
    return min(1.0, max(0.0, math.fsum(scores) / len(scores)))
