"""Synthetic access matrices with a planted coherent bicluster, and recovery scores."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _rng
from .coherence import Bicluster
from .usage_matrix import AccessMatrix

__all__ = ["PlantSpec", "plant", "jaccard", "jaccard_score"]


@dataclass(frozen=True)
class PlantSpec:
    """Shape and value model of a planted bicluster.

    In ``additive`` mode planted cell ``(i, j)`` is ``base_row[j] +
    row_offsets[i]``; in ``multiplicative`` mode it is ``base_row[j] *
    row_offsets[i]``.  Either way uniform jitter in ``[-jitter, jitter]`` is
    added.  ``base_row`` and ``row_offsets`` are drawn from ``base_range`` and
    ``offset_range`` when not given.
    """

    n: int = 100
    m: int = 30
    plant_rows: int = 20
    plant_cols: int = 8
    base_row: Optional[Sequence[float]] = None
    row_offsets: Optional[Sequence[float]] = None
    noise_low: float = 0.0
    noise_high: float = 10.0
    jitter: float = 0.1
    seed: int = 0
    mode: str = "additive"
    base_range: tuple[float, float] = (0.0, 10.0)
    offset_range: tuple[float, float] = (0.0, 5.0)

    def __post_init__(self):
        if self.n < 2 or self.m < 2:
            raise ValueError("matrix must be at least 2x2")
        if not (1 <= self.plant_rows <= self.n):
            raise ValueError(f"plant_rows={self.plant_rows} must lie in [1, n={self.n}]")
        if not (1 <= self.plant_cols <= self.m):
            raise ValueError(f"plant_cols={self.plant_cols} must lie in [1, m={self.m}]")
        if self.noise_low > self.noise_high:
            raise ValueError("noise_low must not exceed noise_high")
        if self.jitter < 0:
            raise ValueError("jitter must be non-negative")
        if self.mode not in ("additive", "multiplicative"):
            raise ValueError(f"unknown plant mode {self.mode!r}")
        if self.base_row is not None and len(self.base_row) != self.plant_cols:
            raise ValueError("base_row length must equal plant_cols")
        if self.row_offsets is not None and len(self.row_offsets) != self.plant_rows:
            raise ValueError("row_offsets length must equal plant_rows")


def _labels(prefix, count):
    width = len(str(count - 1))
    return [f"{prefix}{i:0{width}d}" for i in range(count)]


def plant(spec: PlantSpec) -> tuple[AccessMatrix, Bicluster]:
    """Background noise with one planted block; returns matrix and ground truth."""
    rng = _rng.stream(spec.seed, _rng.SYNTH)
    rows = np.sort(rng.choice(spec.n, spec.plant_rows, replace=False))
    cols = np.sort(rng.choice(spec.m, spec.plant_cols, replace=False))
    values = rng.uniform(spec.noise_low, spec.noise_high, size=(spec.n, spec.m))
    base = (np.asarray(spec.base_row, dtype=float) if spec.base_row is not None
            else rng.uniform(*spec.base_range, size=spec.plant_cols))
    offsets = (np.asarray(spec.row_offsets, dtype=float) if spec.row_offsets is not None
               else rng.uniform(*spec.offset_range, size=spec.plant_rows))
    if spec.mode == "additive":
        block = base[None, :] + offsets[:, None]
    else:
        block = base[None, :] * offsets[:, None]
    if spec.jitter > 0:
        block = block + rng.uniform(-spec.jitter, spec.jitter, size=block.shape)
    values[np.ix_(rows, cols)] = block
    np.maximum(values, 0.0, out=values)
    matrix = AccessMatrix(values, _labels("u", spec.n), _labels("p", spec.m))
    truth = Bicluster(rows, cols)
    return matrix, (truth if truth.is_degenerate else truth.with_acv(matrix))


def jaccard(a, b) -> float:
    a, b = set(a), set(b)
    union = a | b
    return 1.0 if not union else len(a & b) / len(union)


def jaccard_score(found: Bicluster, truth: Bicluster) -> tuple[float, float, float]:
    """Row, column and cell Jaccard indices between two biclusters."""
    rows_common = len(set(found.rows) & set(truth.rows))
    cols_common = len(set(found.cols) & set(truth.cols))
    inter = rows_common * cols_common
    union = found.volume + truth.volume - inter
    cells = 1.0 if union == 0 else inter / union
    return jaccard(found.rows, truth.rows), jaccard(found.cols, truth.cols), cells
