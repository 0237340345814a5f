"""Greedy node addition and deletion on biclusters.

``greedy_enlarge`` repeatedly adds the row or column that leaves the
bicluster most coherent while keeping ACV >= delta.  ``greedy_refine`` then
drops rows or columns whose removal raises ACV.

Candidate scoring never recomputes full correlation matrices.  Adding a row
to ``I`` appends one vector to the row-pair term (only its correlations with
the existing rows are new) and one observation to every column vector
(sufficient statistics updated by a rank-one term).  Columns are handled by
transposition, and removals use the same identities in reverse.  The chosen
move is always re-checked with the exact :func:`~webbicluster.coherence.acv`.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from .coherence import Bicluster, acv_terms

__all__ = ["greedy_enlarge", "greedy_refine", "greedy_seeds"]

# scores agreeing to this many decimals count as ties
_TIE_DECIMALS = 10
DEFAULT_MIN_GAIN = 1e-3


def _unit(vectors):
    """Centred, unit-norm rows; constant rows become zero."""
    centered = vectors - vectors.mean(axis=1, keepdims=True)
    flat = np.ptp(vectors, axis=1) == 0
    norms = np.sqrt(np.einsum("ij,ij->i", centered, centered))
    norms[flat] = 1.0
    unit = centered / norms[:, None]
    unit[flat] = 0.0
    return unit


def _pair_abs_sum(vectors):
    unit = _unit(vectors)
    corr = np.minimum(np.abs(unit @ unit.T), 1.0)
    np.fill_diagonal(corr, 0.0)
    return corr, unit


def _rank_one_pair_sums(gram, extra, scale, flat):
    """Off-diagonal ``sum |corr|`` after a rank-one change of a centred Gram matrix.

    Candidate ``c`` turns ``gram`` (k,k) into ``gram + scale * e e^T`` with
    ``e = extra[c]``, which is the centred cross-product matrix after adding
    (``scale = L/(L+1)``) or removing (``scale = -L/(L-1)``) one observation
    whose deviations from the current means are ``e``.  ``flat`` (c,k) marks
    vectors that end up constant.
    """
    scaled = scale * extra
    cov = scaled[:, :, None] * extra[:, None, :]
    cov += gram
    var = np.diagonal(gram)[None, :] + scaled * extra
    ok = ~flat & (var > 0)
    inv = np.zeros_like(var)
    np.sqrt(var, out=inv, where=ok)
    np.divide(1.0, inv, out=inv, where=ok)
    corr = np.abs(cov, out=cov)
    corr *= inv[:, :, None]
    corr *= inv[:, None, :]
    np.minimum(corr, 1.0, out=corr)
    return corr.sum(axis=(1, 2)) - np.einsum("cii->c", corr)


def _term_add_vector(vectors, candidates):
    """Pair term after appending each candidate as an extra vector."""
    k = vectors.shape[0]
    corr, unit = _pair_abs_sum(vectors)
    base = corr.sum()
    new = np.minimum(np.abs(_unit(candidates) @ unit.T), 1.0).sum(axis=1)
    return (base + 2.0 * new) / ((k + 1) * k)


def _term_add_observation(vectors, extra):
    """Pair term after extending every vector by one value per candidate.

    ``vectors`` is (k, L); ``extra`` is (k, c) holding candidate ``j``'s new
    value for each vector in column ``j``.
    """
    k, length = vectors.shape
    shift = vectors.mean(axis=1, keepdims=True)
    centered = vectors - shift
    flat = (np.ptp(vectors, axis=1) == 0)[None, :] & (extra.T == vectors[:, :1].T)
    sums = _rank_one_pair_sums(centered @ centered.T, (extra - shift).T,
                               length / (length + 1), flat)
    return sums / (k * k - k)


def _term_remove_vector(vectors):
    k = vectors.shape[0]
    corr, _ = _pair_abs_sum(vectors)
    return (corr.sum() - 2.0 * corr.sum(axis=1)) / ((k - 1) * (k - 2))


def _term_remove_observation(vectors):
    """Pair term after deleting each observation (column of ``vectors``) in turn."""
    k, length = vectors.shape
    centered = vectors - vectors.mean(axis=1, keepdims=True)
    drop = np.eye(length, dtype=bool)[:, None, :]
    stacked = np.broadcast_to(vectors[None, :, :], (length, k, length))
    hi = np.where(drop, -np.inf, stacked).max(axis=2)
    lo = np.where(drop, np.inf, stacked).min(axis=2)
    sums = _rank_one_pair_sums(centered @ centered.T, centered.T,
                               -length / (length - 1), hi == lo)
    return sums / (k * k - k)


def _complement(size, taken):
    free = np.ones(size, dtype=bool)
    free[taken] = False
    return np.flatnonzero(free)


def _addition_moves(values, rows, cols):
    n, m = values.shape
    sub = values[np.ix_(rows, cols)]
    moves = []
    cand_rows = _complement(n, rows)
    if cand_rows.size:
        new = values[np.ix_(cand_rows, cols)]
        row_t = _term_add_vector(sub, new)
        col_t = _term_add_observation(sub.T, new.T)
        vol = (len(rows) + 1) * len(cols)
        moves += [(r, c, vol, int(i)) for r, c, i in zip(row_t, col_t, cand_rows)]
    cand_cols = _complement(m, cols)
    if cand_cols.size:
        new = values[np.ix_(rows, cand_cols)]
        col_t = _term_add_vector(sub.T, new.T)
        row_t = _term_add_observation(sub, new)
        vol = len(rows) * (len(cols) + 1)
        moves += [(r, c, vol, n + int(j)) for r, c, j in zip(row_t, col_t, cand_cols)]
    return moves


def _removal_moves(values, rows, cols, floor_rows=2, floor_cols=2):
    n = values.shape[0]
    sub = values[np.ix_(rows, cols)]
    moves = []
    if len(rows) > floor_rows:
        row_t = _term_remove_vector(sub)
        col_t = _term_remove_observation(sub.T)
        vol = (len(rows) - 1) * len(cols)
        moves += [(r, c, vol, int(i)) for r, c, i in zip(row_t, col_t, rows)]
    if len(cols) > floor_cols:
        col_t = _term_remove_vector(sub.T)
        row_t = _term_remove_observation(sub)
        vol = len(rows) * (len(cols) - 1)
        moves += [(r, c, vol, n + int(j)) for r, c, j in zip(row_t, col_t, cols)]
    return moves


def _ranked(moves):
    """Moves as ``(score, index)`` pairs, best first.

    Order: higher ACV, then higher mean of the two terms, then larger volume,
    then lower index.  Scores equal to ``_TIE_DECIMALS`` places tie.
    """
    if not moves:
        return []
    row_t, col_t, vol, index = (np.asarray(a) for a in zip(*moves))
    score = np.clip(np.maximum(row_t, col_t), 0.0, 1.0)
    order = np.lexsort((index, -vol, -np.round(0.5 * (row_t + col_t), _TIE_DECIMALS),
                        -np.round(score, _TIE_DECIMALS)))
    return [(float(score[i]), int(index[i])) for i in order]


def _apply(rows, cols, index, n, add):
    rows, cols = set(rows), set(cols)
    target, item = (rows, index) if index < n else (cols, index - n)
    if add:
        target.add(item)
    else:
        target.discard(item)
    return Bicluster(rows, cols)


def _pad_to_2x2(matrix, b):
    n, m = matrix.shape
    need_rows = max(0, 2 - len(b.rows))
    need_cols = max(0, 2 - len(b.cols))
    if need_rows + need_cols > 2:
        return None
    free_rows = [i for i in range(n) if i not in set(b.rows)]
    free_cols = [j for j in range(m) if j not in set(b.cols)]
    best = None
    for add_r in itertools.combinations(free_rows, need_rows):
        for add_c in itertools.combinations(free_cols, need_cols):
            cand = Bicluster(b.rows + add_r, b.cols + add_c)
            row_t, col_t = acv_terms(matrix, cand)
            score = min(1.0, max(0.0, row_t, col_t))
            key = (-round(score, _TIE_DECIMALS), -round(0.5 * (row_t + col_t), _TIE_DECIMALS),
                   add_r + tuple(n + j for j in add_c))
            if best is None or key < best[0]:
                best = (key, cand)
    return None if best is None else best[1]


def _pad(matrix, b, min_rows, min_cols):
    """Most coherent superset of ``b`` with at least ``min_rows x min_cols``.

    Shapes below 2x2 are completed by exhaustive search over the (at most
    two) missing rows/columns; further padding adds one row or column at a
    time in the short dimension, choosing the highest resulting ACV.
    Returns ``None`` when the target shape cannot be reached.
    """
    n, m = matrix.shape
    if min_rows > n or min_cols > m:
        return None
    if b.is_degenerate:
        b = _pad_to_2x2(matrix, b)
        if b is None:
            return None
    while len(b.rows) < min_rows or len(b.cols) < min_cols:
        moves = _addition_moves(matrix.values, list(b.rows), list(b.cols))
        moves = [mv for mv in moves
                 if (mv[3] < n and len(b.rows) < min_rows) or (mv[3] >= n and len(b.cols) < min_cols)]
        _, index = _ranked(moves)[0]
        b = _apply(b.rows, b.cols, index, n, add=True)
    return b.with_acv(matrix)


def greedy_enlarge(matrix, b: Bicluster, delta: float, min_rows: int = 2,
                   min_cols: int = 2) -> Bicluster:
    """Grow ``b`` one row or column at a time while ACV stays >= ``delta``.

    Among qualifying additions the one with the highest resulting ACV wins;
    ties go to the higher mean of the row and column terms, then the larger
    volume, then the lowest index (rows before columns).  A bicluster
    smaller than ``min_rows x min_cols`` (never less than 2x2) is first
    padded to its most coherent superset of that shape.
    """
    values = matrix.values
    n, m = values.shape
    b.check_bounds(n, m)
    min_rows, min_cols = max(2, min_rows), max(2, min_cols)
    if len(b.rows) < min_rows or len(b.cols) < min_cols:
        padded = _pad(matrix, b, min_rows, min_cols)
        if padded is None:
            return Bicluster(b.rows, b.cols)
        b = padded
    current = b.with_acv(matrix)
    while len(current.rows) < n or len(current.cols) < m:
        rows, cols = list(current.rows), list(current.cols)
        chosen = None
        for score, index in _ranked(_addition_moves(values, rows, cols)):
            if score < delta - 1e-9:
                break
            cand = _apply(rows, cols, index, n, add=True).with_acv(matrix)
            if cand.acv >= delta:
                chosen = cand
                break
        if chosen is None:
            break
        current = chosen
    return current


def _improves(new, old, need):
    return new > old and new - old >= need


def greedy_refine(matrix, b: Bicluster, delta: float, min_gain: float = DEFAULT_MIN_GAIN,
                  min_rows: int = 2, min_cols: int = 2) -> Bicluster:
    """Drop rows or columns while that strictly raises ACV, never below the shape floor.

    Each step considers the removals that raise ACV, preferring the
    dimension whose term currently sets ACV, and takes the row or column
    whose own-dimension term gains most (a row is judged by the row-pair
    term, a column by the column-pair term).  Ranking on total ACV instead
    would favour dropping columns, because fewer columns inflate every row
    correlation.  While the bicluster is under ``delta`` any strict ACV
    increase qualifies; above it the increase must reach ``min_gain``, which
    keeps a coherent but slightly noisy block from being whittled down to a
    perfectly correlated corner.
    """
    values = matrix.values
    n, m = values.shape
    b.check_bounds(n, m)
    if b.is_degenerate:
        raise ValueError("greedy_refine needs a bicluster of at least 2x2")
    floor_rows, floor_cols = max(2, min_rows), max(2, min_cols)
    current = b.with_acv(matrix)
    while len(current.rows) > floor_rows or len(current.cols) > floor_cols:
        need = 0.0 if current.acv < delta else min_gain
        row_now, col_now = acv_terms(matrix, current)
        rows, cols = list(current.rows), list(current.cols)
        rows_lead = row_now >= col_now
        ranked = []
        for row_t, col_t, _, index in _removal_moves(values, rows, cols, floor_rows, floor_cols):
            is_row = index < n
            own = row_t - row_now if is_row else col_t - col_now
            score = min(1.0, max(0.0, row_t, col_t))
            if _improves(score, current.acv, need):
                ranked.append((is_row != rows_lead, -round(own, _TIE_DECIMALS),
                               -round(score, _TIE_DECIMALS), index))
        chosen = None
        for *_, index in sorted(ranked):
            cand = _apply(rows, cols, index, n, add=False).with_acv(matrix)
            if _improves(cand.acv, current.acv, need):
                chosen = cand
                break
        if chosen is None:
            break
        current = chosen
    return current


def greedy_seeds(matrix, seeds: Sequence[Bicluster], delta: float,
                 min_gain: float = DEFAULT_MIN_GAIN, min_rows: int = 2, min_cols: int = 2,
                 rounds: int = 5, n_jobs: int = 1) -> list[Bicluster]:
    """Alternate enlarge and refine on every seed until the refined bicluster repeats.

    At most ``rounds`` enlarge/refine cycles run per seed.  Output order
    matches input order.
    """
    floor = (max(2, min_rows), max(2, min_cols))
    # seeds often converge onto the same block; both passes are deterministic
    grown_memo: dict[Bicluster, Bicluster] = {}
    refined_memo: dict[Bicluster, Bicluster] = {}

    def improve(seed):
        current = seed
        for _ in range(rounds):
            grown = grown_memo.get(current)
            if grown is None:
                grown = grown_memo[current] = greedy_enlarge(matrix, current, delta, *floor)
            if len(grown.rows) < floor[0] or len(grown.cols) < floor[1]:
                return grown
            refined = refined_memo.get(grown)
            if refined is None:
                refined = refined_memo[grown] = greedy_refine(matrix, grown, delta, min_gain,
                                                              *floor)
            if refined == current:
                break
            current = refined
        return current

    if n_jobs == 1:
        return [improve(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(improve, seeds))
