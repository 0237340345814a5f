"""Clickstream ingestion and the user x page access matrix.

A clickstream log is turned into a matrix of hit counts: entry ``(i, j)``
is the number of times user ``i`` requested page ``j`` and zero when the
page was never visited.  Two line-oriented log grammars are accepted:

``per-user-sequence``
    line ``k`` (1-based) holds the whitespace separated page ids visited
    by the synthetic user ``u<k>``.
``user-prefixed``
    every line is ``<user_id>\\t<page_id>``; visits are grouped by user in
    order of first appearance.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "AccessMatrix",
    "Session",
    "SessionLog",
    "LOG_FORMATS",
    "parse_clickstream",
    "build_matrix",
    "read_matrix_csv",
    "write_matrix_csv",
]

LOG_FORMATS = ("per-user-sequence", "user-prefixed")


@dataclass(frozen=True)
class Session:
    user_id: str
    page_ids: tuple[str, ...]

    def __post_init__(self):
        if not self.user_id:
            raise ValueError("session user_id must be non-empty")
        if not self.page_ids:
            raise ValueError(f"session for user {self.user_id!r} has no page visits")


@dataclass(frozen=True)
class SessionLog:
    sessions: tuple[Session, ...] = field(default_factory=tuple)

    def __len__(self):
        return len(self.sessions)

    def __iter__(self):
        return iter(self.sessions)

    @property
    def total_visits(self) -> int:
        return sum(len(s.page_ids) for s in self.sessions)


class AccessMatrix:
    """Dense ``n x m`` matrix of non-negative hit counts with row/column labels.

    Parameters
    ----------
    values : array-like of shape (n, m)
        Hit counts.  Stored as a read-only float64 array.
    user_labels, page_labels : sequence of str
        Unique labels for rows and columns.
    """

    def __init__(self, values, user_labels: Sequence[str], page_labels: Sequence[str]):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"access matrix must be 2-D, got shape {arr.shape}")
        n, m = arr.shape
        if n < 2 or m < 2:
            raise ValueError(f"matrix too small for biclustering ({n}x{m}, need at least 2x2)")
        if not np.all(np.isfinite(arr)):
            raise ValueError("access matrix contains non-finite values")
        if np.any(arr < 0):
            i, j = np.argwhere(arr < 0)[0]
            raise ValueError(f"negative hit count at row {i}, column {j}")
        user_labels = [str(u) for u in user_labels]
        page_labels = [str(p) for p in page_labels]
        if len(user_labels) != n:
            raise ValueError(f"expected {n} user labels, got {len(user_labels)}")
        if len(page_labels) != m:
            raise ValueError(f"expected {m} page labels, got {len(page_labels)}")
        _check_unique(user_labels, "user")
        _check_unique(page_labels, "page")
        arr.setflags(write=False)
        self.values = arr
        self.user_labels = tuple(user_labels)
        self.page_labels = tuple(page_labels)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def total_hits(self) -> float:
        return float(self.values.sum())

    def __eq__(self, other):
        if not isinstance(other, AccessMatrix):
            return NotImplemented
        return (
            self.user_labels == other.user_labels
            and self.page_labels == other.page_labels
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        return f"AccessMatrix(n={self.n}, m={self.m}, total_hits={self.total_hits:g})"


def _check_unique(labels, kind):
    seen = set()
    for pos, label in enumerate(labels):
        if not label:
            raise ValueError(f"empty {kind} label at position {pos}")
        if label in seen:
            raise ValueError(f"duplicate {kind} label {label}")
        seen.add(label)


def parse_clickstream(text: str, format: str = "per-user-sequence") -> SessionLog:
    """Parse clickstream text into one session per distinct user.

    Blank lines are errors in ``user-prefixed`` logs and users without
    visits in ``per-user-sequence`` logs; both are reported with their
    1-based line number.
    """
    if format not in LOG_FORMATS:
        raise ValueError(f"unknown log format {format!r}; expected one of {LOG_FORMATS}")
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ValueError("no sessions")

    if format == "per-user-sequence":
        sessions = []
        for lineno, line in enumerate(lines, start=1):
            pages = line.split()
            if not pages:
                raise ValueError(f"line {lineno}: empty page sequence")
            sessions.append(Session(f"u{lineno}", tuple(pages)))
        return SessionLog(tuple(sessions))

    visits: dict[str, list[str]] = {}
    for lineno, line in enumerate(lines, start=1):
        fields = line.rstrip("\r").split("\t")
        if len(fields) != 2:
            raise ValueError(f"line {lineno}: expected 2 tab-separated fields, got {len(fields)}")
        user, page = (f.strip() for f in fields)
        if not user or not page:
            raise ValueError(f"line {lineno}: empty token")
        visits.setdefault(user, []).append(page)
    return SessionLog(tuple(Session(u, tuple(p)) for u, p in visits.items()))


def build_matrix(log: SessionLog) -> AccessMatrix:
    """Count hits per (user, page); rows and columns sorted by label."""
    if len(log) == 0:
        raise ValueError("no sessions")
    hits: dict[str, Counter] = {}
    for session in log:
        hits.setdefault(session.user_id, Counter()).update(session.page_ids)
    users = sorted(hits)
    pages = sorted({p for c in hits.values() for p in c})
    if len(users) < 2 or len(pages) < 2:
        raise ValueError(
            f"matrix too small for biclustering ({len(users)}x{len(pages)}, need at least 2x2)"
        )
    col = {p: j for j, p in enumerate(pages)}
    values = np.zeros((len(users), len(pages)))
    for i, user in enumerate(users):
        for page, count in hits[user].items():
            values[i, col[page]] = count
    return AccessMatrix(values, users, pages)


def _format_value(v: float) -> str:
    return np.format_float_positional(v, trim="-")


def write_matrix_csv(matrix: AccessMatrix) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["user", *matrix.page_labels])
    for label, row in zip(matrix.user_labels, matrix.values):
        writer.writerow([label, *(_format_value(v) for v in row)])
    return buf.getvalue()


def read_matrix_csv(text: str) -> AccessMatrix:
    """Read the comma-separated matrix format written by :func:`write_matrix_csv`.

    Errors carry 1-based row and column coordinates of the offending cell.
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise ValueError("empty matrix CSV")
    header = [h.strip() for h in rows[0]]
    if not header or header[0] != "user":
        raise ValueError("row 1: header must start with 'user'")
    pages = header[1:]
    seen = set()
    for col, page in enumerate(pages, start=2):
        if not page:
            raise ValueError(f"row 1, column {col}: empty page label")
        if page in seen:
            raise ValueError(f"row 1, column {col}: duplicate page label {page}")
        seen.add(page)

    users, values, seen = [], [], set()
    for rowno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ValueError(f"row {rowno}: expected {len(header)} fields, got {len(row)}")
        user = row[0].strip()
        if not user:
            raise ValueError(f"row {rowno}, column 1: empty user label")
        if user in seen:
            raise ValueError(f"row {rowno}, column 1: duplicate user label {user}")
        seen.add(user)
        parsed = []
        for col, cell in enumerate(row[1:], start=2):
            try:
                parsed.append(float(cell))
            except ValueError:
                raise ValueError(f"row {rowno}, column {col}: non-numeric value {cell!r}") from None
        users.append(user)
        values.append(parsed)
    if not values:
        raise ValueError("matrix CSV has no data rows")
    return AccessMatrix(np.array(values), users, pages)
