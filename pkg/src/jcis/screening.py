"""All-pairs screening with a deterministic global ranking.

Pairs are ranked by ``r_hat`` descending, ties broken by ``(j1, j2)``
ascending.  That is a total order, so ranks and top-k lists never depend on
the number of workers or on how the pair space was split.
"""
from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

import numpy as np

from . import _kernels
from .errors import ConfigurationError, DegenerateVarianceError, EmptyResultError
from .stats import Dataset, column_summary

ALL_PAIRS = "all_pairs"
WITHIN_GROUP = "within_group"
RESTRICTIONS = (ALL_PAIRS, WITHIN_GROUP)

# target number of pairs scored per work item
CHUNK_PAIRS = 1 << 16


@dataclass(frozen=True)
class PairScore:
    j1: int
    j2: int
    name1: str
    name2: str
    r_hat: float


@dataclass
class ScreenResult:
    """Sorted pair scores, stored as parallel arrays.

    Indexing or iterating yields :class:`PairScore` objects.
    """

    j1: np.ndarray
    j2: np.ndarray
    r_hat: np.ndarray
    column_names: list
    restriction: str = ALL_PAIRS
    top_k: Optional[int] = None
    skipped_columns: list = field(default_factory=list)
    n_observations: Optional[int] = None
    n_evaluated: int = 0
    provenance: dict = field(default_factory=dict)

    def __len__(self):
        return self.r_hat.shape[0]

    def __getitem__(self, i) -> PairScore:
        a, b = int(self.j1[i]), int(self.j2[i])
        return PairScore(a, b, self.column_names[a], self.column_names[b],
                         float(self.r_hat[i]))

    def __iter__(self) -> Iterator[PairScore]:
        return (self[i] for i in range(len(self)))

    @property
    def scores(self) -> list:
        return list(self)

    def head(self, k: int) -> "ScreenResult":
        k = min(k, len(self))
        return ScreenResult(self.j1[:k], self.j2[:k], self.r_hat[:k],
                            self.column_names, self.restriction, k,
                            list(self.skipped_columns), self.n_observations,
                            self.n_evaluated, dict(self.provenance))


def _check_restriction(restriction, groups):
    if restriction not in RESTRICTIONS:
        raise ConfigurationError(f"unknown pair restriction {restriction!r}")
    if restriction == WITHIN_GROUP and not groups:
        raise ConfigurationError("within_group screening needs group labels")


def enumerate_pairs(p: int, restriction: str = ALL_PAIRS,
                    groups: Optional[Mapping[int, str]] = None):
    """Yield ``(j1, j2)``, ``j1 < j2``, in lexicographic order."""
    _check_restriction(restriction, groups)
    if p < 2:
        raise ConfigurationError("need at least 2 columns")
    if restriction == WITHIN_GROUP:
        missing = [j for j in range(p) if j not in groups]
        if missing:
            raise ConfigurationError(f"no group label for columns {missing[:5]}")
    for a in range(p):
        for b in range(a + 1, p):
            if restriction == ALL_PAIRS or groups[a] == groups[b]:
                yield a, b


def total_order(r_hat, j1, j2) -> np.ndarray:
    """Indices that sort by ``r_hat`` descending, then ``(j1, j2)`` ascending."""
    return np.lexsort((j2, j1, -r_hat))


def _pairs_per_row(codes: np.ndarray) -> np.ndarray:
    m = codes.shape[0]
    if np.all(codes == codes[0]):
        return np.arange(m - 1, -1, -1, dtype=np.int64)
    counts = np.empty(m, dtype=np.int64)
    for a in range(m):
        counts[a] = np.count_nonzero(codes[a + 1:] == codes[a])
    return counts


def _row_chunks(per_row: np.ndarray, target: int):
    chunks = []
    start, acc = 0, 0
    for a, c in enumerate(per_row):
        acc += int(c)
        if acc >= target:
            chunks.append((start, a + 1, acc))
            start, acc = a + 1, 0
    if acc > 0:
        chunks.append((start, per_row.shape[0], acc))
    return chunks


def _column_moments(values: np.ndarray):
    """Per-column means and centred sums of squares, accumulated wide."""
    wide = values.astype(np.longdouble)
    means = np.sum(wide, axis=0) / values.shape[0]
    dev = wide - means[None, :]
    return means.astype(np.float64), np.sum(dev * dev, axis=0).astype(np.float64)


class _Prepared:
    """Centred, non-constant columns in compressed index space."""

    def __init__(self, dataset: Dataset, restriction: str):
        y_summary = column_summary(dataset.response)
        if y_summary.centered_sq_sum == 0.0:
            raise DegenerateVarianceError("response is constant (zero variance)")
        values = dataset.values
        constant = np.all(values == values[0:1, :], axis=0)
        self.skipped = [(int(j), "zero variance") for j in np.flatnonzero(constant)]
        keep = np.flatnonzero(~constant)
        if keep.shape[0] < 2:
            raise EmptyResultError(
                f"{keep.shape[0]} non-constant column(s); no pairs to screen")
        means, css = _column_moments(values[:, keep])
        self.index = keep.astype(np.int64)
        self.dev = np.asfortranarray(values[:, keep] - means[None, :])
        self.roots = np.sqrt(css)
        self.dev_y = np.ascontiguousarray(dataset.response - y_summary.mean)
        self.root_y = math.sqrt(y_summary.centered_sq_sum)
        self.sqrt_n = math.sqrt(dataset.n)
        if restriction == WITHIN_GROUP:
            labels = [dataset.groups[int(j)] for j in keep]
            _, codes = np.unique(np.asarray(labels, dtype=object).astype(str),
                                 return_inverse=True)
            self.codes = codes.astype(np.int64)
        else:
            self.codes = np.zeros(len(keep), dtype=np.int64)

    def score_chunk(self, row_start, row_stop, count):
        a = np.empty(count, dtype=np.int64)
        b = np.empty(count, dtype=np.int64)
        r = np.empty(count, dtype=np.float64)
        k = _kernels.score_rows(self.dev, self.dev_y, self.roots, self.root_y,
                                self.sqrt_n, self.codes, row_start, row_stop,
                                a, b, r)
        assert k == count
        return self.index[a], self.index[b], r


def _ordered_map(pool, fn, items, window):
    """Like ``pool.map`` but with at most ``window`` results in flight."""
    pending = deque()
    for item in items:
        pending.append(pool.submit(fn, item))
        if len(pending) >= window:
            yield pending.popleft().result()
    while pending:
        yield pending.popleft().result()


def _select(j1, j2, r, top_k):
    order = total_order(r, j1, j2)
    if top_k is not None:
        order = order[:top_k]
    return j1[order], j2[order], r[order]


def screen(dataset: Dataset, restriction: str = ALL_PAIRS,
           top_k: Optional[int] = None, workers: int = 1) -> ScreenResult:
    """Score every admissible pair of ``dataset`` and rank them.

    Constant columns are skipped and reported.  With ``top_k`` set only the
    best ``top_k`` pairs are kept and memory stays independent of the number
    of pairs.  Output is bit-identical for any ``workers >= 1``.
    """
    _check_restriction(restriction, dataset.groups)
    if top_k is not None and top_k < 1:
        raise ConfigurationError("top_k must be a positive integer")
    if workers < 1:
        raise ConfigurationError("workers must be >= 1")
    prep = _Prepared(dataset, restriction)
    per_row = _pairs_per_row(prep.codes)
    n_pairs = int(per_row.sum())
    if n_pairs == 0:
        raise EmptyResultError("no admissible pairs under the restriction")
    chunks = _row_chunks(per_row, CHUNK_PAIRS)

    def work(chunk):
        return _select(*prep.score_chunk(*chunk), top_k)

    if workers == 1:
        parts = map(work, chunks)
        pool = None
    else:
        pool = ThreadPoolExecutor(max_workers=workers)
        parts = _ordered_map(pool, work, chunks, 2 * workers)
    try:
        if top_k is None:
            # chunks arrive in pair order, each already in total order, so a
            # stable sort on the score alone restores the total order
            collected = list(parts)
            j1 = np.concatenate([c[0] for c in collected])
            j2 = np.concatenate([c[1] for c in collected])
            r = np.concatenate([c[2] for c in collected])
            del collected
            order = np.argsort(-r, kind="stable")
            j1, j2, r = j1[order], j2[order], r[order]
        else:
            j1 = np.empty(0, dtype=np.int64)
            j2 = np.empty(0, dtype=np.int64)
            r = np.empty(0, dtype=np.float64)
            for c1, c2, cr in parts:
                j1, j2, r = _select(np.concatenate([j1, c1]),
                                    np.concatenate([j2, c2]),
                                    np.concatenate([r, cr]), top_k)
    finally:
        if pool is not None:
            pool.shutdown()
    return ScreenResult(j1, j2, r, list(dataset.column_names), restriction,
                        top_k, prep.skipped, dataset.n, n_pairs)


def rank_of_pair(result: ScreenResult, j1: int, j2: int) -> Optional[int]:
    """1-based rank of ``(j1, j2)``, or ``None`` if the pair is absent."""
    hits = np.flatnonzero((result.j1 == j1) & (result.j2 == j2))
    if hits.size == 0:
        return None
    return int(hits[0]) + 1
