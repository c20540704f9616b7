"""Joint-cumulant estimators for a single covariate pair.

The score of a pair ``(x1, x2)`` against a response ``y`` is the absolute
third-order joint cumulant normalised by the three standard deviations::

    r_hat = sqrt(n) |sum (x1 - m1)(x2 - m2)(y - my)|
            / sqrt(sum (x1 - m1)^2 * sum (x2 - m2)^2 * sum (y - my)^2)

Everything here works on centred data (means first, deviations second).
The raw-moment expansion lives in :func:`tau_hat_oracle` and is only meant
as an independent cross-check.  The all-pairs path in ``screening`` uses
the compiled float64 kernel instead and agrees to about 1e-15 relative.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import DegenerateVarianceError, InputError

RESPONSE_KINDS = ("continuous", "binary", "categorical")
# single-pair estimators accumulate in extended precision where available
WIDE = np.longdouble


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    centered_sq_sum: float


@dataclass
class Dataset:
    """An ``n x p`` covariate matrix with a response vector.

    ``values`` is stored column-major so that each covariate is contiguous.
    ``groups`` maps column index to a group id (for example a chromosome).
    ``dropped_columns`` records columns removed during ingestion.
    """

    values: np.ndarray
    response: np.ndarray
    column_names: Optional[Sequence[str]] = None
    response_kind: Optional[str] = None
    groups: Optional[Mapping[int, str]] = None
    dropped_columns: list = field(default_factory=list)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise InputError(f"values must be 2-D, got shape {values.shape}")
        self.values = np.asfortranarray(values)
        self.response = np.ascontiguousarray(self.response, dtype=np.float64)
        n, p = self.values.shape
        if n < 3 or p < 2:
            raise InputError(f"need n >= 3 and p >= 2, got n={n}, p={p}")
        if self.response.shape != (n,):
            raise InputError(
                f"response has shape {self.response.shape}, expected ({n},)")
        if not np.all(np.isfinite(self.values)):
            i, j = np.argwhere(~np.isfinite(self.values))[0]
            raise InputError(f"non-finite value at row {i}, column {j}")
        if not np.all(np.isfinite(self.response)):
            raise InputError("response contains non-finite values")
        if self.column_names is None:
            self.column_names = [f"X{j + 1}" for j in range(p)]
        self.column_names = [str(c) for c in self.column_names]
        if len(self.column_names) != p:
            raise InputError(
                f"{len(self.column_names)} column names for {p} columns")
        if self.response_kind is None:
            self.response_kind = infer_response_kind(self.response)
        if self.response_kind not in RESPONSE_KINDS:
            raise InputError(f"unknown response kind {self.response_kind!r}")
        if self.groups is not None:
            groups = {int(j): str(g) for j, g in dict(self.groups).items()}
            if sorted(groups) != list(range(p)):
                raise InputError("groups must assign every column exactly one id")
            self.groups = groups

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.values[:, j]


def infer_response_kind(y) -> str:
    y = np.asarray(y, dtype=np.float64)
    levels = np.unique(y)
    if levels.size <= 2 and np.all(np.isin(levels, (0.0, 1.0))):
        return "binary"
    if np.all(levels == np.round(levels)) and levels.size <= 10:
        return "categorical"
    return "continuous"


def _as_vector(x, name="x") -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise InputError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise InputError(f"{name} contains non-finite values")
    return x


def column_summary(x) -> MomentSummary:
    """Mean and centred sum of squares, computed in two passes.

    Sums are exactly rounded (``math.fsum``).  A constant column reports a
    centred sum of exactly zero.
    """
    x = _as_vector(x)
    n = x.shape[0]
    if n < 1:
        raise InputError("empty vector")
    if np.all(x == x[0]):
        return MomentSummary(float(x[0]), 0.0)
    mean = math.fsum(x) / n
    dev = x - mean
    return MomentSummary(mean, math.fsum(dev * dev))


def _check_triple(x1, x2, y):
    x1 = _as_vector(x1, "x1")
    x2 = _as_vector(x2, "x2")
    y = _as_vector(y, "y")
    if not (x1.shape == x2.shape == y.shape):
        raise InputError(
            f"length mismatch: {x1.shape[0]}, {x2.shape[0]}, {y.shape[0]}")
    if x1.shape[0] < 3:
        raise InputError("need at least 3 observations")
    return x1, x2, y


def _wide_deviations(x: np.ndarray) -> np.ndarray:
    xw = x.astype(WIDE)
    return xw - np.sum(xw) / WIDE(x.shape[0])


def tau_hat(x1, x2, y) -> float:
    """Sample three-way joint cumulant ``(1/n) sum d1 d2 dy`` (signed)."""
    x1, x2, y = _check_triple(x1, x2, y)
    d1, d2, dy = (_wide_deviations(v) for v in (x1, x2, y))
    return float(np.sum((d1 * d2) * dy) / WIDE(x1.shape[0]))


def tau_hat_oracle(x1, x2, y) -> float:
    """Reference value of :func:`tau_hat` from the raw-moment expansion.

    Evaluates the eight summands of the expanded product one pass each,
    with no centring.  Cancellation-prone by construction; use for testing.
    """
    x1, x2, y = _check_triple(x1, x2, y)
    x1, x2, y = (v.astype(WIDE) for v in (x1, x2, y))
    n = WIDE(x1.shape[0])
    m1, m2, my = np.sum(x1) / n, np.sum(x2) / n, np.sum(y) / n
    terms = [
        np.sum(x1 * x2 * y) / n,
        -np.sum(m1 * x2 * y) / n,
        -np.sum(x1 * m2 * y) / n,
        -np.sum(x1 * x2 * my) / n,
        np.sum(m1 * m2 * y) / n,
        np.sum(m1 * x2 * my) / n,
        np.sum(x1 * m2 * my) / n,
        -np.sum(np.full(x1.shape[0], m1 * m2 * my, dtype=WIDE)) / n,
    ]
    return float(np.sum(np.array(terms, dtype=WIDE)))


def pair_score(x1, x2, y) -> float:
    """Normalised joint-cumulant score of the pair ``(x1, x2)`` for ``y``.

    Raises :class:`DegenerateVarianceError` if any argument is constant.
    """
    x1, x2, y = _check_triple(x1, x2, y)
    devs = []
    for name, v in (("x1", x1), ("x2", x2), ("y", y)):
        if column_summary(v).centered_sq_sum == 0.0:
            raise DegenerateVarianceError(f"{name} is constant (zero variance)")
        devs.append(_wide_deviations(v))
    d1, d2, dy = devs
    roots = [np.sqrt(np.sum(d * d)) for d in devs]
    s = np.sum((d1 * d2) * dy)
    return float(np.sqrt(WIDE(x1.shape[0])) * abs(s)
                 / ((roots[0] * roots[1]) * roots[2]))
