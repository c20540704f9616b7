"""Adjacent-ratio estimate of how many top pairs to retain."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import InputError, NoCutoffError


@dataclass(frozen=True)
class CutoffEstimate:
    d_hat: int
    achieved_ratio: float
    score_at_cut: float
    search_bound: int
    floor: float

    def to_dict(self):
        d = asdict(self)
        if math.isinf(d["achieved_ratio"]):
            d["achieved_ratio"] = "inf"
        return d


def estimate_cutoff(sorted_scores, search_bound: Optional[int] = None,
                    floor: Optional[float] = None,
                    n: Optional[int] = None) -> CutoffEstimate:
    """Pick ``d`` maximising ``scores[d] / scores[d + 1]`` (1-based).

    Only indices ``d <= search_bound`` whose score is at least ``floor`` are
    considered, which keeps huge ratios between tiny scores out of play.

    Parameters
    ----------
    sorted_scores : sequence of float
        Non-negative scores in non-increasing order.  Unsorted input is
        rejected.
    search_bound : int, optional
        Largest ``d`` examined.  Defaults to ``min(len - 1, n)`` when ``n``
        (the sample size) is given, else ``len - 1``.
    floor : float, optional
        Minimum score at ``d``.  Defaults to the median of the examined
        scores ``scores[1 .. search_bound + 1]``.  Pass 0 to disable.

    Ties in the ratio go to the smallest ``d``.  A zero successor counts as
    an infinite ratio.
    """
    s = np.asarray(sorted_scores, dtype=np.float64)
    if s.ndim != 1 or s.shape[0] < 2:
        raise InputError("need at least 2 scores")
    if not np.all(np.isfinite(s)) or np.any(s < 0):
        raise InputError("scores must be finite and non-negative")
    if np.any(np.diff(s) > 0):
        raise InputError("scores must be sorted in descending order")
    limit = s.shape[0] - 1
    if search_bound is None:
        search_bound = limit if n is None else min(limit, int(n))
    search_bound = int(min(search_bound, limit))
    if search_bound < 1:
        raise InputError("search_bound must be >= 1")
    if floor is None:
        floor = float(np.median(s[:search_bound + 1]))
    head = s[:search_bound]
    nxt = s[1:search_bound + 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(nxt > 0, head / np.where(nxt > 0, nxt, 1.0), np.inf)
    # 0/0 only arises below any positive floor; keep it out of the argmax
    ratios = np.where((head == 0) & (nxt == 0), 1.0, ratios)
    eligible = head >= floor
    if not np.any(eligible):
        raise NoCutoffError(
            f"no score among the first {search_bound} reaches floor {floor!r}")
    ratios = np.where(eligible, ratios, -np.inf)
    d = int(np.argmax(ratios))  # first maximum, i.e. smallest index
    return CutoffEstimate(d + 1, float(ratios[d]), float(s[d]), search_bound,
                          float(floor))
