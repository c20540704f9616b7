"""Plain-text ingestion and serialisation (TSV tables, JSON documents)."""
from __future__ import annotations

import csv
import json
import logging
import math
import os
from typing import Optional

import numpy as np

from .errors import ConfigurationError, FormatError, InputError
from .screening import ALL_PAIRS, PairScore, ScreenResult
from .stats import Dataset

log = logging.getLogger(__name__)

MISSING_TOKENS = frozenset({"", "NA"})
SCORE_COLUMNS = ["rank", "j1", "j2", "name1", "name2", "r_hat"]


def _sniff_delimiter(path):
    return "," if str(path).endswith(".csv") else "\t"


def _parse_cell(token, row, col):
    token = token.strip()
    if token in MISSING_TOKENS:
        return math.nan, True
    try:
        v = float(token)
    except ValueError:
        raise FormatError(
            f"cannot parse {token!r} at row {row}, column {col!r}") from None
    if not math.isfinite(v):
        raise FormatError(f"non-finite value {token!r} at row {row}, column {col!r}")
    return v, False


def _minor_frequency(col: np.ndarray) -> Optional[float]:
    """Frequency of the least common level, for integer-coded columns."""
    if not np.all(col == np.round(col)):
        return None
    _, counts = np.unique(col, return_counts=True)
    if counts.size < 2:
        return None
    return counts.min() / counts.sum()


def load_matrix(path, response_column: str, delimiter: Optional[str] = None,
                max_missing: float = 0.05, impute_mode: Optional[str] = None,
                min_minor_freq: Optional[float] = None,
                response_kind: Optional[str] = None) -> Dataset:
    """Read a delimited numeric table with a header row.

    Columns whose fraction of missing entries (``NA`` or empty) exceeds
    ``max_missing`` are dropped.  Remaining gaps raise unless
    ``impute_mode="mean"``.  With ``min_minor_freq`` set, integer-coded
    columns whose rarest level is below that frequency are dropped too.
    Dropped columns are listed in ``Dataset.dropped_columns``.
    """
    if impute_mode not in (None, "none", "mean"):
        raise ConfigurationError(f"unknown impute mode {impute_mode!r}")
    delimiter = delimiter or _sniff_delimiter(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        if response_column not in header:
            raise InputError(f"response column {response_column!r} not in header")
        rows, missing = [], []
        for r, line in enumerate(reader, start=2):
            if not line or all(not t.strip() for t in line):
                continue
            if len(line) != len(header):
                raise FormatError(
                    f"row {r} has {len(line)} fields, header has {len(header)}")
            parsed = [_parse_cell(t, r, header[c]) for c, t in enumerate(line)]
            rows.append([v for v, _ in parsed])
            missing.append([m for _, m in parsed])
    if not rows:
        raise FormatError(f"{path}: no data rows")
    table = np.array(rows, dtype=np.float64)
    miss = np.array(missing, dtype=bool)
    yi = header.index(response_column)
    if miss[:, yi].any():
        raise InputError(f"response column {response_column!r} has missing values")
    dropped = []
    keep = []
    for c, name in enumerate(header):
        if c == yi:
            continue
        rate = miss[:, c].mean()
        if rate > max_missing:
            dropped.append((name, f"missing rate {rate:.3f} > {max_missing}"))
            continue
        col = table[:, c]
        if miss[:, c].any():
            if impute_mode != "mean":
                i = int(np.flatnonzero(miss[:, c])[0])
                raise InputError(
                    f"missing value at row {i + 2}, column {name!r} "
                    "(use impute mode 'mean')")
            col[miss[:, c]] = col[~miss[:, c]].mean()
        if min_minor_freq is not None:
            freq = _minor_frequency(col)
            if freq is not None and freq < min_minor_freq:
                dropped.append((name, f"minor frequency {freq:.3f} < {min_minor_freq}"))
                continue
        keep.append(c)
    for name, reason in dropped:
        log.warning("dropped column %s: %s", name, reason)
    if len(keep) < 2:
        raise InputError(f"fewer than 2 covariate columns left after filtering")
    return Dataset(table[:, keep], table[:, yi], [header[c] for c in keep],
                   response_kind=response_kind, dropped_columns=dropped)


def load_groups(path, delimiter: Optional[str] = None) -> dict:
    """Read ``column-name<TAB>group-id`` lines into a dict (``#`` comments ok)."""
    delimiter = delimiter or _sniff_delimiter(path)
    mapping = {}
    with open(path, newline="") as fh:
        for r, line in enumerate(csv.reader(fh, delimiter=delimiter), start=1):
            if not line or line[0].startswith("#") or all(not t.strip() for t in line):
                continue
            if len(line) != 2:
                raise FormatError(f"{path}:{r}: expected 2 fields, got {len(line)}")
            mapping[line[0].strip()] = line[1].strip()
    return mapping


def attach_groups(dataset: Dataset, mapping: dict) -> Dataset:
    """Return ``dataset`` with group labels resolved from column names."""
    missing = [c for c in dataset.column_names if c not in mapping]
    if missing:
        raise ConfigurationError(
            f"no group for {len(missing)} column(s), e.g. {missing[:3]}")
    for extra in sorted(set(mapping) - set(dataset.column_names)):
        log.warning("group mapping for unknown column %s ignored", extra)
    groups = {j: mapping[c] for j, c in enumerate(dataset.column_names)}
    return Dataset(dataset.values, dataset.response, dataset.column_names,
                   dataset.response_kind, groups, list(dataset.dropped_columns))


def write_scores(result: ScreenResult, path) -> None:
    """Write ranked scores as TSV; ``r_hat`` keeps 17 significant digits."""
    if hasattr(path, "write"):
        _write_scores(result, path)
        return
    with open(path, "w", newline="") as fh:
        _write_scores(result, fh)


def _write_scores(result, fh):
    w = csv.writer(fh, delimiter="\t", lineterminator="\n")
    w.writerow(SCORE_COLUMNS)
    names = result.column_names
    for rank, (a, b, r) in enumerate(zip(result.j1.tolist(), result.j2.tolist(),
                                         result.r_hat.tolist()), start=1):
        w.writerow([rank, a, b, names[a], names[b], f"{r:.17g}"])


def read_scores(path) -> list:
    """Read a scores TSV back; rejects unsorted or malformed files."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        header = next(reader, None)
        if header != SCORE_COLUMNS:
            raise FormatError(f"{path}: expected header {SCORE_COLUMNS}")
        for line_no, line in enumerate(reader, start=2):
            if not line:
                continue
            if len(line) != len(SCORE_COLUMNS):
                raise FormatError(f"{path}:{line_no}: expected 6 fields")
            try:
                rank, j1, j2 = int(line[0]), int(line[1]), int(line[2])
                r = float(line[5])
            except ValueError:
                raise FormatError(f"{path}:{line_no}: malformed row") from None
            if rank != len(out) + 1:
                raise FormatError(f"{path}:{line_no}: rank {rank} out of sequence")
            if not (j1 < j2) or not math.isfinite(r) or r < 0:
                raise FormatError(f"{path}:{line_no}: invalid pair or score")
            if out:
                prev = out[-1]
                if (r, -j1, -j2) > (prev.r_hat, -prev.j1, -prev.j2):
                    raise FormatError(f"{path}:{line_no}: scores not in descending order")
            out.append(PairScore(j1, j2, line[3], line[4], r))
    return out


def result_from_scores(scores: list, restriction: str = ALL_PAIRS) -> ScreenResult:
    names = {}
    for s in scores:
        names[s.j1], names[s.j2] = s.name1, s.name2
    width = max(names) + 1 if names else 0
    column_names = [names.get(j, "") for j in range(width)]
    return ScreenResult(np.array([s.j1 for s in scores], dtype=np.int64),
                        np.array([s.j2 for s in scores], dtype=np.int64),
                        np.array([s.r_hat for s in scores], dtype=np.float64),
                        column_names, restriction, None, [], None, len(scores))


def candidate_names(scores: list, score_threshold: Optional[float] = None,
                    top_pairs: Optional[int] = None) -> list:
    """Union of column names in the selected pairs, in order of first appearance."""
    chosen = scores
    if top_pairs is not None:
        chosen = chosen[:top_pairs]
    if score_threshold is not None:
        chosen = [s for s in chosen if s.r_hat > score_threshold]
    seen = {}
    for s in chosen:
        seen.setdefault(s.name1, None)
        seen.setdefault(s.name2, None)
    return list(seen)


def read_candidates(path, score_threshold=None, top_pairs=None) -> list:
    """Candidate column names from a scores TSV or a one-name-per-line file."""
    with open(path) as fh:
        first = fh.readline().rstrip("\n").split("\t")
    if first == SCORE_COLUMNS:
        return candidate_names(read_scores(path), score_threshold, top_pairs)
    with open(path) as fh:
        return [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]


def write_cell_risk_tsv(model, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(list(model.loci_names) + ["risk"])
        for genotype, risk in sorted(model.cell_risk.items()):
            w.writerow([f"{g:g}" for g in genotype] + [risk])


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_json(obj, path=None) -> str:
    text = dumps(obj)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def manifest_path(output) -> str:
    return os.fspath(output) + ".manifest.json"
