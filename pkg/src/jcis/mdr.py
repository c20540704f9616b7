"""Multifactor dimensionality reduction over a small candidate set.

Each multi-locus genotype cell is labelled high or low risk by comparing
its case:control ratio against a threshold ``T`` (1, or the overall
case:control ratio in adjusted mode).  Models are scored by stratified
k-fold cross-validated balanced accuracy.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, InputError, UndefinedBalancedAccuracyError
from .simulate import make_rng
from .stats import Dataset

HIGH, LOW, UNKNOWN = "high", "low", "unknown"
THRESHOLD_MODES = ("classic_T1", "adjusted")
# upper bound on the candidate set for the exhaustive search
MAX_CANDIDATES = 100


def balanced_accuracy(tp: int, fn: int, tn: int, fp: int) -> float:
    """Mean of sensitivity and specificity."""
    if tp + fn < 1 or tn + fp < 1:
        raise UndefinedBalancedAccuracyError(
            "balanced accuracy needs at least one case and one control")
    # one correctly rounded integer division; equals the exact rational value
    pos, neg = tp + fn, tn + fp
    return (tp * neg + tn * pos) / (2 * pos * neg)


@dataclass
class MdrConfig:
    k: int
    candidate_columns: Sequence[int]
    folds: int = 10
    threshold_mode: str = "adjusted"
    seed: int = 0

    def __post_init__(self):
        self.candidate_columns = sorted(int(c) for c in self.candidate_columns)
        if len(set(self.candidate_columns)) != len(self.candidate_columns):
            raise ConfigurationError("duplicate candidate columns")
        if not 1 <= self.k <= len(self.candidate_columns):
            raise ConfigurationError(
                f"k={self.k} outside 1..{len(self.candidate_columns)}")
        if len(self.candidate_columns) > MAX_CANDIDATES:
            raise ConfigurationError(
                f"at most {MAX_CANDIDATES} candidate columns are supported")
        if self.folds < 2:
            raise ConfigurationError("folds must be >= 2")
        if self.threshold_mode not in THRESHOLD_MODES:
            raise ConfigurationError(
                f"threshold_mode must be one of {THRESHOLD_MODES}")


@dataclass
class MdrModel:
    loci: tuple
    cell_risk: dict
    fold_balanced_accuracies: list
    cv_balanced_accuracy: float
    loci_names: tuple = ()
    models_evaluated: int = 1
    threshold_mode: str = "adjusted"

    def to_dict(self):
        return {
            "k": len(self.loci),
            "loci": list(self.loci),
            "loci_names": list(self.loci_names),
            "threshold_mode": self.threshold_mode,
            "cv_balanced_accuracy": self.cv_balanced_accuracy,
            "fold_balanced_accuracies": list(self.fold_balanced_accuracies),
            "models_evaluated": self.models_evaluated,
            "cell_risk": [{"genotype": list(g), "risk": r}
                          for g, r in sorted(self.cell_risk.items())],
        }


def _binary_response(y) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    if not np.all(np.isin(y, (0.0, 1.0))):
        raise InputError("MDR needs a binary 0/1 response (1 = case)")
    return y.astype(np.int64)


def _label_cells(cases: np.ndarray, controls: np.ndarray, mode: str,
                 total_cases: int, total_controls: int) -> np.ndarray:
    """1 for high risk, 0 for low, -1 for cells with no observations.

    High means ``cases / controls > T`` strictly, evaluated in integers.
    """
    if mode == "adjusted":
        high = cases * total_controls > controls * total_cases
    else:
        high = cases > controls
    labels = np.where(high, 1, 0)
    return np.where(cases + controls == 0, -1, labels)


def fit_mdr_cells(genotypes, y, threshold_mode: str = "adjusted") -> dict:
    """Risk label for each genotype combination of the given loci.

    ``genotypes`` is an ``n x k`` array of categorical codes.  Combinations
    that never occur (within the product of observed levels) are ``unknown``.
    """
    if threshold_mode not in THRESHOLD_MODES:
        raise ConfigurationError(f"unknown threshold mode {threshold_mode!r}")
    g = np.asarray(genotypes, dtype=np.float64)
    if g.ndim == 1:
        g = g[:, None]
    y = _binary_response(y)
    if g.shape[0] != y.shape[0]:
        raise InputError("genotype rows and response length differ")
    levels = [np.unique(g[:, i]) for i in range(g.shape[1])]
    counts = {}
    for row, label in zip(map(tuple, g.tolist()), y.tolist()):
        c = counts.setdefault(row, [0, 0])
        c[label] += 1
    total_cases = int(y.sum())
    total_controls = int(y.shape[0] - total_cases)
    risk = {}
    for combo in itertools.product(*(lv.tolist() for lv in levels)):
        controls, cases = counts.get(combo, (0, 0))
        label = _label_cells(np.array([cases]), np.array([controls]),
                             threshold_mode, total_cases, total_controls)[0]
        risk[combo] = {1: HIGH, 0: LOW, -1: UNKNOWN}[int(label)]
    return risk


def stratified_folds(y, folds: int, seed: int) -> np.ndarray:
    """Fold id per row; each class is shuffled then dealt round-robin."""
    y = np.asarray(y)
    if folds > y.shape[0]:
        raise ConfigurationError("more folds than observations")
    rng = make_rng(seed, 0x4D4452)
    fold = np.empty(y.shape[0], dtype=np.int64)
    offset = 0
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        idx = idx[rng.permutation(idx.shape[0])]
        fold[idx] = (np.arange(idx.shape[0]) + offset) % folds
        offset += idx.shape[0]
    return fold


def _encode_levels(values: np.ndarray):
    levels, codes = np.unique(values, return_inverse=True)
    return levels, codes.astype(np.int64)


class _FoldEvaluator:
    """Vectorised cross-validation of one loci subset at a time."""

    def __init__(self, codes: dict, n_levels: dict, y: np.ndarray,
                 fold: np.ndarray, folds: int, mode: str):
        self.codes, self.n_levels = codes, n_levels
        self.y, self.fold, self.folds, self.mode = y, fold, folds, mode
        for f in range(folds):
            held = y[fold == f]
            if held.size == 0 or held.min() == held.max():
                raise UndefinedBalancedAccuracyError(
                    f"fold {f} holds a single class; reduce the number of folds")
        self.fold_cases = np.bincount(fold, weights=y, minlength=folds)
        self.fold_sizes = np.bincount(fold, minlength=folds)
        self.total_cases = int(y.sum())
        self.n = y.shape[0]

    def cell_index(self, loci):
        cell = np.zeros(self.n, dtype=np.int64)
        size = 1
        for j in loci:
            cell = cell * self.n_levels[j] + self.codes[j]
            size *= self.n_levels[j]
        return cell, size

    def fold_accuracies(self, loci) -> list:
        cell, size = self.cell_index(loci)
        folds, y = self.folds, self.y
        key = (self.fold * size + cell) * 2 + y
        per_fold = np.bincount(key, minlength=folds * size * 2)
        per_fold = per_fold.reshape(folds, size, 2)
        train = per_fold.sum(axis=0)[None, :, :] - per_fold
        train_cases = self.total_cases - self.fold_cases.astype(np.int64)
        train_controls = (self.n - self.fold_sizes) - train_cases
        labels = _label_cells(train[:, :, 1], train[:, :, 0], self.mode,
                              train_cases[:, None], train_controls[:, None])
        # rows in cells unseen during training are called low risk
        predicted = labels[self.fold, cell] == 1
        out = []
        for f in range(folds):
            m = self.fold == f
            yt, pt = y[m] == 1, predicted[m]
            out.append(balanced_accuracy(int(np.sum(yt & pt)),
                                         int(np.sum(yt & ~pt)),
                                         int(np.sum(~yt & ~pt)),
                                         int(np.sum(~yt & pt))))
        return out


def cross_validated_mdr(dataset: Dataset, config: MdrConfig) -> MdrModel:
    """Exhaustive search over ``k``-subsets of the candidate columns.

    The subset with the highest mean fold balanced accuracy wins; ties go to
    the lexicographically smallest loci tuple.  The returned model's cell
    labels are fitted on all rows.
    """
    y = _binary_response(dataset.response)
    for j in config.candidate_columns:
        if not 0 <= j < dataset.p:
            raise ConfigurationError(f"candidate column {j} out of range")
        col = dataset.column(j)
        if np.all(col == col[0]):
            raise InputError(
                f"candidate column {dataset.column_names[j]} is constant")
    if config.folds > dataset.n:
        raise ConfigurationError("more folds than observations")
    codes, n_levels = {}, {}
    for j in config.candidate_columns:
        levels, codes[j] = _encode_levels(dataset.column(j))
        n_levels[j] = levels.shape[0]
    fold = stratified_folds(y, config.folds, config.seed)
    evaluator = _FoldEvaluator(codes, n_levels, y, fold, config.folds,
                               config.threshold_mode)
    best = None
    evaluated = 0
    for loci in itertools.combinations(config.candidate_columns, config.k):
        accs = evaluator.fold_accuracies(loci)
        cv = float(np.mean(accs))
        evaluated += 1
        if best is None or cv > best[1]:
            best = (loci, cv, accs)
    loci, cv, accs = best
    risk = fit_mdr_cells(dataset.values[:, list(loci)], y, config.threshold_mode)
    return MdrModel(tuple(loci), risk, accs, cv,
                    tuple(dataset.column_names[j] for j in loci), evaluated,
                    config.threshold_mode)


def predict(model: MdrModel, genotypes) -> np.ndarray:
    """1 for rows in high-risk cells, 0 otherwise (unknown cells count low)."""
    g = np.asarray(genotypes, dtype=np.float64)
    if g.ndim == 1:
        g = g[:, None]
    return np.array([model.cell_risk.get(tuple(row), UNKNOWN) == HIGH
                     for row in g.tolist()], dtype=np.int64)
