"""Seeded generators for the four benchmark designs and a replication harness.

Random streams come from a counter-based Philox generator.  Replicate ``r``
of scenario ``s`` run with seed ``S`` draws from
``SeedSequence(S, spawn_key=(s, r))``, so any replicate can be regenerated
on its own and replicates may run in any order.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError
from .screening import ALL_PAIRS, rank_of_pair, screen
from .stats import Dataset

SCENARIOS = ("sim1", "sim2", "sim3", "sim4")

# 0-based column indices of the interacting pairs
TRUE_PAIRS = {
    "sim1": ((0, 1),),
    "sim2": ((0, 1), (2, 3), (4, 5), (6, 7)),
    "sim3": ((0, 1), (2, 3)),
    "sim4": ((0, 2), (5, 9)),
}

MIN_P = {"sim1": 2, "sim2": 8, "sim3": 4, "sim4": 10}

# P(X_j = 1 | Y = k) for the odd columns j = 1, 3, 5, 7 of sim2
SIM2_THETA = np.array([[0.3, 0.4, 0.5, 0.3],
                       [0.95, 0.9, 0.9, 0.95]])
SIM2_P_CASE = 0.75
SIM4_RHO = 0.1


def make_rng(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def _check_p(scenario, p):
    if p < MIN_P[scenario]:
        raise ConfigurationError(
            f"{scenario} needs p >= {MIN_P[scenario]}, got {p}")


def generate_sim1(n: int, p: int, rng: np.random.Generator) -> Dataset:
    """Binary covariates, response ``X1 * X2``."""
    _check_p("sim1", p)
    x = rng.integers(0, 2, size=(n, p)).astype(np.float64)
    return Dataset(x, x[:, 0] * x[:, 1], response_kind="binary")


def generate_sim2(n: int, p: int, rng: np.random.Generator) -> Dataset:
    """Binary response with four conditionally dependent covariate pairs."""
    _check_p("sim2", p)
    y = (rng.random(n) < SIM2_P_CASE).astype(np.int64)
    x = np.empty((n, p), dtype=np.float64, order="F")
    for m in range(4):
        theta = SIM2_THETA[:, m]
        odd = rng.random(n) < theta[y]
        high = theta[y] > 0.5
        p_one = np.where(odd, np.where(high, 0.95, 0.05),
                         np.where(high, 0.6, 0.4))
        even = rng.random(n) < p_one
        x[:, 2 * m] = odd
        x[:, 2 * m + 1] = even
    if p > 8:
        x[:, 8:] = rng.integers(0, 2, size=(n, p - 8))
    return Dataset(x, y.astype(np.float64), response_kind="binary")


def generate_sim3(n: int, p: int, rng: np.random.Generator) -> Dataset:
    """Gaussian covariates (sd 2), response ``X1 X2 + X3 X4``."""
    _check_p("sim3", p)
    x = rng.normal(0.0, 2.0, size=(n, p))
    y = x[:, 0] * x[:, 1] + x[:, 2] * x[:, 3]
    return Dataset(x, y, response_kind="continuous")


def ar1_cholesky(p: int, rho: float = SIM4_RHO) -> np.ndarray:
    """Lower Cholesky factor of the correlation matrix ``rho ** |i - j|``."""
    idx = np.arange(p)
    cov = rho ** np.abs(idx[:, None] - idx[None, :])
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise RuntimeError(f"covariance factorization failed for p={p}") from exc


def generate_sim4(n: int, p: int, rng: np.random.Generator,
                  factor: Optional[np.ndarray] = None) -> Dataset:
    """Correlated Gaussian covariates with main and interaction effects."""
    _check_p("sim4", p)
    if factor is None:
        factor = ar1_cholesky(p)
    x = rng.standard_normal((n, p)) @ factor.T
    y = (x[:, 0] + x[:, 2] + x[:, 5] + x[:, 9]
         + 3.0 * (x[:, 0] * x[:, 2]) + 3.0 * (x[:, 5] * x[:, 9]))
    return Dataset(x, y, response_kind="continuous")


GENERATORS = {"sim1": generate_sim1, "sim2": generate_sim2,
              "sim3": generate_sim3, "sim4": generate_sim4}


def normalize_scenario(scenario) -> str:
    s = str(scenario)
    if s in ("1", "2", "3", "4"):
        s = "sim" + s
    if s not in SCENARIOS:
        raise ConfigurationError(f"unknown scenario {scenario!r}")
    return s


@dataclass
class ScenarioConfig:
    scenario: str
    n: int
    p: int
    reps: int
    seed: int = 0
    top_window: int = 5

    def __post_init__(self):
        self.scenario = normalize_scenario(self.scenario)
        if self.n < 10:
            raise ConfigurationError("n must be >= 10")
        if self.reps < 1:
            raise ConfigurationError("reps must be >= 1")
        if self.top_window < 1:
            raise ConfigurationError("top_window must be >= 1")
        _check_p(self.scenario, self.p)

    @property
    def true_pairs(self):
        return TRUE_PAIRS[self.scenario]


@dataclass
class PairSummary:
    pair: tuple
    name: str
    mean_rank: float
    median_rank: float
    percent_in_top_window: float


@dataclass
class SimulationReport:
    config: ScenarioConfig
    pairs: list
    joint_percent_in_top_window: float
    ranks: list = field(default_factory=list)

    def to_dict(self):
        d = asdict(self)
        for ps in d["pairs"]:
            ps["pair"] = [a + 1 for a in ps["pair"]]
        return d


def generate(config: ScenarioConfig, replicate: int, factor=None) -> Dataset:
    """Dataset for one replicate, reproducible from ``(seed, replicate)``."""
    rng = make_rng(config.seed, SCENARIOS.index(config.scenario), replicate)
    if config.scenario == "sim4":
        return generate_sim4(config.n, config.p, rng, factor)
    return GENERATORS[config.scenario](config.n, config.p, rng)


def replicate_ranks(config: ScenarioConfig, replicate: int, workers: int = 1,
                    factor=None) -> list:
    data = generate(config, replicate, factor)
    result = screen(data, ALL_PAIRS, workers=workers)
    return [rank_of_pair(result, a, b) for a, b in config.true_pairs]


def summarize(config: ScenarioConfig, ranks: list) -> SimulationReport:
    window = config.top_window
    arr = np.array([[np.nan if r is None else r for r in row] for row in ranks],
                   dtype=np.float64)
    inside = np.nan_to_num(arr, nan=np.inf) <= window
    pairs = []
    for i, (a, b) in enumerate(config.true_pairs):
        col = arr[:, i][~np.isnan(arr[:, i])]
        pairs.append(PairSummary(
            (a, b), f"(X{a + 1}, X{b + 1})",
            float(col.mean()) if col.size else float("nan"),
            float(np.median(col)) if col.size else float("nan"),
            100.0 * float(inside[:, i].mean())))
    joint = 100.0 * float(inside.all(axis=1).mean())
    return SimulationReport(config, pairs, joint, [list(r) for r in ranks])


def run_scenario(config: ScenarioConfig, workers: int = 1) -> SimulationReport:
    """Generate, screen and rank every replicate, then aggregate."""
    factor = ar1_cholesky(config.p) if config.scenario == "sim4" else None
    ranks = [replicate_ranks(config, r, workers, factor)
             for r in range(config.reps)]
    return summarize(config, ranks)
