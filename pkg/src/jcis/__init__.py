"""Joint cumulant interaction screening for ultrahigh-dimensional data."""

__version__ = "0.1.0"

from .cutoff import CutoffEstimate, estimate_cutoff
from .errors import (ConfigurationError, DegenerateVarianceError,
                     EmptyResultError, FormatError, InputError, JcisError,
                     NoCutoffError, UndefinedBalancedAccuracyError)
from .mdr import (MdrConfig, MdrModel, balanced_accuracy, cross_validated_mdr,
                  fit_mdr_cells)
from .screening import (ALL_PAIRS, WITHIN_GROUP, PairScore, ScreenResult,
                        enumerate_pairs, rank_of_pair, screen)
from .simulate import (ScenarioConfig, SimulationReport, generate_sim1,
                       generate_sim2, generate_sim3, generate_sim4, make_rng,
                       run_scenario)
from .stats import (Dataset, MomentSummary, column_summary, pair_score,
                    tau_hat, tau_hat_oracle)
