"""Sequential fixed-width confidence intervals for the Gini index."""

from .errors import (
    CapExceededError,
    InsufficientDataError,
    InvalidObservationError,
    MomentExistenceError,
    ParseError,
    SeqGiniError,
    SourceExhaustedError,
    UndefinedGiniError,
)
from .estimator import RunningState, StatisticsSnapshot
from .harness import ExperimentConfig, SimulationReport, format_report, run_experiment
from .oracle import TruePopulationParams, brute_force_statistics, true_gini, true_params
from .sequential import (
    SequentialResult,
    StoppingConfig,
    optimal_c,
    pilot_size,
    run_sequential,
    should_stop,
    z_quantile,
)
from .sources import DistributionSpec, SeedSpec, derive_stream, distribution_source, open_file_source, sample

__version__ = "0.1.0"
