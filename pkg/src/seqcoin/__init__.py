"""Sequential testing of whether a coin's heads probability lies below or above a threshold."""

from .baseline import run_known_gap
from .coinflipper import StreamingRun, UseAfterDecision, run, run_streaming_step
from .core import (
    Confidence,
    ContractViolation,
    Decision,
    DomainError,
    ExactThreshold,
    MalformedNumber,
    OutOfRange,
    Probability,
    RoundOutcome,
    SeqCoinError,
    Transcript,
    Verdict,
    decide_round,
    parse_probability,
)
from .montecarlo import TrialConfig, TrialError, TrialStats, run_trials, sweep, wilson_upper
from .predict import DifficultyReport, difficulty, flips_upper_bound, iteration_bound, series_constants
from .schedule import BudgetOverflow, RoundPlan, coinflipper_k, fixed_sample_k, hoeffding_tail, round_plan
from .sources import (
    FlipBatchResult,
    RecordedSource,
    SourceExhausted,
    StreamFormatError,
    SyntheticSource,
    derive_trial_source,
    flip_batch,
    parse_flip_stream,
)

__version__ = "0.1.0"
