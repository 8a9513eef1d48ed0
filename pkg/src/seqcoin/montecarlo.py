"""Monte Carlo harness for the sequential and fixed-sample testers.

Every trial draws its flips from ``derive_trial_source(master_seed, index, p)``
so results depend only on the configuration, never on the number of worker
processes or the order in which chunks finish.  Per-trial outcomes are
collected into index-ordered arrays before any aggregation.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Any, Optional, Sequence, Union

import numpy as np

from . import baseline, coinflipper
from .core import (
    Confidence,
    ContractViolation,
    Decision,
    DomainError,
    Probability,
    SeqCoinError,
    as_rational,
    decimal_text,
)
from .predict import difficulty_of_gap, flips_upper_bound, iteration_bound
from .schedule import fixed_sample_k
from .sources import derive_trial_source

WILSON_CONFIDENCE = 0.99

_RIGHT, _WRONG, _UNDECIDED = 0, 1, 2


class TrialError(SeqCoinError):
    """A single trial failed; ``trial_index`` says which one."""

    def __init__(self, trial_index: int, cause: BaseException):
        super().__init__(f"trial {trial_index} failed: {cause}")
        self.trial_index = trial_index
        self.cause = cause


def wilson_upper(successes: int, n: int, confidence: float = WILSON_CONFIDENCE) -> float:
    """One-sided Wilson score upper bound on a binomial proportion.

    ``z`` is the ``confidence`` quantile of the standard normal
    (2.3263 at 0.99).
    """
    if n < 1:
        raise ContractViolation(f"n must be >= 1, got {n}")
    if not 0 <= successes <= n:
        raise ContractViolation(f"successes={successes} outside [0, {n}]")
    if successes == n:
        return 1.0
    z = NormalDist().inv_cdf(confidence)
    phat = successes / n
    z2n = z * z / n
    center = phat + z2n / 2
    margin = z * math.sqrt(phat * (1 - phat) / n + z2n / (4 * n))
    return min(1.0, (center + margin) / (1 + z2n))


@dataclass(frozen=True)
class TrialConfig:
    """One grid point of a Monte Carlo experiment.

    ``algorithm`` is ``"coinflipper"`` or ``"baseline"``; the latter needs
    ``epsilon``.
    """

    p: Union[float, str]
    q: str
    delta: str
    trials: int
    master_seed: int
    budget: Optional[int] = None
    algorithm: str = "coinflipper"
    epsilon: Optional[str] = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ContractViolation(f"trials must be >= 1, got {self.trials}")
        p, q = self.p_exact, self.q_exact
        Confidence.coerce(self.delta)
        if self.budget is not None and self.budget < 1:
            raise ContractViolation(f"budget must be >= 1, got {self.budget}")
        if self.algorithm == "coinflipper":
            if p == q and self.budget is None:
                raise DomainError("p == q never terminates without a budget")
        elif self.algorithm == "baseline":
            if self.epsilon is None:
                raise ContractViolation("the baseline algorithm needs epsilon")
            baseline.check_known_gap(q, as_rational(self.epsilon))
        else:
            raise ContractViolation(f"unknown algorithm {self.algorithm!r}")

    @property
    def p_exact(self) -> Fraction:
        return Probability.coerce(self.p).value

    @property
    def q_exact(self) -> Fraction:
        return Probability.coerce(self.q).value


@dataclass(frozen=True)
class TrialStats:
    config: TrialConfig = field(repr=False)
    trials: int
    wrong: int
    undecided: int
    error_rate: float
    error_rate_wilson_hi99: float
    mean_iterations: float
    sem_iterations: float
    mean_flips: float
    sem_flips: float
    max_flips: int
    d: Optional[int]
    iteration_bound: Optional[float]
    flips_upper_bound: Optional[float]

    @property
    def decisions(self) -> int:
        return self.trials - self.undecided

    @property
    def error_rate_defined(self) -> bool:
        return self.decisions > 0

    def to_row(self) -> dict[str, Any]:
        """Flat record using the CSV column names."""
        return {
            "p": decimal_text(self.config.p),
            "q": decimal_text(self.config.q),
            "delta": decimal_text(self.config.delta),
            "trials": self.trials,
            "wrong": self.wrong,
            "undecided": self.undecided,
            "error_rate": self.error_rate,
            "wilson_hi99": self.error_rate_wilson_hi99,
            "mean_iters": self.mean_iterations,
            "sem_iters": self.sem_iterations,
            "mean_flips": self.mean_flips,
            "sem_flips": self.sem_flips,
            "d": self.d,
            "iter_bound": self.iteration_bound,
            "flips_bound": self.flips_upper_bound,
        }

    def to_dict(self) -> dict[str, Any]:
        row = self.to_row()
        row.update(
            algorithm=self.config.algorithm,
            epsilon=self.config.epsilon,
            seed=self.config.master_seed,
            budget=self.config.budget,
            decisions=self.decisions,
            error_rate_defined=self.error_rate_defined,
            max_flips=self.max_flips,
        )
        return row


def _run_chunk(config: TrialConfig, start: int, stop: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = stop - start
    outcome = np.empty(n, dtype=np.int8)
    iters = np.empty(n, dtype=np.int64)
    flips = np.empty(n, dtype=np.int64)
    p_float = float(config.p_exact)
    p, q = config.p_exact, config.q_exact
    wrong_decision = Decision.NO if p < q else Decision.YES if p > q else None
    k_base = None
    if config.algorithm == "baseline":
        k_base = fixed_sample_k(as_rational(config.epsilon), config.delta)
    for pos, idx in enumerate(range(start, stop)):
        source = derive_trial_source(config.master_seed, idx, p_float)
        try:
            if k_base is None:
                t = coinflipper.run(source, q, config.delta, budget=config.budget)
                decision, iters[pos], flips[pos] = t.decision, t.iterations, t.total_flips
            else:
                decision = baseline.run_known_gap(source, q, config.epsilon, config.delta)
                iters[pos], flips[pos] = 1, source.consumed
        except SeqCoinError as exc:
            raise TrialError(idx, exc) from exc
        if decision is Decision.UNDECIDED:
            outcome[pos] = _UNDECIDED
        elif decision is wrong_decision:
            outcome[pos] = _WRONG
        else:
            outcome[pos] = _RIGHT
    return outcome, iters, flips


def _chunks(trials: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, math.ceil(trials / (workers * 4)))
    return [(s, min(s + size, trials)) for s in range(0, trials, size)]


def _mean_sem(values: np.ndarray) -> tuple[float, float]:
    mean = float(values.mean())
    if values.size < 2:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / math.sqrt(values.size))


def run_trials(config: TrialConfig, workers: int = 1, confidence: float = WILSON_CONFIDENCE) -> TrialStats:
    """Run ``config.trials`` independent trials and aggregate them."""
    if workers < 1:
        raise ContractViolation(f"workers must be >= 1, got {workers}")
    if workers == 1:
        outcome, iters, flips = _run_chunk(config, 0, config.trials)
    else:
        spans = _chunks(config.trials, workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, [config] * len(spans), *zip(*spans)))
        outcome = np.concatenate([part[0] for part in parts])
        iters = np.concatenate([part[1] for part in parts])
        flips = np.concatenate([part[2] for part in parts])

    wrong = int(np.count_nonzero(outcome == _WRONG))
    undecided = int(np.count_nonzero(outcome == _UNDECIDED))
    decisions = config.trials - undecided
    if decisions:
        error_rate = wrong / decisions
        hi = wilson_upper(wrong, decisions, confidence)
    else:
        error_rate, hi = 0.0, 1.0
    mean_it, sem_it = _mean_sem(iters.astype(np.float64))
    mean_fl, sem_fl = _mean_sem(flips.astype(np.float64))

    p, q = config.p_exact, config.q_exact
    d = it_bound = fl_bound = None
    if p != q:
        d = difficulty_of_gap(abs(p - q))
        if config.algorithm == "coinflipper":
            it_bound = iteration_bound(d)
            fl_bound = flips_upper_bound(d, config.delta, 4)
        else:
            it_bound = 1.0
            fl_bound = float(fixed_sample_k(as_rational(config.epsilon), config.delta))
    return TrialStats(
        config=config,
        trials=config.trials,
        wrong=wrong,
        undecided=undecided,
        error_rate=error_rate,
        error_rate_wilson_hi99=hi,
        mean_iterations=mean_it,
        sem_iterations=sem_it,
        mean_flips=mean_fl,
        sem_flips=sem_fl,
        max_flips=int(flips.max()),
        d=d,
        iteration_bound=it_bound,
        flips_upper_bound=fl_bound,
    )


def sweep(grid: Sequence[TrialConfig], workers: int = 1) -> list[TrialStats]:
    """Run every configuration in ``grid`` in order."""
    if not grid:
        raise ContractViolation("sweep needs at least one configuration")
    return [run_trials(config, workers=workers) for config in grid]
