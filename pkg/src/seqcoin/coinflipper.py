"""The sequential tester with halving precision.

Round ``i`` uses precision ``eps = 1/2**i`` and ``k_i`` flips from
:func:`seqcoin.schedule.coinflipper_k`.  The ``ln(pi^2 i^2 / (6 delta))``
inflation makes the per-round error probabilities sum to at most ``delta``
over all rounds.  The loop is unbounded unless a flip budget is given; a
budget that would be exceeded by the next round ends the run as
``UNDECIDED`` and no round is ever truncated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional

from .core import (
    Confidence,
    ContractViolation,
    Decision,
    ExactThreshold,
    Probability,
    RationalLike,
    RoundOutcome,
    SeqCoinError,
    Transcript,
    Verdict,
    decide_round,
    decimal_text,
)
from .schedule import MAX_ROUND, BudgetOverflow, coinflipper_k
from .sources import FlipSource, SourceExhausted


class UseAfterDecision(SeqCoinError):
    """A flip was fed to a streaming run that has already finished."""


def _check_budget(budget: Optional[int]) -> None:
    if budget is not None and budget < 1:
        raise ContractViolation(f"budget must be >= 1, got {budget}")


def run(
    source: FlipSource,
    q: "RationalLike | Probability",
    delta: "RationalLike | Confidence",
    budget: Optional[int] = None,
    max_round: int = MAX_ROUND,
) -> Transcript:
    """Decide whether the coin's heads probability is below (YES) or above (NO) ``q``.

    Raises :class:`SourceExhausted` or :class:`BudgetOverflow` with the
    partial transcript attached as ``exc.transcript``.
    """
    q_exact = Probability.coerce(q).value
    conf = Confidence.coerce(delta)
    _check_budget(budget)
    meta = dict(
        q=decimal_text(q if not isinstance(q, Probability) else q.value),
        delta=decimal_text(delta if not isinstance(delta, Confidence) else delta.delta),
        budget=budget,
        source=source.descriptor(),
    )

    rounds: list[RoundOutcome] = []
    total = 0
    i = 1
    while True:
        try:
            k = coinflipper_k(i, conf, max_round)
        except BudgetOverflow as exc:
            exc.transcript = Transcript(tuple(rounds), Decision.UNDECIDED, **meta)
            raise
        if budget is not None and total + k > budget:
            return Transcript(tuple(rounds), Decision.UNDECIDED, **meta)
        try:
            heads = source.flip_batch(k).heads
        except SourceExhausted as exc:
            exc.transcript = Transcript(tuple(rounds), Decision.UNDECIDED, **meta)
            raise
        verdict = decide_round(heads, ExactThreshold(q_exact, k, i))
        rounds.append(RoundOutcome(i, Fraction(1, 2**i), k, heads, verdict))
        total += k
        if verdict is Verdict.YES:
            return Transcript(tuple(rounds), Decision.YES, **meta)
        if verdict is Verdict.NO:
            return Transcript(tuple(rounds), Decision.NO, **meta)
        i += 1


@dataclass
class StreamingRun:
    """Incremental form of :func:`run` that accepts one flip at a time.

    >>> s = StreamingRun("0.5", "0.5")
    >>> for f in "HHH":
    ...     _ = s.feed(f)
    >>> s.decision
    <Decision.NO: 'NO'>
    """

    q: Any
    delta: Any
    budget: Optional[int] = None
    max_round: int = MAX_ROUND
    source: dict[str, Any] = field(default_factory=lambda: {"kind": "streaming"})

    def __post_init__(self) -> None:
        self._q = Probability.coerce(self.q).value
        self._conf = Confidence.coerce(self.delta)
        _check_budget(self.budget)
        self.rounds: list[RoundOutcome] = []
        self.decision: Optional[Decision] = None
        self.total_flips = 0
        self.heads_in_round = 0
        self.seen_in_round = 0
        self._start_round(1)

    def _start_round(self, i: int) -> None:
        self.i = i
        self.k = coinflipper_k(i, self._conf, self.max_round)
        self.heads_in_round = 0
        self.seen_in_round = 0
        if self.budget is not None and self.total_flips + self.k > self.budget:
            self.decision = Decision.UNDECIDED

    @property
    def done(self) -> bool:
        return self.decision is not None

    def feed(self, flip: "int | str | bool") -> Optional[Decision]:
        """Consume one flip (``H``/``T``, ``1``/``0`` or a bool); return the decision once made."""
        if self.done:
            raise UseAfterDecision(f"run already ended with {self.decision.value}")
        if isinstance(flip, str):
            if flip not in ("H", "T", "h", "t", "1", "0"):
                raise ContractViolation(f"not a flip symbol: {flip!r}")
            flip = flip in ("H", "h", "1")
        self.heads_in_round += int(bool(flip))
        self.seen_in_round += 1
        if self.seen_in_round < self.k:
            return None
        verdict = decide_round(self.heads_in_round, ExactThreshold(self._q, self.k, self.i))
        self.rounds.append(RoundOutcome(self.i, Fraction(1, 2**self.i), self.k, self.heads_in_round, verdict))
        self.total_flips += self.k
        if verdict is Verdict.CONTINUE:
            self._start_round(self.i + 1)
        else:
            self.decision = Decision(verdict.value)
        return self.decision

    def feed_many(self, flips: Iterable) -> Optional[Decision]:
        for f in flips:
            if self.done:
                break
            self.feed(f)
        return self.decision

    def transcript(self) -> Transcript:
        """Transcript of the completed rounds (``UNDECIDED`` while still running)."""
        return Transcript(
            tuple(self.rounds),
            self.decision or Decision.UNDECIDED,
            q=decimal_text(self.q),
            delta=decimal_text(self.delta),
            budget=self.budget,
            source=self.source,
        )


def run_streaming_step(state: StreamingRun, flip: "int | str | bool") -> StreamingRun:
    """Functional wrapper: feed one flip into ``state`` and return it."""
    state.feed(flip)
    return state
