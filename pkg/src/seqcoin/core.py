"""Domain types and the exact per-round decision rule.

All threshold comparisons are carried out on :class:`fractions.Fraction`
values.  ``q`` enters as decimal text, ``epsilon`` is ``1/2**i`` and ``k`` is
an integer, so ``q*k - eps*k`` and ``q*k + eps*k`` are exact rationals and the
inclusive boundaries behave exactly as written in the algorithm.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Any, Optional, Union

RationalLike = Union[str, Fraction, int, float]


class SeqCoinError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SeqCoinError, ValueError):
    """A parameter lies outside the domain the algorithms are defined on."""


class OutOfRange(DomainError):
    """A probability-like value is not strictly inside (0, 1)."""


class MalformedNumber(DomainError):
    """Text could not be parsed as a finite decimal."""


class ContractViolation(SeqCoinError, ValueError):
    """An operation was called with arguments violating its precondition."""


class Decision(enum.Enum):
    """Final outcome of a run.

    ``YES`` means the run concluded ``p < q`` and ``NO`` means ``p > q``.
    ``UNDECIDED`` is only ever produced when a flip budget runs out.
    """

    YES = "YES"
    NO = "NO"
    UNDECIDED = "UNDECIDED"

    @property
    def meaning(self) -> Optional[str]:
        return {"YES": "p<q", "NO": "p>q"}.get(self.value)


class Verdict(enum.Enum):
    """Outcome of a single round.  Ordered YES < CONTINUE < NO in ``heads``."""

    YES = "YES"
    CONTINUE = "CONTINUE"
    NO = "NO"

    @property
    def rank(self) -> int:
        return {"YES": 0, "CONTINUE": 1, "NO": 2}[self.value]


_DECIMAL_RE = re.compile(r"^[+]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def parse_decimal(text: str) -> Fraction:
    """Parse finite decimal text into an exact :class:`Fraction`."""
    if not isinstance(text, str):
        raise MalformedNumber(f"expected decimal text, got {type(text).__name__}")
    s = text.strip()
    if not _DECIMAL_RE.match(s):
        raise MalformedNumber(f"not a finite decimal: {text!r}")
    try:
        return Fraction(Decimal(s))
    except (InvalidOperation, ValueError) as exc:  # pragma: no cover - regex guards this
        raise MalformedNumber(f"not a finite decimal: {text!r}") from exc


def parse_probability(text: str) -> Fraction:
    """Parse decimal text such as ``"0.05"`` into an exact rational in (0, 1).

    >>> parse_probability("0.05")
    Fraction(1, 20)
    """
    value = parse_decimal(text)
    if not 0 < value < 1:
        raise OutOfRange(f"{text!r} out of range: must be strictly between 0 and 1")
    return value


def as_rational(value: RationalLike) -> Fraction:
    """Coerce text, ints, fractions or floats to an exact rational.

    Floats are converted through their exact binary value, never through
    their shortest repr.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return parse_decimal(value)
    if isinstance(value, bool):
        raise MalformedNumber("booleans are not numbers here")
    if isinstance(value, (int, float)):
        if isinstance(value, float) and not value == value:  # NaN
            raise MalformedNumber("NaN is not a number here")
        try:
            return Fraction(value)
        except (OverflowError, ValueError) as exc:
            raise MalformedNumber(f"not finite: {value!r}") from exc
    raise MalformedNumber(f"cannot interpret {value!r} as a number")


def decimal_text(value: RationalLike) -> str:
    """Render a value as the decimal text it was (or could have been) given as."""
    if isinstance(value, str):
        return value.strip()
    if isinstance(value, float):
        return repr(value)
    frac = as_rational(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    # terminating decimal only when the denominator is 2^a 5^b
    den = frac.denominator
    for prime in (2, 5):
        while den % prime == 0:
            den //= prime
    if den == 1:
        return format(Decimal(frac.numerator) / Decimal(frac.denominator), "f")
    return f"{frac.numerator}/{frac.denominator}"


@dataclass(frozen=True)
class Probability:
    """A real number strictly inside (0, 1), held exactly."""

    value: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", as_rational(self.value))
        if not 0 < self.value < 1:
            raise OutOfRange(f"probability {self.value} out of range: must be strictly between 0 and 1")

    @classmethod
    def coerce(cls, value: "RationalLike | Probability") -> "Probability":
        if isinstance(value, cls):
            return value
        return cls(as_rational(value))

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class Confidence:
    """The error parameter delta, strictly inside (0, 1)."""

    delta: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.delta, Fraction):
            object.__setattr__(self, "delta", as_rational(self.delta))
        if not 0 < self.delta < 1:
            raise OutOfRange(f"delta {self.delta} out of range: must be strictly between 0 and 1")

    @classmethod
    def coerce(cls, value: "RationalLike | Confidence") -> "Confidence":
        if isinstance(value, cls):
            return value
        return cls(as_rational(value))

    def __float__(self) -> float:
        return float(self.delta)


@dataclass(frozen=True)
class ExactThreshold:
    """Comparison quantities for one round: ``q*k -/+ k/2**i``."""

    q_exact: Fraction
    k: int
    eps_num_log2: int

    def __post_init__(self) -> None:
        if not isinstance(self.q_exact, Fraction):
            object.__setattr__(self, "q_exact", as_rational(self.q_exact))
        if self.k < 1:
            raise ContractViolation(f"k must be positive, got {self.k}")
        if self.eps_num_log2 < 1:
            raise ContractViolation(f"i must be positive, got {self.eps_num_log2}")

    @property
    def epsilon(self) -> Fraction:
        return Fraction(1, 2**self.eps_num_log2)

    @property
    def lower(self) -> Fraction:
        return self.q_exact * self.k - self.epsilon * self.k

    @property
    def upper(self) -> Fraction:
        return self.q_exact * self.k + self.epsilon * self.k


def decide_round(heads: int, threshold: ExactThreshold) -> Verdict:
    """Apply the round rule: YES iff ``X <= qk - eps*k``, NO iff ``X >= qk + eps*k``."""
    if not 0 <= heads <= threshold.k:
        raise ContractViolation(f"heads={heads} outside [0, k={threshold.k}]")
    # heads*b*2^i vs (a*2^i -/+ b)*k with q = a/b, all integers
    a, b = threshold.q_exact.numerator, threshold.q_exact.denominator
    scale = 1 << threshold.eps_num_log2
    lhs = heads * b * scale
    if lhs <= (a * scale - b) * threshold.k:
        return Verdict.YES
    if lhs >= (a * scale + b) * threshold.k:
        return Verdict.NO
    return Verdict.CONTINUE


@dataclass(frozen=True)
class RoundOutcome:
    i: int
    epsilon: Fraction
    k: int
    heads: int
    verdict: Verdict

    def to_dict(self) -> dict[str, Any]:
        return {
            "i": self.i,
            "epsilon": f"{self.epsilon.numerator}/{self.epsilon.denominator}",
            "k": self.k,
            "heads": self.heads,
            "verdict": self.verdict.value,
        }


@dataclass(frozen=True)
class Transcript:
    """Complete record of one run of the sequential tester."""

    rounds: tuple[RoundOutcome, ...]
    decision: Decision
    q: str
    delta: str
    budget: Optional[int] = None
    source: dict[str, Any] = field(default_factory=dict)

    @property
    def total_flips(self) -> int:
        return sum(r.k for r in self.rounds)

    @property
    def iterations(self) -> int:
        return len(self.rounds)

    def check(self) -> None:
        """Raise :class:`ContractViolation` if the verdict chain is malformed."""
        for pos, r in enumerate(self.rounds):
            if r.i != pos + 1:
                raise ContractViolation(f"round {pos} has index {r.i}")
            if pos < len(self.rounds) - 1 and r.verdict is not Verdict.CONTINUE:
                raise ContractViolation(f"round {r.i} decided but the run went on")
        last = self.rounds[-1].verdict if self.rounds else Verdict.CONTINUE
        if self.decision is Decision.UNDECIDED:
            if last is not Verdict.CONTINUE:
                raise ContractViolation("undecided run ends on a deciding round")
        elif last.value != self.decision.value:
            raise ContractViolation(f"last verdict {last.value} != decision {self.decision.value}")
        if self.budget is not None and self.total_flips > self.budget:
            raise ContractViolation("total flips exceed the budget")

    def to_dict(self) -> dict[str, Any]:
        return {
            "decision": self.decision.value,
            "meaning": self.decision.meaning,
            "total_flips": self.total_flips,
            "iterations": self.iterations,
            "rounds": [r.to_dict() for r in self.rounds],
        }
