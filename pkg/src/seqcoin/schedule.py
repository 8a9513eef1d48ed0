"""Sample-size schedules and the additive Chernoff-Hoeffding tail.

The ``k`` formulas are evaluated in double precision and then rounded up.
For rounds up to i = 24 and the deltas used by the test-suite the argument of
the ceiling sits more than 1e-4 away from an integer, so a one-ulp difference
in the platform ``log`` cannot move the result.  Beyond that the product
exceeds 2**53 and ``k`` is only correct to about 1e-16 relative.  ``pi**2`` is
the double nearest to 9.869604401089358.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import Confidence, DomainError, RationalLike, SeqCoinError, as_rational

PI_SQUARED = math.pi**2

#: Largest round index the sequential tester will plan.  At i = 30 the
#: per-round sample size is already around 4e18 flips.
MAX_ROUND = 30

class BudgetOverflow(SeqCoinError, OverflowError):
    """The round index or sample size exceeds what can be planned."""

    def __init__(self, message: str, *, i: int | None = None, k: int | None = None):
        super().__init__(message)
        self.i = i
        self.k = k
        self.transcript = None


@dataclass(frozen=True)
class RoundPlan:
    i: int
    epsilon: Fraction
    k: int


def _delta(delta: "RationalLike | Confidence") -> float:
    return float(Confidence.coerce(delta))


def coinflipper_k(i: int, delta: "RationalLike | Confidence", max_round: int = MAX_ROUND) -> int:
    """Sample size of round ``i``: ``ceil(ln(pi^2 i^2 / (6 delta)) / (2 eps^2))``, eps = 2^-i."""
    if i < 1:
        raise DomainError(f"round index must be >= 1, got {i}")
    if i > max_round:
        raise BudgetOverflow(f"round {i} exceeds the round cap {max_round}", i=i)
    d = _delta(delta)
    eps = 2.0**-i
    return max(math.ceil(math.log(PI_SQUARED * i * i / (6.0 * d)) / (2.0 * eps * eps)), 1)


def round_plan(i: int, delta: "RationalLike | Confidence", max_round: int = MAX_ROUND) -> RoundPlan:
    return RoundPlan(i=i, epsilon=Fraction(1, 2**i), k=coinflipper_k(i, delta, max_round))


def fixed_sample_k(epsilon: RationalLike, delta: "RationalLike | Confidence") -> int:
    """Sample size of the known-gap tester: ``ceil(ln(1/delta) / (2 eps^2))``."""
    eps = float(as_rational(epsilon))
    if not 0 < eps < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    d = _delta(delta)
    return max(math.ceil(math.log(1.0 / d) / (2.0 * eps * eps)), 1)


def hoeffding_tail(k: int, epsilon: float) -> float:
    """Upper bound ``exp(-2 k eps^2)`` on ``Pr(X >= pk + eps k)`` for k flips."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    return math.exp(-2.0 * k * epsilon * epsilon)
