"""Non-asymptotic predictions for the sequential tester.

With ``d = ceil(log2(1/|p - q|))`` the expected number of rounds is at most
``d + 1.2``.  The expected number of flips is bounded by

    sum_{i=1}^{d+1} k_i  +  sum_{j>=1} (1/6)^(4^(j-1)) * k_{d+j+1}

where the second sum uses the bound ``(1/6)^(4^(j-1))`` on the probability
that round ``d + j + 1`` happens.  :func:`flips_upper_bound` evaluates that
expression with the tail truncated after ``tail_terms`` terms.  The terms
shrink doubly exponentially, so four terms are indistinguishable from the
full series in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .core import Confidence, DomainError, Probability, RationalLike
from .schedule import MAX_ROUND, coinflipper_k

ITERATION_SLACK = 1.2


def _round_skip_weight(j: int) -> float:
    return (1.0 / 6.0) ** (4 ** (j - 1))


@dataclass(frozen=True)
class DifficultyReport:
    d: int
    gap: float
    iteration_bound: float
    flips_upper_bound: float
    series_constants: tuple[float, float, float]

    def to_dict(self) -> dict[str, Any]:
        c1, c2, c3 = self.series_constants
        return {
            "d": self.d,
            "gap": self.gap,
            "iteration_bound": self.iteration_bound,
            "flips_upper_bound": self.flips_upper_bound,
            "series": {"c1": c1, "c2": c2, "c3": c3},
        }


def difficulty_of_gap(gap: Fraction) -> int:
    """Smallest ``m >= 1`` with ``2**m * gap >= 1``, i.e. ``ceil(log2(1/gap))``."""
    if not 0 < gap < 1:
        raise DomainError(f"gap {gap} must lie in (0, 1)")
    # start from the bit length estimate, then fix up exactly
    m = max(1, gap.denominator.bit_length() - gap.numerator.bit_length())
    while m > 1 and gap * 2 ** (m - 1) >= 1:
        m -= 1
    while gap * 2**m < 1:
        m += 1
    return m


def difficulty(p: RationalLike, q: RationalLike) -> int:
    """``ceil(log2(1/|p - q|))`` computed exactly.

    >>> difficulty("0.55", "0.5")
    5
    """
    p_exact = Probability.coerce(p).value
    q_exact = Probability.coerce(q).value
    if p_exact == q_exact:
        raise DomainError("difficulty is undefined when p == q")
    return difficulty_of_gap(abs(p_exact - q_exact))


def iteration_bound(d: int) -> float:
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    return d + ITERATION_SLACK


def series_constants(terms: int = 4) -> tuple[float, float, float]:
    """Truncated sums of (1/6)^(4^(j-1)), 4^j (1/6)^(4^(j-1)) and 4^j (1/6)^(4^(j-1)) ln j.

    The third sum starts at ``j = 2`` (its ``j = 1`` term is zero anyway).
    """
    if terms < 1:
        raise DomainError(f"terms must be >= 1, got {terms}")
    c1 = c2 = c3 = 0.0
    for j in range(1, terms + 1):
        # underflows to 0.0 from j = 6 on, which is the right limit
        w = _round_skip_weight(j)
        c1 += w
        c2 += 4**j * w
    for j in range(2, terms + 2):
        w = _round_skip_weight(j)
        c3 += 4**j * w * math.log(j)
    return c1, c2, c3


def flips_upper_bound(
    d: int,
    delta: "RationalLike | Confidence",
    tail_terms: int = 4,
    max_round: int = MAX_ROUND,
) -> float:
    """Upper bound on the expected total number of flips at difficulty ``d``."""
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    if tail_terms < 0:
        raise DomainError(f"tail_terms must be >= 0, got {tail_terms}")
    conf = Confidence.coerce(delta)
    head = sum(coinflipper_k(i, conf, max_round) for i in range(1, d + 2))
    tail = 0.0
    for j in range(1, tail_terms + 1):
        w = _round_skip_weight(j)
        if w == 0.0:
            break
        tail += w * coinflipper_k(d + j + 1, conf, max_round)
    return head + tail


def report(
    p: RationalLike, q: RationalLike, delta: "RationalLike | Confidence", tail_terms: int = 4
) -> DifficultyReport:
    d = difficulty(p, q)
    gap = abs(Probability.coerce(p).value - Probability.coerce(q).value)
    return DifficultyReport(
        d=d,
        gap=float(gap),
        iteration_bound=iteration_bound(d),
        flips_upper_bound=flips_upper_bound(d, delta, tail_terms),
        series_constants=series_constants(4),
    )


__all__ = [
    "DifficultyReport",
    "difficulty",
    "difficulty_of_gap",
    "flips_upper_bound",
    "iteration_bound",
    "report",
    "series_constants",
]
