"""Fixed-sample tester for the known-gap problem ``p in {q - eps, q + eps}``."""

from __future__ import annotations

from fractions import Fraction

from .core import Confidence, Decision, DomainError, Probability, RationalLike, as_rational
from .schedule import fixed_sample_k
from .sources import FlipSource


def check_known_gap(q: Fraction, epsilon: Fraction) -> None:
    if not 0 < epsilon < min(q, 1 - q):
        raise DomainError(f"epsilon={epsilon} must lie in (0, min(q, 1-q)) = (0, {min(q, 1 - q)})")


def run_known_gap(
    source: FlipSource,
    q: "RationalLike | Probability",
    epsilon: RationalLike,
    delta: "RationalLike | Confidence",
) -> Decision:
    """Flip ``fixed_sample_k(epsilon, delta)`` coins; YES iff heads <= q*k.

    The tie ``heads == q*k`` answers YES.  Only YES or NO is ever returned.
    """
    q_exact = Probability.coerce(q).value
    eps = as_rational(epsilon)
    check_known_gap(q_exact, eps)
    k = fixed_sample_k(eps, Confidence.coerce(delta))
    heads = source.flip_batch(k).heads
    # heads <= q*k with q = a/b
    return Decision.YES if heads * q_exact.denominator <= q_exact.numerator * k else Decision.NO
