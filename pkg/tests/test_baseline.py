from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from seqcoin.baseline import run_known_gap
from seqcoin.core import Decision, DomainError
from seqcoin.schedule import fixed_sample_k
from seqcoin.sources import RecordedSource, SourceExhausted, SyntheticSource


def test_epsilon_domain():
    with pytest.raises(DomainError):
        run_known_gap(RecordedSource("H" * 10), "0.5", "0.5", "0.5")
    with pytest.raises(DomainError):
        run_known_gap(RecordedSource("H" * 10), "0.2", "0.2", "0.5")
    with pytest.raises(DomainError):
        run_known_gap(RecordedSource("H" * 10), "0.5", "0", "0.5")


def test_all_heads_is_no():
    assert run_known_gap(RecordedSource("HHHHHH"), "0.5", "0.25", "0.5") is Decision.NO


def test_tie_at_qk_is_yes():
    assert run_known_gap(RecordedSource("TTTHHH"), "0.5", "0.25", "0.5") is Decision.YES
    # the mirrored stream also sits on its tie and also answers YES
    assert run_known_gap(RecordedSource("HHHTTT"), "0.5", "0.25", "0.5") is Decision.YES


def test_consumes_exactly_k():
    src = RecordedSource("H" * 200)
    run_known_gap(src, "0.5", "0.1", "0.05")
    assert src.consumed == 150
    src = SyntheticSource(0.4, seed=0)
    run_known_gap(src, "0.5", "0.1", "0.1")
    assert src.consumed == 116


def test_short_stream():
    with pytest.raises(SourceExhausted):
        run_known_gap(RecordedSource("HHH"), "0.5", "0.25", "0.5")



@given(st.integers(1, 99), st.integers(1, 49), st.sampled_from(["0.5", "0.1"]), st.integers(0, 2**32), st.floats(0.05, 0.95))
def test_mirror_off_the_tie(q100, e100, delta, seed, bias):
    q, eps = Fraction(q100, 100), Fraction(e100, 100)
    assume(eps < min(q, 1 - q))
    k = fixed_sample_k(eps, delta)
    seq = (np.random.default_rng(seed).random(k) < bias).astype(np.uint8)
    a = run_known_gap(RecordedSource(seq), q, eps, delta)
    b = run_known_gap(RecordedSource(1 - seq), 1 - q, eps, delta)
    if int(seq.sum()) == q * k:
        # both runs sit on their tie, where the rule answers YES
        assert a is b is Decision.YES
    else:
        assert {a, b} == {Decision.YES, Decision.NO}
