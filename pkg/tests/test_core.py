from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import verdict_by_definition
from seqcoin.core import (
    ContractViolation,
    Decision,
    ExactThreshold,
    MalformedNumber,
    OutOfRange,
    Probability,
    RoundOutcome,
    Transcript,
    Verdict,
    decide_round,
    parse_probability,
)


@pytest.mark.parametrize(
    "heads, q, k, i, expected",
    [
        (3, "0.5", 3, 1, Verdict.NO),
        (0, "0.5", 3, 1, Verdict.YES),
        (1, "0.5", 3, 1, Verdict.CONTINUE),
        (5, "0.5", 21, 2, Verdict.YES),
        (6, "0.5", 21, 2, Verdict.CONTINUE),
        (15, "0.5", 21, 2, Verdict.CONTINUE),
        (16, "0.5", 21, 2, Verdict.NO),
    ],
)
def test_decide_round_examples(heads, q, k, i, expected):
    assert decide_round(heads, ExactThreshold(parse_probability(q), k, i)) is expected


def test_threshold_quantities_are_exact():
    t = ExactThreshold(Fraction(1, 2), 21, 2)
    assert t.lower == Fraction(21, 4)
    assert t.upper == Fraction(63, 4)
    t1 = ExactThreshold(Fraction(1, 2), 3, 1)
    assert (t1.lower, t1.upper) == (0, 3)


def test_heads_above_k_is_a_contract_violation():
    with pytest.raises(ContractViolation):
        decide_round(4, ExactThreshold(Fraction(1, 2), 3, 1))
    with pytest.raises(ContractViolation):
        decide_round(-1, ExactThreshold(Fraction(1, 2), 3, 1))


@pytest.mark.parametrize("text, value", [("0.5", Fraction(1, 2)), ("0.05", Fraction(1, 20)), (" 0.125 ", Fraction(1, 8))])
def test_parse_probability(text, value):
    assert parse_probability(text) == value


@pytest.mark.parametrize("text", ["1.0", "0", "0.0", "1", "2.5"])
def test_parse_probability_out_of_range(text):
    with pytest.raises(OutOfRange):
        parse_probability(text)


@pytest.mark.parametrize("text", ["", "abc", "0.5.5", "nan", "inf", "-0.5", "1/2", "0x1"])
def test_parse_probability_malformed(text):
    with pytest.raises((MalformedNumber, OutOfRange)):
        parse_probability(text)


def test_parse_round_trips_decimal():
    for text in ["0.05", "0.5", "0.123456789", "0.999"]:
        frac = parse_probability(text)
        assert 10 ** len(text.split(".")[1]) % frac.denominator == 0
        assert str(frac.numerator / frac.denominator) == text or float(text) == frac.numerator / frac.denominator


def test_probability_rejects_bounds():
    with pytest.raises(OutOfRange):
        Probability(Fraction(0))
    with pytest.raises(OutOfRange):
        Probability.coerce(1.0)


def test_decision_meaning():
    assert Decision.YES.meaning == "p<q"
    assert Decision.NO.meaning == "p>q"
    assert Decision.UNDECIDED.meaning is None


small_q = st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(999, 1000)).filter(lambda f: 0 < f < 1)


@st.composite
def round_inputs(draw):
    i = draw(st.integers(1, 12))
    k = draw(st.integers(1, 5000))
    heads = draw(st.integers(0, k))
    q = draw(small_q)
    return heads, q, k, i


@given(round_inputs())
def test_decide_round_matches_definition(args):
    heads, q, k, i = args
    assert decide_round(heads, ExactThreshold(q, k, i)).value == verdict_by_definition(heads, q, k, i)


@given(round_inputs())
def test_mirror_symmetry(args):
    heads, q, k, i = args
    v = decide_round(heads, ExactThreshold(q, k, i))
    m = decide_round(k - heads, ExactThreshold(1 - q, k, i))
    assert {Verdict.YES: Verdict.NO, Verdict.NO: Verdict.YES, Verdict.CONTINUE: Verdict.CONTINUE}[v] is m


@given(round_inputs())
def test_monotone_in_heads(args):
    _, q, k, i = args
    t = ExactThreshold(q, k, i)
    ranks = [decide_round(x, t).rank for x in range(0, k + 1, max(1, k // 200))]
    assert ranks == sorted(ranks)


@given(st.integers(1, 200), st.integers(1, 10), st.data())
def test_equal_rationals_give_equal_verdicts(k, i, data):
    heads = data.draw(st.integers(0, k))
    q_text = data.draw(st.sampled_from(["0.5", "0.25", "0.3", "0.875"]))
    padded = q_text + "000"
    assert decide_round(heads, ExactThreshold(parse_probability(q_text), k, i)) is decide_round(
        heads, ExactThreshold(parse_probability(padded), k, i)
    )


def _rounds(*verdicts):
    return tuple(RoundOutcome(n + 1, Fraction(1, 2 ** (n + 1)), 3, 1, v) for n, v in enumerate(verdicts))


def test_transcript_invariants():
    t = Transcript(_rounds(Verdict.CONTINUE, Verdict.NO), Decision.NO, q="0.5", delta="0.5")
    t.check()
    assert t.total_flips == 6
    assert t.iterations == 2
    Transcript(_rounds(Verdict.CONTINUE), Decision.UNDECIDED, q="0.5", delta="0.5").check()
    with pytest.raises(ContractViolation):
        Transcript(_rounds(Verdict.NO, Verdict.NO), Decision.NO, q="0.5", delta="0.5").check()
    with pytest.raises(ContractViolation):
        Transcript(_rounds(Verdict.YES), Decision.NO, q="0.5", delta="0.5").check()
    with pytest.raises(ContractViolation):
        Transcript(_rounds(Verdict.CONTINUE), Decision.YES, q="0.5", delta="0.5", budget=2).check()
