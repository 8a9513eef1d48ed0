"""Deciding whether a coin lands heads less or more often than q.

Run with:  python demos/01_deciding_a_coin.py
"""

from seqcoin import RecordedSource, SyntheticSource, run

# A recorded stream of three heads.  With q = 0.5 and delta = 0.5 the first
# round flips k = 3 coins and needs X >= 3 for NO, X <= 0 for YES.
t = run(RecordedSource("HHH"), "0.5", "0.5")
print("HHH ->", t.decision.value, t.decision.meaning, "after", t.total_flips, "flips")

# One head out of three is inconclusive; round two then flips 21 coins and
# answers YES iff at most 5 are heads (threshold 21/4).
t = run(RecordedSource("HTT" + "HHHHH" + "T" * 16), "0.5", "0.5")
for r in t.rounds:
    print(f"  round {r.i}: eps={r.epsilon}, k={r.k}, heads={r.heads} -> {r.verdict.value}")

# A synthetic coin with p = 0.55 against q = 0.5.  The gap is 1/20, so the
# run usually needs about five rounds.
coin = SyntheticSource(0.55, seed=2024)
t = run(coin, "0.5", "0.05")
print("p=0.55 ->", t.decision.value, "in", t.iterations, "rounds,", t.total_flips, "flips")

# p == q never separates; a budget turns the endless loop into UNDECIDED.
t = run(SyntheticSource(0.5, seed=1), "0.5", "0.05", budget=100_000)
print("p=q    ->", t.decision.value, "after", t.total_flips, "flips")
