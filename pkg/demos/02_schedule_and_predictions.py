"""Sample sizes per round and what the analysis predicts.

Run with:  python demos/02_schedule_and_predictions.py
"""

from fractions import Fraction

from seqcoin import coinflipper_k, fixed_sample_k
from seqcoin.predict import difficulty, flips_upper_bound, iteration_bound, series_constants

delta = "0.05"
print("round  eps       k_i (sequential)   k (fixed eps, known gap)")
for i in range(1, 9):
    eps = Fraction(1, 2**i)
    print(f"{i:5d}  {str(eps):8s} {coinflipper_k(i, delta):12d} {fixed_sample_k(eps, delta):16d}")

# The ln(pi^2 i^2 / 6) inflation costs only a log factor over the fixed
# sample size, yet buys correctness without knowing the gap in advance.

print()
print("p       d   E[rounds] <=   E[flips] <=")
for p in ("0.75", "0.6", "0.55", "0.51", "0.501"):
    d = difficulty(p, "0.5")
    print(f"{p:6s} {d:3d} {iteration_bound(d):10.1f} {flips_upper_bound(d, delta):14.1f}")

c1, c2, c3 = series_constants(4)
print(f"\nseries constants: {c1:.6f} {c2:.6f} {c3:.8f}")
