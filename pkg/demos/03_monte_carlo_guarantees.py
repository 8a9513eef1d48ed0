"""Checking the error and cost guarantees by simulation.

Run with:  python demos/03_monte_carlo_guarantees.py
"""

from seqcoin.montecarlo import TrialConfig, sweep

grid = [
    TrialConfig(p=p, q="0.5", delta=delta, trials=5000, master_seed=7, budget=2**26)
    for p in ("0.75", "0.5625", "0.3")
    for delta in ("0.2", "0.05")
]

print("p       delta  wrong  wilson99  mean rounds (bound)   mean flips (bound)")
for s in sweep(grid, workers=2):
    c = s.config
    print(
        f"{c.p:7s} {c.delta:5s} {s.wrong:6d} {s.error_rate_wilson_hi99:9.5f}"
        f"  {s.mean_iterations:6.3f} ({s.iteration_bound:.1f})"
        f"  {s.mean_flips:10.1f} ({s.flips_upper_bound:.1f})"
    )

# Observed error rates sit far below delta: the union bound over rounds is
# loose, and most rounds before round d cannot produce a wrong verdict.
