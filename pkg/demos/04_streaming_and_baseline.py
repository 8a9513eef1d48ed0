"""Feeding flips one at a time, and the fixed-sample tester.

Run with:  python demos/04_streaming_and_baseline.py
"""

import numpy as np

from seqcoin import RecordedSource, StreamingRun, run, run_known_gap

rng = np.random.default_rng(3)
flips = (rng.random(5000) < 0.4).astype(np.uint8)

# The streaming form reaches the same rounds as the batch form.
stream = StreamingRun("0.5", "0.1")
for n, f in enumerate(flips, 1):
    if stream.feed(int(f)) is not None:
        break
batch = run(RecordedSource(flips), "0.5", "0.1")
print("streaming:", stream.decision.value, "after", n, "flips")
print("batch:    ", batch.decision.value, "after", batch.total_flips, "flips")
assert stream.transcript().rounds == batch.rounds

# When the gap is known in advance (p is 0.4 or 0.6), a single batch of
# ceil(ln(1/delta) / (2 eps^2)) flips suffices.
src = RecordedSource(flips)
print("known gap:", run_known_gap(src, "0.5", "0.1", "0.1").value, "after", src.consumed, "flips")
