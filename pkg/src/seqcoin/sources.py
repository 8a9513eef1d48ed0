"""Bernoulli flip providers.

Synthetic coins draw whole batches as a single ``Binomial(k, p)`` variate
from numpy's PCG64 generator.  Per-trial streams are derived by
:class:`numpy.random.SeedSequence` with ``spawn_key=(trial_index,)``, so a
trial's flips depend only on ``(master_seed, trial_index)``.  This choice is
part of the reproducibility contract: changing it changes every seeded
result.

Recorded streams are ASCII text of ``H``/``T`` (or ``1``/``0``) symbols;
whitespace is ignored and anything else is a format error.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, BinaryIO, Optional, Union

import numpy as np

from .core import ContractViolation, OutOfRange, SeqCoinError

STDIN = "-"

_SEED_LIMIT = 2**64

# numpy's binomial sampler takes a signed 64-bit trial count
_MAX_BINOMIAL_N = 2**62


class SourceExhausted(SeqCoinError):
    """A recorded stream ran out of symbols in the middle of a batch."""

    def __init__(self, remaining: int, requested: int):
        super().__init__(f"flip stream exhausted: {requested} flips requested, {remaining} remaining")
        self.remaining = remaining
        self.requested = requested
        self.transcript = None


class StreamFormatError(SeqCoinError, ValueError):
    def __init__(self, offset: int, byte: int):
        super().__init__(f"invalid byte {bytes([byte])!r} at offset {offset} in flip stream")
        self.offset = offset
        self.byte = byte


@dataclass(frozen=True)
class FlipBatchResult:
    heads: int
    flips_consumed: int


# 1 = heads, 0 = tails, 2 = skip (whitespace), 255 = invalid
_LOOKUP = np.full(256, 255, dtype=np.uint8)
for _c in b"Hh1":
    _LOOKUP[_c] = 1
for _c in b"Tt0":
    _LOOKUP[_c] = 0
for _c in b" \t\r\n\v\f":
    _LOOKUP[_c] = 2


def parse_flip_stream(data: Union[bytes, str]) -> np.ndarray:
    """Decode a recorded stream into an array of 0/1 symbols."""
    if isinstance(data, str):
        try:
            data = data.encode("ascii")
        except UnicodeEncodeError:
            for offset, ch in enumerate(data.encode("utf-8")):
                if ch > 127:
                    raise StreamFormatError(offset, ch) from None
            raise
    raw = np.frombuffer(data, dtype=np.uint8)
    codes = _LOOKUP[raw]
    bad = np.flatnonzero(codes == 255)
    if bad.size:
        offset = int(bad[0])
        raise StreamFormatError(offset, int(raw[offset]))
    return codes[codes != 2].astype(np.uint8)


class FlipSource:
    """Base class: a single-consumer stream of coin flips."""

    consumed: int = 0

    def flip_batch(self, k: int) -> FlipBatchResult:
        raise NotImplementedError

    def flips(self, k: int) -> np.ndarray:
        """Draw ``k`` individual flips (1 = heads) in order."""
        raise NotImplementedError

    def descriptor(self) -> dict[str, Any]:
        raise NotImplementedError


def _check_k(k: int) -> None:
    if k < 1:
        raise ContractViolation(f"batch size must be >= 1, got {k}")


class SyntheticSource(FlipSource):
    """A pseudo-random coin with heads probability ``p``."""

    def __init__(self, p: float, seed: int, stream: Optional[int] = None):
        p = float(p)
        if not 0.0 < p < 1.0:
            raise OutOfRange(f"synthetic p={p!r} is not strictly between 0 and 1")
        if not 0 <= seed < _SEED_LIMIT:
            raise OutOfRange(f"seed {seed} is not a 64-bit unsigned integer")
        if stream is not None and stream < 0:
            raise OutOfRange(f"stream index must be nonnegative, got {stream}")
        self.p = p
        self.seed = seed
        self.stream = stream
        spawn_key = () if stream is None else (stream,)
        self._rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=spawn_key)))
        self.consumed = 0

    def flip_batch(self, k: int) -> FlipBatchResult:
        _check_k(k)
        heads, left = 0, k
        while left:
            n = min(left, _MAX_BINOMIAL_N)
            heads += int(self._rng.binomial(n, self.p))
            left -= n
        self.consumed += k
        return FlipBatchResult(heads=heads, flips_consumed=k)

    def flips(self, k: int) -> np.ndarray:
        _check_k(k)
        self.consumed += k
        return (self._rng.random(k) < self.p).astype(np.uint8)

    def descriptor(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": "synthetic", "p": self.p, "seed": self.seed}
        if self.stream is not None:
            d["stream"] = self.stream
        return d


class RecordedSource(FlipSource):
    """Replays a fixed sequence of flips."""

    def __init__(self, symbols: Union[np.ndarray, bytes, str], origin: str = "<memory>"):
        if isinstance(symbols, (bytes, str)):
            symbols = parse_flip_stream(symbols)
        self.symbols = np.asarray(symbols, dtype=np.uint8)
        if self.symbols.size and self.symbols.max() > 1:
            raise ContractViolation("recorded symbols must be 0 or 1")
        self.origin = origin
        self.consumed = 0

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "RecordedSource":
        return cls(parse_flip_stream(Path(path).read_bytes()), origin=str(path))

    @classmethod
    def from_stdin(cls, stream: Optional[BinaryIO] = None) -> "RecordedSource":
        stream = stream if stream is not None else sys.stdin.buffer
        return cls(parse_flip_stream(stream.read()), origin=STDIN)

    @property
    def remaining(self) -> int:
        return int(self.symbols.size) - self.consumed

    def _take(self, k: int) -> np.ndarray:
        _check_k(k)
        if self.remaining < k:
            raise SourceExhausted(remaining=self.remaining, requested=k)
        chunk = self.symbols[self.consumed : self.consumed + k]
        self.consumed += k
        return chunk

    def flip_batch(self, k: int) -> FlipBatchResult:
        return FlipBatchResult(heads=int(self._take(k).sum(dtype=np.int64)), flips_consumed=k)

    def flips(self, k: int) -> np.ndarray:
        return self._take(k).copy()

    def mirrored(self) -> "RecordedSource":
        """The same stream with heads and tails swapped, rewound to the start."""
        return RecordedSource(1 - self.symbols, origin=f"mirror({self.origin})")

    def descriptor(self) -> dict[str, Any]:
        return {"kind": "recorded", "origin": self.origin}


def derive_trial_source(master_seed: int, trial_index: int, p: float) -> SyntheticSource:
    """Independent, reproducible coin for trial ``trial_index`` of a Monte Carlo run."""
    return SyntheticSource(p, seed=master_seed, stream=trial_index)


def flip_batch(source: FlipSource, k: int) -> FlipBatchResult:
    return source.flip_batch(k)
