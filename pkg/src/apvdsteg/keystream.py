"""SplitMix64 keystream and the keyed Fisher-Yates slot permutation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import StegoKey

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x00000100000001B3


@dataclass
class PrngState:
    state: int

    def next_u64(self) -> int:
        value, self.state = next_u64(self.state)
        return value


def next_u64(state: int) -> tuple[int, int]:
    """One SplitMix64 step. Returns ``(value, new_state)``."""
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31), state


def splitmix64_block(seed: int, count: int) -> np.ndarray:
    """The first ``count`` outputs for ``seed``, vectorized.

    SplitMix64's state after i steps is seed + i*gamma, so every output can be
    computed independently; uint64 arithmetic wraps modulo 2**64.
    """
    steps = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + steps * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def derive_seed(passphrase: bytes | str) -> int:
    """64-bit FNV-1a hash of ``passphrase`` (UTF-8 encoded if a str)."""
    if isinstance(passphrase, str):
        passphrase = passphrase.encode("utf-8")
    h = FNV_OFFSET
    for b in passphrase:
        h = ((h ^ b) * FNV_PRIME) & MASK64
    return h


def parse_seed(text: str) -> int:
    """Accept decimal or 0x-prefixed hex; reject anything outside 64 bits."""
    text = text.strip()
    value = int(text, 16) if text.lower().startswith("0x") else int(text, 10)
    if not 0 <= value <= MASK64:
        raise ValueError(f"seed {text} is not a 64-bit unsigned integer")
    return value


@dataclass(frozen=True)
class SlotPermutation:
    order: np.ndarray

    @property
    def n(self) -> int:
        return len(self.order)


def permutation(n: int, key: StegoKey | int) -> SlotPermutation:
    """Shuffle ``range(n)`` with Fisher-Yates driven by SplitMix64.

    For i = n-1 down to 1 the i-th generator output (in call order) picks
    j = value mod (i + 1) and swaps positions i and j.
    """
    if n < 0:
        raise ValueError("slot count must be non-negative")
    seed = key.seed if isinstance(key, StegoKey) else key
    if n < 2:
        return SlotPermutation(np.arange(n, dtype=np.int64))
    values = splitmix64_block(seed, n - 1)
    bounds = np.arange(n, 1, -1, dtype=np.uint64)
    picks = (values % bounds).tolist()
    order = list(range(n))
    i = n - 1
    for j in picks:
        order[i], order[j] = order[j], order[i]
        i -= 1
    return SlotPermutation(np.array(order, dtype=np.int64))
