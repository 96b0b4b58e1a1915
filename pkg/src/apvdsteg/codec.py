"""Pair-level pixel value differencing.

A pair's difference D = |P2 - P1| falls in one range [l, u] of a
:class:`RangeTable`, which grants k = floor(log2(u - l + 1)) bits.  Embedding
first narrows the pair to its *canonical base* (difference exactly l) and
then widens it by the secret value s, so the new difference is l + s.  The
base is unchanged by embedding, which makes the fall-off test
(:func:`is_usable`) agree between embedder and extractor.

Scalar functions operate on one :class:`PixelPair`; the ``*_arrays``
functions are their vectorized counterparts used by the image pipeline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BoundaryOverflow, SecretOutOfRange, UnusablePair


class PixelPair(NamedTuple):
    first: int
    second: int


@dataclass(frozen=True)
class RangeEntry:
    lower: int
    upper: int

    @property
    def capacity_bits(self) -> int:
        return (self.upper - self.lower + 1).bit_length() - 1


class RangeTable:
    """Partition of [0, 255] into difference ranges.

    Capacities are derived from the widths, never stored.
    """

    def __init__(self, rows: Sequence[tuple[int, int]], name: str = "custom"):
        entries = tuple(RangeEntry(int(lo), int(hi)) for lo, hi in rows)
        if not entries:
            raise ValueError("range table is empty")
        expected = 0
        for e in entries:
            if e.lower != expected or e.upper < e.lower:
                raise ValueError(f"ranges must be contiguous from 0; bad entry [{e.lower}, {e.upper}]")
            if e.capacity_bits < 1:
                raise ValueError(f"range [{e.lower}, {e.upper}] is too narrow to carry a bit")
            expected = e.upper + 1
        if expected != 256:
            raise ValueError("ranges must end at 255")
        self.name = name
        self.entries = entries
        index = np.repeat(np.arange(len(entries)), [e.upper - e.lower + 1 for e in entries])
        self._index = index
        self.lower_of = np.array([entries[i].lower for i in index], dtype=np.int32)
        self.upper_of = np.array([entries[i].upper for i in index], dtype=np.int32)
        self.bits_of = np.array([entries[i].capacity_bits for i in index], dtype=np.int32)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return isinstance(other, RangeTable) and self.entries == other.entries

    def __repr__(self):
        body = ", ".join(f"[{e.lower},{e.upper}]k={e.capacity_bits}" for e in self.entries)
        return f"RangeTable({self.name!r}: {body})"

    def rows(self) -> list[tuple[int, int]]:
        return [(e.lower, e.upper) for e in self.entries]

    def entry_index(self, d: int) -> int:
        return int(self._index[d])

    def entry_indices(self, d: np.ndarray) -> np.ndarray:
        return self._index[d]

    @property
    def max_bits(self) -> int:
        return max(e.capacity_bits for e in self.entries)


DEFAULT_TABLE = RangeTable([(0, 7), (8, 15), (16, 31), (32, 63), (64, 127), (128, 255)], name="default")

_TABLES: dict[str, RangeTable] = {"default": DEFAULT_TABLE}


def register_table(table: RangeTable, name: str | None = None) -> RangeTable:
    _TABLES[name or table.name] = table
    return table


def get_table(name: str) -> RangeTable:
    """Look up a registered table, or load one from a file path."""
    if name in _TABLES:
        return _TABLES[name]
    if Path(name).is_file():
        return load_table(name)
    raise KeyError(f"unknown range table {name!r}; registered: {sorted(_TABLES)}")


def load_table(path) -> RangeTable:
    """Read (lower, upper) rows from JSON (list of pairs) or plain text.

    Text files hold one ``lower,upper`` or ``lower upper`` row per line;
    blank lines and ``#`` comments are ignored.
    """
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("["):
        rows = json.loads(text)
    else:
        rows = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].replace(",", " ").split()
            if line:
                rows.append((int(line[0]), int(line[1])))
    return RangeTable(rows, name=path.stem)


register_table(RangeTable([(0, 3), (4, 7), (8, 15), (16, 31), (32, 63), (64, 127), (128, 255)], name="fine"))


def difference(pair: PixelPair) -> int:
    return abs(pair[1] - pair[0])


def locate_range(d: int, table: RangeTable = DEFAULT_TABLE) -> RangeEntry:
    if not 0 <= d <= 255:
        raise ValueError(f"difference {d} outside [0, 255]")
    return table.entries[table.entry_index(d)]


def _ordered(pair: PixelPair) -> tuple[int, int, bool]:
    first, second = pair
    first_is_lo = first <= second
    return (first, second, True) if first_is_lo else (second, first, False)


def canonical_base(pair: PixelPair, table: RangeTable = DEFAULT_TABLE) -> PixelPair:
    lo, hi, first_is_lo = _ordered(pair)
    m = hi - lo - locate_range(hi - lo, table).lower
    lo, hi = lo + (m + 1) // 2, hi - m // 2
    return PixelPair(lo, hi) if first_is_lo else PixelPair(hi, lo)


def widen(base: PixelPair, m: int, first_is_lo: bool | None = None) -> PixelPair:
    """Spread ``base`` apart by ``m``: lo drops by ceil(m/2), hi rises by floor(m/2).

    When the base values are equal, ``first_is_lo`` picks which position is
    treated as lo (default: the first).
    """
    first, second = base
    if first_is_lo is None or first != second:
        first_is_lo = first <= second
    lo, hi = (first, second) if first_is_lo else (second, first)
    lo, hi = lo - (m + 1) // 2, hi + m // 2
    if lo < 0 or hi > 255:
        raise BoundaryOverflow(f"widening {tuple(base)} by {m} gives ({lo}, {hi})")
    return PixelPair(lo, hi) if first_is_lo else PixelPair(hi, lo)


def is_usable(pair: PixelPair, table: RangeTable = DEFAULT_TABLE) -> bool:
    entry = locate_range(difference(pair), table)
    base = canonical_base(pair, table)
    lo, hi = min(base), max(base)
    span = entry.upper - entry.lower
    return lo - (span + 1) // 2 >= 0 and hi + span // 2 <= 255


def capacity_bits(pair: PixelPair, table: RangeTable = DEFAULT_TABLE) -> int:
    if not is_usable(pair, table):
        return 0
    return locate_range(difference(pair), table).capacity_bits


def embed_pair(pair: PixelPair, s: int, table: RangeTable = DEFAULT_TABLE) -> PixelPair:
    """Hide ``s`` in ``pair``; the new difference is l + s.

    The original ordering of the two pixels is kept, including for ranges
    with l = 0 where the base collapses to two equal values.
    """
    if not is_usable(pair, table):
        raise UnusablePair(f"pair {tuple(pair)} would leave [0, 255] when widened")
    k = locate_range(difference(pair), table).capacity_bits
    if not 0 <= s < 1 << k:
        raise SecretOutOfRange(f"secret {s} does not fit in {k} bits")
    return widen(canonical_base(pair, table), s, first_is_lo=pair[0] <= pair[1])


def extract_pair(pair: PixelPair, table: RangeTable = DEFAULT_TABLE) -> tuple[int, int]:
    """Return ``(s, k)`` hidden in a stego pair."""
    if not is_usable(pair, table):
        raise UnusablePair(f"pair {tuple(pair)} carries no bits")
    d = difference(pair)
    entry = locate_range(d, table)
    return d - entry.lower, entry.capacity_bits


# Vectorized counterparts. Inputs are integer arrays of equal shape.

def _base_arrays(first, second, table):
    first = np.asarray(first, dtype=np.int32)
    second = np.asarray(second, dtype=np.int32)
    first_is_lo = first <= second
    lo = np.minimum(first, second)
    hi = np.maximum(first, second)
    d = hi - lo
    m = d - table.lower_of[d]
    return lo + (m + 1) // 2, hi - m // 2, first_is_lo, d


def capacity_arrays(first, second, table: RangeTable = DEFAULT_TABLE) -> np.ndarray:
    """Bits each pair can carry (0 where the pair is unusable)."""
    base_lo, base_hi, _, d = _base_arrays(first, second, table)
    span = table.upper_of[d] - table.lower_of[d]
    usable = (base_lo - (span + 1) // 2 >= 0) & (base_hi + span // 2 <= 255)
    return np.where(usable, table.bits_of[d], 0)


def embed_arrays(first, second, secrets, table: RangeTable = DEFAULT_TABLE):
    """Embed ``secrets`` into usable pairs; returns new ``(first, second)``.

    The caller guarantees every pair is usable and each secret fits its
    pair's capacity.
    """
    base_lo, base_hi, first_is_lo, _ = _base_arrays(first, second, table)
    s = np.asarray(secrets, dtype=np.int32)
    lo = base_lo - (s + 1) // 2
    hi = base_hi + s // 2
    return np.where(first_is_lo, lo, hi), np.where(first_is_lo, hi, lo)


def extract_arrays(first, second, table: RangeTable = DEFAULT_TABLE):
    """Return ``(s, k)`` arrays for stego pairs; ``k`` is 0 for unusable pairs."""
    first = np.asarray(first, dtype=np.int32)
    second = np.asarray(second, dtype=np.int32)
    d = np.abs(second - first)
    k = capacity_arrays(first, second, table)
    return np.where(k > 0, d - table.lower_of[d], 0), k
