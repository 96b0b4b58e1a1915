"""Whole-image embedding and extraction.

Slots are horizontal, non-overlapping pixel pairs enumerated channel-major,
then row-major.  ``apvd-prng`` visits them in the keyed permutation order,
``apvd-seq`` in raster order, and ``lsb`` replaces the low bits of single
samples visited in keyed order.  Every mode carries the same framed
bitstream (64-bit header first) and zero-pads the last chunk.
"""

from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np

from . import codec
from .codec import DEFAULT_TABLE, RangeTable
from .core import HEADER_BITS, Bitstream, ImageBuffer, StegoKey, decode_header
from .errors import CapacityExceeded, Truncated
from .keystream import permutation


class EmbedMode(str, enum.Enum):
    APVD_PRNG = "apvd-prng"
    APVD_SEQ = "apvd-seq"
    LSB = "lsb"

    def __str__(self):
        return self.value


class Slot(NamedTuple):
    channel: int
    row: int
    col_pair: int


def _as_key(key) -> StegoKey:
    return key if isinstance(key, StegoKey) else StegoKey(int(key))


def _check_k_lsb(k_lsb):
    if not 1 <= k_lsb <= 4:
        raise ValueError(f"k_lsb must be 1..4, got {k_lsb}")


def enumerate_slots(image: ImageBuffer) -> list[Slot]:
    pairs = image.width // 2
    return [
        Slot(c, r, p)
        for c in range(image.channels)
        for r in range(image.height)
        for p in range(pairs)
    ]


def slot_count(image: ImageBuffer) -> int:
    return image.channels * image.height * (image.width // 2)


def _pair_arrays(image: ImageBuffer):
    w = 2 * (image.width // 2)
    s = image.samples
    return s[:, :, 0:w:2].ravel().astype(np.int32), s[:, :, 1:w:2].ravel().astype(np.int32)


def _with_pairs(image: ImageBuffer, first, second) -> ImageBuffer:
    out = image.samples.copy()
    w = 2 * (image.width // 2)
    shape = out[:, :, 0:w:2].shape
    out[:, :, 0:w:2] = first.reshape(shape)
    out[:, :, 1:w:2] = second.reshape(shape)
    return ImageBuffer(out)


def slot_capacities(image: ImageBuffer, table: RangeTable = DEFAULT_TABLE) -> np.ndarray:
    """Bits per slot in enumeration order (0 for unusable slots)."""
    first, second = _pair_arrays(image)
    return codec.capacity_arrays(first, second, table)


def estimate_capacity(cover: ImageBuffer, table: RangeTable = DEFAULT_TABLE) -> int:
    return int(slot_capacities(cover, table).sum())


def capacity(cover: ImageBuffer, mode=EmbedMode.APVD_PRNG, table: RangeTable = DEFAULT_TABLE, k_lsb: int = 1) -> int:
    """Total framed bits (header included) the cover holds in ``mode``."""
    if EmbedMode(mode) is EmbedMode.LSB:
        _check_k_lsb(k_lsb)
        return cover.samples.size * k_lsb
    return estimate_capacity(cover, table)


def _pack(bits: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Read consecutive MSB-first chunks of widths ``k`` from ``bits``."""
    if len(k) == 0:
        return np.zeros(0, dtype=np.int32)
    width = int(k.max())
    cols = np.arange(width)
    starts = np.cumsum(k) - k
    valid = cols < k[:, None]
    idx = np.where(valid, starts[:, None] + cols, 0)
    chunk = np.where(valid, bits[idx], 0).astype(np.int32)
    shift = np.where(valid, k[:, None] - 1 - cols, 0)
    return (chunk << shift).sum(axis=1)


def _unpack(values: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Inverse of :func:`_pack`: concatenate each value as ``k`` MSB-first bits."""
    if len(k) == 0:
        return np.zeros(0, dtype=np.uint8)
    cols = np.arange(int(k.max()))
    valid = cols < k[:, None]
    shift = np.where(valid, k[:, None] - 1 - cols, 0)
    bits = (values[:, None] >> shift) & 1
    return bits[valid].astype(np.uint8)


def _plan(k_in_order: np.ndarray, nbits: int):
    """How many leading slots (in visiting order) cover ``nbits`` bits."""
    cum = np.cumsum(k_in_order)
    total = int(cum[-1]) if len(cum) else 0
    if nbits > total:
        return None, total
    if nbits == 0:
        return 0, total
    return int(np.searchsorted(cum, nbits)) + 1, total


def _visit_order(n: int, key, mode: EmbedMode) -> np.ndarray:
    if mode is EmbedMode.APVD_SEQ:
        return np.arange(n, dtype=np.int64)
    return permutation(n, _as_key(key)).order


def embed(
    cover: ImageBuffer,
    payload: Bitstream,
    key,
    mode=EmbedMode.APVD_PRNG,
    table: RangeTable = DEFAULT_TABLE,
    k_lsb: int = 1,
) -> ImageBuffer:
    """Hide the framed ``payload`` in ``cover`` and return the stego image.

    Raises CapacityExceeded if the usable slots run out first.
    """
    mode = EmbedMode(mode)
    if mode is EmbedMode.LSB:
        return lsb_embed(cover, payload, key, k_lsb)
    bits = payload.to_numpy()
    first, second = _pair_arrays(cover)
    k_all = codec.capacity_arrays(first, second, table)
    order = _visit_order(len(k_all), key, mode)
    k_ordered = k_all[order]
    used, total = _plan(k_ordered, len(bits))
    if used is None:
        raise CapacityExceeded(len(bits), total)
    if used == 0:
        return ImageBuffer(cover.samples.copy())
    slots = order[:used]
    k = k_ordered[:used]
    carrying = k > 0
    slots, k = slots[carrying], k[carrying]
    padded = np.zeros(int(k.sum()), dtype=np.uint8)
    padded[: len(bits)] = bits
    secrets = _pack(padded, k)
    new_first, new_second = codec.embed_arrays(first[slots], second[slots], secrets, table)
    first[slots] = new_first
    second[slots] = new_second
    return _with_pairs(cover, first, second)


def extract(
    stego: ImageBuffer,
    key,
    mode=EmbedMode.APVD_PRNG,
    table: RangeTable = DEFAULT_TABLE,
    k_lsb: int = 1,
) -> Bitstream:
    """Recover the framed bitstream (header included) from ``stego``.

    Raises InvalidHeader when key, mode or table do not match, and
    Truncated when the image ends before the declared payload.
    """
    mode = EmbedMode(mode)
    if mode is EmbedMode.LSB:
        return lsb_extract(stego, key, k_lsb)
    first, second = _pair_arrays(stego)
    order = _visit_order(len(first), key, mode)
    first, second = first[order], second[order]
    k_ordered = codec.capacity_arrays(first, second, table)

    def read(nbits):
        used, total = _plan(k_ordered, nbits)
        if used is None:
            raise Truncated(f"need {nbits} bits, image carries {total}")
        s, k = codec.extract_arrays(first[:used], second[:used], table)
        return _unpack(s, k)[:nbits]

    header = decode_header(Bitstream(read(HEADER_BITS)))
    return Bitstream(read(HEADER_BITS + header.payload_len_bits))


def lsb_embed(cover: ImageBuffer, payload: Bitstream, key, k_lsb: int = 1) -> ImageBuffer:
    """Baseline: overwrite the ``k_lsb`` low bits of samples in keyed order."""
    _check_k_lsb(k_lsb)
    bits = payload.to_numpy()
    flat = cover.samples.ravel().astype(np.int32)
    total = flat.size * k_lsb
    if len(bits) > total:
        raise CapacityExceeded(len(bits), total)
    chunks = -(-len(bits) // k_lsb)
    padded = np.zeros(chunks * k_lsb, dtype=np.uint8)
    padded[: len(bits)] = bits
    values = _pack(padded, np.full(chunks, k_lsb))
    idx = permutation(flat.size, _as_key(key)).order[:chunks]
    mask = (1 << k_lsb) - 1
    flat[idx] = (flat[idx] & ~mask) | values
    return ImageBuffer(flat.reshape(cover.samples.shape))


def lsb_extract(stego: ImageBuffer, key, k_lsb: int = 1) -> Bitstream:
    _check_k_lsb(k_lsb)
    flat = stego.samples.ravel().astype(np.int32)
    order = permutation(flat.size, _as_key(key)).order
    mask = (1 << k_lsb) - 1

    def read(nbits):
        chunks = -(-nbits // k_lsb)
        if chunks > flat.size:
            raise Truncated(f"need {nbits} bits, image carries {flat.size * k_lsb}")
        values = flat[order[:chunks]] & mask
        return _unpack(values, np.full(chunks, k_lsb))[:nbits]

    header = decode_header(Bitstream(read(HEADER_BITS)))
    return Bitstream(read(HEADER_BITS + header.payload_len_bits))
