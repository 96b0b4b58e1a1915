"""Domain types, MSB-first bit plumbing and payload framing.

Wire layout of a framed payload::

    byte 0   0xA7          magic
    byte 1   0x01          version
    byte 2   type          0x01 raw bytes, 0x02 gray image, 0x03 RGB image
    byte 3-6 length        payload bits after the header, big-endian
    byte 7   crc8(0..6)
    ...      payload       images: u16 width, u16 height, samples R,G,B interleaved
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import InvalidHeader, MalformedPayload, Truncated

MAGIC = 0xA7
VERSION = 0x01
HEADER_BITS = 64

TYPE_RAW = 0x01
TYPE_GRAY = 0x02
TYPE_RGB = 0x03


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """An 8-bit raster stored channel-planar: ``samples[c, row, col]``.

    Use :meth:`from_array` to build one from the usual ``(H, W)`` or
    ``(H, W, 3)`` layout and :meth:`to_array` to get that layout back.
    """

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim != 3 or s.shape[0] not in (1, 3):
            raise ValueError(f"expected (channels, height, width) with 1 or 3 channels, got {s.shape}")
        if s.dtype != np.uint8:
            if s.size and (s.min() < 0 or s.max() > 255):
                raise ValueError("samples must lie in [0, 255]")
            s = s.astype(np.uint8)
        s = np.ascontiguousarray(s)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_array(cls, array) -> "ImageBuffer":
        a = np.asarray(array)
        if a.ndim == 2:
            return cls(a[None, :, :])
        if a.ndim == 3 and a.shape[2] == 3:
            return cls(np.moveaxis(a, 2, 0))
        raise ValueError(f"cannot interpret array of shape {a.shape} as gray or RGB")

    @classmethod
    def blank(cls, width: int, height: int, channels: int = 1, value: int = 0) -> "ImageBuffer":
        return cls(np.full((channels, height, width), value, dtype=np.uint8))

    @property
    def channels(self) -> int:
        return self.samples.shape[0]

    @property
    def height(self) -> int:
        return self.samples.shape[1]

    @property
    def width(self) -> int:
        return self.samples.shape[2]

    def to_array(self) -> np.ndarray:
        """Return an ``(H, W)`` or ``(H, W, 3)`` uint8 copy."""
        if self.channels == 1:
            return self.samples[0].copy()
        return np.ascontiguousarray(np.moveaxis(self.samples, 0, 2))

    def __eq__(self, other):
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return self.samples.shape == other.samples.shape and bool(np.array_equal(self.samples, other.samples))

    def __repr__(self):
        return f"ImageBuffer({self.width}x{self.height}x{self.channels})"


@dataclass(frozen=True)
class StegoKey:
    seed: int

    def __post_init__(self):
        if not 0 <= self.seed < 1 << 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


class Bitstream:
    """Growable MSB-first bit sequence, one byte per bit internally."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int] = ()):
        if isinstance(bits, np.ndarray):
            self._bits = bytearray(bits.astype(np.uint8).tobytes())
        else:
            self._bits = bytearray(bits)
        if max(self._bits, default=0) > 1:
            raise ValueError("bits must be 0 or 1")

    @classmethod
    def from_bytes(cls, data: bytes) -> "Bitstream":
        return cls(np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8)))

    def __len__(self):
        return len(self._bits)

    def __eq__(self, other):
        if not isinstance(other, Bitstream):
            return NotImplemented
        return self._bits == other._bits

    def __repr__(self):
        head = "".join(map(str, self._bits[:32]))
        return f"Bitstream(len={len(self)}, bits={head}{'...' if len(self) > 32 else ''})"

    @property
    def bits(self) -> list[int]:
        return list(self._bits)

    def to_numpy(self) -> np.ndarray:
        return np.frombuffer(bytes(self._bits), dtype=np.uint8).copy()

    def to_bytes(self) -> bytes:
        """Pack into bytes; a trailing partial byte is zero-padded."""
        return np.packbits(self.to_numpy()).tobytes()

    def write(self, value: int, k: int) -> "Bitstream":
        if not 1 <= k <= 16:
            raise ValueError(f"bit count must be 1..16, got {k}")
        if not 0 <= value < 1 << k:
            raise ValueError(f"value {value} does not fit in {k} bits")
        self._bits.extend((value >> (k - 1 - i)) & 1 for i in range(k))
        return self

    def read(self, cursor: int, k: int) -> int:
        if not 1 <= k <= 16:
            raise ValueError(f"bit count must be 1..16, got {k}")
        if cursor < 0 or cursor + k > len(self._bits):
            raise IndexError(f"read of {k} bits at {cursor} exceeds stream of {len(self._bits)}")
        value = 0
        for b in self._bits[cursor:cursor + k]:
            value = (value << 1) | b
        return value

    def extend(self, other: "Bitstream") -> "Bitstream":
        self._bits.extend(other._bits)
        return self

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Bitstream(self._bits[item])
        return self._bits[item]


def bit_write(stream: Bitstream, value: int, k: int) -> Bitstream:
    return stream.write(value, k)


def bit_read(stream: Bitstream, cursor: int, k: int) -> int:
    return stream.read(cursor, k)


def crc8(data: bytes) -> int:
    """CRC-8, poly 0x07, init 0x00, no reflection, no final xor."""
    crc = 0
    for byte in data:
        crc ^= byte
        for _ in range(8):
            crc = ((crc << 1) ^ 0x07) & 0xFF if crc & 0x80 else (crc << 1) & 0xFF
    return crc


@dataclass(frozen=True)
class PayloadHeader:
    payload_type: int
    payload_len_bits: int
    magic: int = MAGIC
    version: int = VERSION

    def header_bytes(self) -> bytes:
        body = bytes([self.magic, self.version, self.payload_type]) + self.payload_len_bits.to_bytes(4, "big")
        return body + bytes([crc8(body)])

    @property
    def crc(self) -> int:
        return self.header_bytes()[7]


def encode_header(payload_type: int, payload_len_bits: int) -> Bitstream:
    if not 0 <= payload_len_bits < 1 << 32:
        raise ValueError(f"payload length {payload_len_bits} does not fit in 32 bits")
    if not 0 <= payload_type <= 0xFF:
        raise ValueError(f"payload type must be one byte, got {payload_type}")
    return Bitstream.from_bytes(PayloadHeader(payload_type, payload_len_bits).header_bytes())


def decode_header(stream: Bitstream) -> PayloadHeader:
    if len(stream) < HEADER_BITS:
        raise Truncated(f"header needs {HEADER_BITS} bits, only {len(stream)} available")
    raw = stream[:HEADER_BITS].to_bytes()
    if raw[0] != MAGIC or raw[1] != VERSION or crc8(raw[:7]) != raw[7]:
        raise InvalidHeader("bad magic, version or checksum (wrong key, mode or table?)")
    return PayloadHeader(raw[2], int.from_bytes(raw[3:7], "big"))


Payload = Union[ImageBuffer, bytes]


def frame_payload(secret: Payload) -> Bitstream:
    """Prefix ``secret`` with its header and serialize it MSB-first."""
    if isinstance(secret, ImageBuffer):
        if secret.width >= 1 << 16 or secret.height >= 1 << 16:
            raise ValueError(f"image {secret.width}x{secret.height} too large for 16-bit dimensions")
        body = secret.width.to_bytes(2, "big") + secret.height.to_bytes(2, "big") + secret.to_array().tobytes()
        ptype = TYPE_GRAY if secret.channels == 1 else TYPE_RGB
    else:
        body = bytes(secret)
        ptype = TYPE_RAW
    stream = encode_header(ptype, 8 * len(body))
    return stream.extend(Bitstream.from_bytes(body))


def parse_payload(bits: Bitstream) -> Payload:
    header = decode_header(bits)
    end = HEADER_BITS + header.payload_len_bits
    if len(bits) < end:
        raise Truncated(f"header declares {header.payload_len_bits} payload bits, only {len(bits) - HEADER_BITS} present")
    if header.payload_len_bits % 8:
        raise MalformedPayload("payload length is not a whole number of bytes")
    body = bits[HEADER_BITS:end].to_bytes()
    if header.payload_type == TYPE_RAW:
        return body
    if header.payload_type not in (TYPE_GRAY, TYPE_RGB):
        raise MalformedPayload(f"unknown payload type 0x{header.payload_type:02X}")
    if len(body) < 4:
        raise MalformedPayload("image payload shorter than its inner header")
    width = int.from_bytes(body[0:2], "big")
    height = int.from_bytes(body[2:4], "big")
    channels = 1 if header.payload_type == TYPE_GRAY else 3
    if len(body) - 4 != width * height * channels:
        raise MalformedPayload(
            f"{width}x{height}x{channels} image needs {width * height * channels} bytes, payload has {len(body) - 4}"
        )
    pixels = np.frombuffer(body, dtype=np.uint8, offset=4)
    shape = (height, width) if channels == 1 else (height, width, 3)
    return ImageBuffer.from_array(pixels.reshape(shape))
