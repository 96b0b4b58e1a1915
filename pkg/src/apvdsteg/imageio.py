"""Lossless image I/O (binary PGM/PPM, 8-bit PNG) and nearest-neighbour resize.

PNM is handled here byte for byte; PNG goes through Pillow.  Anything that
could re-encode lossily (JPEG) is refused, since it would destroy payloads.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .core import ImageBuffer
from .errors import ChannelMismatch, MalformedFile, UnsupportedDepth, UnsupportedFormat

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_WHITESPACE = b" \t\r\n\v\f"

FORMATS = ("pgm", "ppm", "png")
_SUFFIXES = {".pgm": "pgm", ".ppm": "ppm", ".pnm": None, ".png": "png"}


def sniff_format(data: bytes) -> str:
    if data[:2] == b"P5":
        return "pgm"
    if data[:2] == b"P6":
        return "ppm"
    if data.startswith(PNG_SIGNATURE):
        return "png"
    if data[:3] == b"\xff\xd8\xff":
        raise UnsupportedFormat("JPEG is lossy and cannot carry a payload")
    raise UnsupportedFormat(f"unrecognized magic bytes {data[:8]!r}")


def read_image(path) -> ImageBuffer:
    data = Path(path).read_bytes()
    fmt = sniff_format(data)
    if fmt == "png":
        return _read_png(path)
    return parse_pnm(data)


def _pnm_tokens(data: bytes, count: int, pos: int):
    tokens = []
    while len(tokens) < count:
        while pos < len(data) and (data[pos] in _WHITESPACE or data[pos:pos + 1] == b"#"):
            if data[pos:pos + 1] == b"#":
                end = data.find(b"\n", pos)
                pos = len(data) if end < 0 else end + 1
            else:
                pos += 1
        start = pos
        while pos < len(data) and data[pos] not in _WHITESPACE and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise MalformedFile("PNM header ended early")
        tokens.append(data[start:pos])
    return tokens, pos


def parse_pnm(data: bytes) -> ImageBuffer:
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise UnsupportedFormat(f"not a binary PGM/PPM: {magic!r}")
    try:
        (w, h, maxval), pos = _pnm_tokens(data, 3, 2)
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise MalformedFile(f"bad PNM header: {exc}") from None
    if width < 1 or height < 1:
        raise MalformedFile(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedDepth(f"maxval {maxval}; only 8-bit (255) is supported")
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise MalformedFile("missing whitespace after maxval")
    pos += 1
    channels = 1 if magic == b"P5" else 3
    size = width * height * channels
    raster = data[pos:pos + size]
    if len(raster) != size:
        raise MalformedFile(f"expected {size} sample bytes, found {len(raster)}")
    pixels = np.frombuffer(raster, dtype=np.uint8)
    shape = (height, width) if channels == 1 else (height, width, 3)
    return ImageBuffer.from_array(pixels.reshape(shape))


def format_pnm(image: ImageBuffer) -> bytes:
    magic = b"P5" if image.channels == 1 else b"P6"
    header = magic + b"\n%d %d\n255\n" % (image.width, image.height)
    return header + image.to_array().tobytes()


def _read_png(path) -> ImageBuffer:
    from PIL import Image

    with Image.open(path) as im:
        if im.mode not in ("L", "RGB"):
            raise UnsupportedDepth(f"PNG mode {im.mode!r}; only 8-bit gray or RGB without alpha")
        return ImageBuffer.from_array(np.asarray(im))


def _format_for(path, fmt, image):
    if fmt is None:
        suffix = Path(path).suffix.lower()
        if suffix not in _SUFFIXES:
            raise UnsupportedFormat(f"cannot infer a lossless format from {suffix!r}")
        fmt = _SUFFIXES[suffix] or ("pgm" if image.channels == 1 else "ppm")
    fmt = fmt.lower()
    if fmt not in FORMATS:
        raise UnsupportedFormat(f"unsupported output format {fmt!r}")
    if (fmt == "pgm" and image.channels != 1) or (fmt == "ppm" and image.channels != 3):
        raise ChannelMismatch(f"{fmt.upper()} cannot hold a {image.channels}-channel image")
    return fmt


def write_image(image: ImageBuffer, path, fmt: str | None = None) -> None:
    """Write ``image`` losslessly; the format defaults to the file suffix."""
    fmt = _format_for(path, fmt, image)
    if fmt == "png":
        from PIL import Image

        Image.fromarray(image.to_array()).save(path, format="PNG")
        return
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(format_pnm(image))
    os.replace(tmp, path)


def resize_nearest(image: ImageBuffer, new_width: int, new_height: int) -> ImageBuffer:
    if new_width < 1 or new_height < 1:
        raise ValueError(f"target size {new_width}x{new_height} must be positive")
    rows = (np.arange(new_height) * image.height) // new_height
    cols = (np.arange(new_width) * image.width) // new_width
    return ImageBuffer(image.samples[:, rows][:, :, cols])
