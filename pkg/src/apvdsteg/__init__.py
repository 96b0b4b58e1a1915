"""Adaptive pixel value differencing steganography with keyed pixel-pair selection."""

from .codec import DEFAULT_TABLE, PixelPair, RangeEntry, RangeTable, get_table, load_table, register_table
from .core import Bitstream, ImageBuffer, PayloadHeader, StegoKey, frame_payload, parse_payload
from .errors import CapacityExceeded, InvalidHeader, MalformedPayload, StegoError, Truncated
from .imageio import read_image, resize_nearest, write_image
from .keystream import derive_seed, permutation
from .metrics import QualityReport, ber, mse, psnr, quality_report, ssim_global, uiq
from .pipeline import EmbedMode, capacity, embed, estimate_capacity, extract

__version__ = "0.1.0"

__all__ = [
    "Bitstream",
    "CapacityExceeded",
    "DEFAULT_TABLE",
    "EmbedMode",
    "ImageBuffer",
    "InvalidHeader",
    "MalformedPayload",
    "PayloadHeader",
    "PixelPair",
    "QualityReport",
    "RangeEntry",
    "RangeTable",
    "StegoError",
    "StegoKey",
    "Truncated",
    "ber",
    "capacity",
    "derive_seed",
    "embed",
    "estimate_capacity",
    "extract",
    "frame_payload",
    "get_table",
    "load_table",
    "mse",
    "parse_payload",
    "permutation",
    "psnr",
    "quality_report",
    "read_image",
    "register_table",
    "resize_nearest",
    "ssim_global",
    "uiq",
    "write_image",
]
