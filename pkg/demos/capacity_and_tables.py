"""
Capacity, range tables and the LSB baseline
===========================================

How many bits a cover holds depends on its pixel differences and on the range
table.  Pairs whose widened values would leave [0, 255] are skipped.
"""

import numpy as np
import skimage.data

from apvdsteg import Bitstream, ImageBuffer, RangeTable, StegoKey, capacity, embed, psnr, register_table
from apvdsteg.cli import capacity_summary
from apvdsteg.codec import DEFAULT_TABLE, get_table
from apvdsteg.core import HEADER_BITS, TYPE_RAW, encode_header

cover = ImageBuffer.from_array(skimage.data.camera())

summary = capacity_summary(cover, DEFAULT_TABLE)
print(f"{summary['total_bits']} bits in {summary['usable_pairs']} usable pairs, {summary['skipped_pairs']} skipped")
for lo, hi, k, pairs, bits in summary["histogram"]:
    print(f"  [{lo:3d},{hi:3d}] k={k}: {pairs:6d} pairs, {bits:7d} bits")

###############################################################################
# A custom table with narrower low ranges trades capacity for distortion.
register_table(RangeTable([(0, 1), (2, 3), (4, 7), (8, 15), (16, 31), (32, 63), (64, 127), (128, 255)], name="narrow"))

rng = np.random.default_rng(1)
n = 100_000
payload = encode_header(TYPE_RAW, n).extend(Bitstream(rng.integers(0, 2, n, dtype=np.uint8)))
for name in ["default", "fine", "narrow"]:
    table = get_table(name)
    stego = embed(cover, payload, StegoKey(7), table=table)
    print(f"{name:8s} capacity={capacity(cover, table=table):7d}  psnr={psnr(cover, stego):.2f} dB")

###############################################################################
# Baseline: k low bits per sample, visited in keyed order.
for k in (1, 2):
    stego = embed(cover, payload, StegoKey(7), mode="lsb", k_lsb=k)
    print(f"lsb k={k}  capacity={capacity(cover, 'lsb', k_lsb=k):7d}  psnr={psnr(cover, stego):.2f} dB")
print(f"(payload {n + HEADER_BITS} framed bits)")
