"""
Hiding an image inside an image
===============================

Embed a 128x128 grayscale secret into a 512x512 cover with keyed pixel-pair
selection, then recover it with the same seed.
"""

import skimage.data

from apvdsteg import (
    ImageBuffer,
    StegoKey,
    embed,
    estimate_capacity,
    extract,
    frame_payload,
    parse_payload,
    quality_report,
    resize_nearest,
)

cover = resize_nearest(ImageBuffer.from_array(skimage.data.camera()), 512, 512)
secret = resize_nearest(ImageBuffer.from_array(skimage.data.coins()), 128, 128)

###############################################################################
# The secret is framed: a 64-bit header (magic, version, type, length, CRC-8)
# followed by its dimensions and raw samples.
payload = frame_payload(secret)
print(f"payload: {len(payload)} bits, cover capacity: {estimate_capacity(cover)} bits")

###############################################################################
# Both sides share only the 64-bit seed.
key = StegoKey(42)
stego = embed(cover, payload, key)
print(quality_report(cover, stego))

recovered = parse_payload(extract(stego, key))
print("recovered exactly:", recovered == secret)

###############################################################################
# A wrong seed visits the pairs in a different order, so the header check fails.
from apvdsteg import InvalidHeader

try:
    extract(stego, StegoKey(43))
except InvalidHeader as exc:
    print("wrong key:", exc)
