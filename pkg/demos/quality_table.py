"""
Grayscale and colour quality tables
===================================

Every cover carries every other image as a 128x128 secret.  Covers are
resized to 512x512 first.  Prints PSNR / SSIM / UIQ rows in the same layout
as the command-line ``report`` command.
"""

import skimage.data

from apvdsteg import ImageBuffer, StegoKey, embed, extract, frame_payload, parse_payload, quality_report, resize_nearest
from apvdsteg.metrics import reports_to_markdown


def luma(rgb):
    return (0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]).round().astype("uint8")


gray = {
    "camera": skimage.data.camera(),
    "moon": skimage.data.moon(),
    "coins": skimage.data.coins(),
    "astronaut": luma(skimage.data.astronaut()),
}
color = {name: getattr(skimage.data, name)() for name in ["astronaut", "coffee", "chelsea", "rocket"]}


def table(images, seed=42):
    rows = []
    for cover_name, cover_array in images.items():
        cover = resize_nearest(ImageBuffer.from_array(cover_array), 512, 512)
        for secret_name, secret_array in images.items():
            if secret_name == cover_name:
                continue
            secret = resize_nearest(ImageBuffer.from_array(secret_array), 128, 128)
            stego = embed(cover, frame_payload(secret), StegoKey(seed))
            assert parse_payload(extract(stego, StegoKey(seed))) == secret
            rows.append(quality_report(cover, stego, cover=cover_name, secret=secret_name))
    return reports_to_markdown(rows)


print("grayscale\n" + table(gray))
print("colour\n" + table(color))
