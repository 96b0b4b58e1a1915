import numpy as np
import pytest

from apvdsteg import ImageBuffer, resize_nearest

GRAY_NAMES = ["camera", "moon", "coins", "page", "clock", "brick"]
RGB_NAMES = ["astronaut", "coffee", "chelsea", "rocket", "immunohistochemistry"]


def _luma(rgb):
    r, g, b = (rgb[..., i].astype(np.int64) for i in range(3))
    return ((299 * r + 587 * g + 114 * b + 500) // 1000).astype(np.uint8)


def natural(name, size=None, gray=False):
    data = pytest.importorskip("skimage.data")
    array = getattr(data, name)()
    if gray and array.ndim == 3:
        array = _luma(array)
    image = ImageBuffer.from_array(array)
    if size is not None:
        image = resize_nearest(image, size, size)
    return image


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_image(rng, width, height, channels=1):
    return ImageBuffer(rng.integers(0, 256, size=(channels, height, width), dtype=np.uint8))


def smooth_image(rng, width, height, channels=1):
    """Low-texture synthetic cover: a gradient plus mild noise."""
    yy, xx = np.mgrid[0:height, 0:width]
    base = 40 + (150 * (xx + yy) / max(width + height - 2, 1))
    planes = [np.clip(base + rng.normal(0, 3, size=base.shape) + 20 * c, 0, 255) for c in range(channels)]
    return ImageBuffer(np.stack(planes).round().astype(np.uint8))


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
