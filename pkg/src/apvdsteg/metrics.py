"""Stego quality metrics: MSE, PSNR, global SSIM, UIQ and bit error rate.

SSIM and UIQ use a single set of global statistics per channel (no sliding
window) with population variances.  For colour images they are averaged
over channels; MSE and PSNR pool every sample.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Optional

import numpy as np

from .core import Bitstream, ImageBuffer
from .errors import DimensionMismatch

MAX_VALUE = 255
C1 = (0.01 * MAX_VALUE) ** 2
C2 = (0.03 * MAX_VALUE) ** 2


def _check(x: ImageBuffer, y: ImageBuffer):
    if x.samples.shape != y.samples.shape:
        raise DimensionMismatch(f"{x!r} vs {y!r}")


def mse(x: ImageBuffer, y: ImageBuffer) -> float:
    _check(x, y)
    n = x.samples.size
    if n == 0:
        return 0.0
    diff = x.samples.astype(np.int64) - y.samples.astype(np.int64)
    return int((diff * diff).sum()) / n


def psnr_from_mse(value: float) -> float:
    if value == 0:
        return math.inf
    return 10 * math.log10(MAX_VALUE**2 / value)


def psnr(x: ImageBuffer, y: ImageBuffer) -> float:
    """PSNR in dB; ``math.inf`` for identical images."""
    return psnr_from_mse(mse(x, y))


def _stats(a: np.ndarray, b: np.ndarray):
    a = a.astype(np.float64).ravel()
    b = b.astype(np.float64).ravel()
    mx, my = a.mean(), b.mean()
    da, db = a - mx, b - my
    return mx, my, (da * da).mean(), (db * db).mean(), (da * db).mean()


def ssim_global(x: ImageBuffer, y: ImageBuffer) -> float:
    _check(x, y)
    values = []
    for a, b in zip(x.samples, y.samples):
        mx, my, vx, vy, cxy = _stats(a, b)
        num = (2 * mx * my + C1) * (2 * cxy + C2)
        den = (mx * mx + my * my + C1) * (vx + vy + C2)
        values.append(num / den)
    return float(np.mean(values))


def uiq(x: ImageBuffer, y: ImageBuffer) -> float:
    """Universal image quality index, averaged over channels.

    A zero denominator (constant channels, or both means zero) scores 1.0
    when the channels are identical and 0.0 otherwise.
    """
    _check(x, y)
    values = []
    for a, b in zip(x.samples, y.samples):
        mx, my, vx, vy, cxy = _stats(a, b)
        den = (vx + vy) * (mx * mx + my * my)
        if den == 0:
            values.append(1.0 if np.array_equal(a, b) else 0.0)
        else:
            values.append(4 * cxy * mx * my / den)
    return float(np.mean(values))


def ber(a: Bitstream, b: Bitstream) -> float:
    if len(a) != len(b):
        raise ValueError(f"bit streams differ in length: {len(a)} vs {len(b)}")
    if len(a) == 0:
        return 0.0
    return int(np.count_nonzero(a.to_numpy() != b.to_numpy())) / len(a)


@dataclass
class QualityReport:
    mse: float
    psnr: float
    ssim: float
    uiq: float
    ber: Optional[float] = None
    cover: str = ""
    secret: str = ""

    def as_row(self) -> dict:
        row = asdict(self)
        row["psnr"] = format_psnr(self.psnr)
        return row


def format_psnr(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.4f}"


def quality_report(x: ImageBuffer, y: ImageBuffer, cover: str = "", secret: str = "") -> QualityReport:
    m = mse(x, y)
    return QualityReport(m, psnr_from_mse(m), ssim_global(x, y), uiq(x, y), cover=cover, secret=secret)


CSV_COLUMNS = ("cover", "secret", "psnr", "ssim", "uiq")


def reports_to_csv(reports: Iterable[QualityReport], extra: Iterable[str] = ()) -> str:
    columns = list(CSV_COLUMNS) + list(extra)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in reports:
        row = r.as_row() if isinstance(r, QualityReport) else r
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def reports_to_json(reports: Iterable[QualityReport]) -> str:
    rows = []
    for r in reports:
        row = asdict(r) if isinstance(r, QualityReport) else dict(r)
        if isinstance(row.get("psnr"), float) and math.isinf(row["psnr"]):
            row["psnr"] = "inf"
        rows.append(row)
    return json.dumps(rows, indent=2, sort_keys=True) + "\n"


def reports_to_markdown(reports: Iterable[QualityReport], extra: Iterable[str] = ()) -> str:
    columns = list(CSV_COLUMNS) + list(extra)
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for r in reports:
        row = r.as_row() if isinstance(r, QualityReport) else r
        lines.append("| " + " | ".join(_fmt(row.get(c)) for c in columns) + " |")
    return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format_psnr(value) if math.isinf(value) else f"{value:.4f}"
    return str(value)
