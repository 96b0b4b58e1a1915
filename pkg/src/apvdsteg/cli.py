"""Command-line front end: ``apvdsteg {embed,extract,capacity,quality,report}``.

Exit codes: 0 success, 1 report rows failed, 2 capacity exceeded,
3 I/O or format error, 4 invalid header (wrong key/mode/table), 64 usage.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import metrics
from .codec import RangeTable, get_table
from .core import HEADER_BITS, ImageBuffer, StegoKey, frame_payload, parse_payload
from .errors import (
    CapacityExceeded,
    ChannelMismatch,
    InvalidHeader,
    MalformedFile,
    MalformedPayload,
    StegoError,
    Truncated,
    UnsupportedDepth,
    UnsupportedFormat,
)
from .imageio import read_image, resize_nearest, write_image
from .keystream import derive_seed, parse_seed
from .pipeline import EmbedMode, capacity, embed, extract, slot_capacities, slot_count

EXIT_OK = 0
EXIT_REPORT_FAILED = 1
EXIT_CAPACITY = 2
EXIT_IO = 3
EXIT_INVALID_HEADER = 4
EXIT_USAGE = 64

IMAGE_SUFFIXES = {".pgm", ".ppm", ".pnm", ".png"}
COVER_SIZE = 512
SECRET_SIZE = 128

_IO_ERRORS = (OSError, UnsupportedFormat, MalformedFile, UnsupportedDepth, ChannelMismatch)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_key_args(p):
    p.add_argument("--seed", help="64-bit seed, decimal or 0x-prefixed hex")
    p.add_argument("--key", help="passphrase; the seed is derived with FNV-1a")


def _add_mode_args(p):
    p.add_argument("--mode", choices=[m.value for m in EmbedMode], default=EmbedMode.APVD_PRNG.value)
    p.add_argument("--k-lsb", type=int, default=1, help="low bits per sample in lsb mode (1-4)")
    p.add_argument("--table", default="default", help="registered range table name or table file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="apvdsteg", description="APVD steganography with keyed pixel-pair selection")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("embed", help="hide a secret image or file in a cover image")
    p.add_argument("--cover", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--secret", help="secret image (PGM/PPM/PNG)")
    group.add_argument("--payload", help="arbitrary file embedded as raw bytes")
    p.add_argument("--out", required=True, help="stego image path (.pgm/.ppm/.pnm/.png)")
    _add_key_args(p)
    _add_mode_args(p)

    p = sub.add_parser("extract", help="recover the hidden payload")
    p.add_argument("--stego", required=True)
    p.add_argument("--out", required=True)
    _add_key_args(p)
    _add_mode_args(p)

    p = sub.add_parser("capacity", help="usable bits of a cover image")
    p.add_argument("--cover", required=True)
    _add_mode_args(p)

    p = sub.add_parser("quality", help="PSNR/SSIM/UIQ between two images")
    p.add_argument("--cover", required=True)
    p.add_argument("--stego", required=True)
    p.add_argument("--format", choices=["csv", "json", "markdown"], default="markdown")

    p = sub.add_parser("report", help="embed every secret in every cover and tabulate quality")
    p.add_argument("--covers", required=True, help="directory of cover images")
    p.add_argument("--secrets", required=True, help="directory of secret images")
    p.add_argument("--format", choices=["csv", "json", "markdown"], default="markdown")
    p.add_argument("--out", help="write the table here instead of standard output")
    _add_key_args(p)
    _add_mode_args(p)
    return parser


def resolve_seed(args, environ=os.environ) -> int:
    if args.seed is not None and args.key is not None:
        raise UsageError("give either --seed or --key, not both")
    if args.key is not None:
        return derive_seed(args.key)
    text = args.seed if args.seed is not None else environ.get("APVD_SEED")
    if text is None:
        raise UsageError("a --seed, --key or APVD_SEED is required")
    try:
        return parse_seed(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _table(args) -> RangeTable:
    try:
        return get_table(args.table)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _mode_kwargs(args):
    if not 1 <= args.k_lsb <= 4:
        raise UsageError("--k-lsb must be between 1 and 4")
    return {"mode": EmbedMode(args.mode), "table": _table(args), "k_lsb": args.k_lsb}


def _load_payload(args):
    if args.secret is not None:
        return read_image(args.secret)
    return Path(args.payload).read_bytes()


def cmd_embed(args, out=None) -> int:
    out = out or sys.stdout
    seed = resolve_seed(args)
    kw = _mode_kwargs(args)
    cover = read_image(args.cover)
    framed = frame_payload(_load_payload(args))
    available = capacity(cover, **kw)
    stego = embed(cover, framed, StegoKey(seed), **kw)
    write_image(stego, args.out)
    report = metrics.quality_report(cover, stego)
    print(f"seed: 0x{seed:016X}", file=out)
    print(
        f"embedded {len(framed)} bits ({len(framed) - HEADER_BITS} payload + {HEADER_BITS} header) "
        f"of {available} available ({100 * len(framed) / available:.2f}% used)",
        file=out,
    )
    print(
        f"psnr={metrics.format_psnr(report.psnr)} ssim={report.ssim:.6f} uiq={report.uiq:.6f}",
        file=out,
    )
    return EXIT_OK


def _write_recovered(payload, path: Path):
    if isinstance(payload, ImageBuffer):
        if path.suffix.lower() not in IMAGE_SUFFIXES:
            path = path.with_suffix(".pgm" if payload.channels == 1 else ".ppm")
        write_image(payload, path)
    else:
        path.write_bytes(payload)
    return path


def cmd_extract(args, out=None) -> int:
    out = out or sys.stdout
    seed = resolve_seed(args)
    kw = _mode_kwargs(args)
    stego = read_image(args.stego)
    bits = extract(stego, StegoKey(seed), **kw)
    payload = parse_payload(bits)
    path = _write_recovered(payload, Path(args.out))
    kind = repr(payload) if isinstance(payload, ImageBuffer) else f"{len(payload)} bytes"
    print(f"seed: 0x{seed:016X}", file=out)
    print(f"recovered {kind} ({len(bits) - HEADER_BITS} payload bits) -> {path}", file=out)
    return EXIT_OK


def capacity_summary(cover: ImageBuffer, table: RangeTable) -> dict:
    k = slot_capacities(cover, table)
    usable = k > 0
    w = 2 * (cover.width // 2)
    first = cover.samples[:, :, 0:w:2].ravel().astype(np.int32)
    second = cover.samples[:, :, 1:w:2].ravel().astype(np.int32)
    entry = table.entry_indices(np.abs(second - first))
    histogram = []
    for i, e in enumerate(table.entries):
        hit = usable & (entry == i)
        histogram.append((e.lower, e.upper, e.capacity_bits, int(hit.sum()), int(k[hit].sum())))
    return {
        "total_bits": int(k.sum()),
        "pairs": slot_count(cover),
        "usable_pairs": int(usable.sum()),
        "skipped_pairs": int((~usable).sum()),
        "histogram": histogram,
    }


def cmd_capacity(args, out=None) -> int:
    out = out or sys.stdout
    kw = _mode_kwargs(args)
    cover = read_image(args.cover)
    if kw["mode"] is EmbedMode.LSB:
        total = capacity(cover, **kw)
        print(f"total usable bits: {total} ({cover.samples.size} samples x {args.k_lsb})", file=out)
        print(f"payload bits after header: {max(total - HEADER_BITS, 0)}", file=out)
        return EXIT_OK
    s = capacity_summary(cover, kw["table"])
    print(f"total usable bits: {s['total_bits']}", file=out)
    print(f"payload bits after header: {max(s['total_bits'] - HEADER_BITS, 0)}", file=out)
    print(f"pairs: {s['pairs']}  usable: {s['usable_pairs']}  skipped: {s['skipped_pairs']}", file=out)
    print("range        k  usable_pairs  bits", file=out)
    for lo, hi, bits, count, total in s["histogram"]:
        print(f"[{lo:3d},{hi:3d}]  {bits}  {count:12d}  {total}", file=out)
    return EXIT_OK


def _render(rows, fmt, extra=()):
    if fmt == "csv":
        return metrics.reports_to_csv(rows, extra)
    if fmt == "json":
        return metrics.reports_to_json(rows)
    return metrics.reports_to_markdown(rows, extra)


def cmd_quality(args, out=None) -> int:
    out = out or sys.stdout
    x = read_image(args.cover)
    y = read_image(args.stego)
    report = metrics.quality_report(x, y, cover=Path(args.cover).name, secret="")
    out.write(_render([report], args.format, extra=("mse",)))
    return EXIT_OK


def _images_in(directory) -> list[Path]:
    d = Path(directory)
    if not d.is_dir():
        raise FileNotFoundError(f"not a directory: {d}")
    return sorted(p for p in d.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)


def report_rows(covers, secrets, seed: int, mode, table, k_lsb) -> list[dict]:
    """One row per (cover, secret) pair with different names, sorted."""
    rows = []
    for cover_path in covers:
        cover = resize_nearest(read_image(cover_path), COVER_SIZE, COVER_SIZE)
        for secret_path in secrets:
            if secret_path.stem == cover_path.stem:
                continue
            row = {"cover": cover_path.stem, "secret": secret_path.stem}
            try:
                secret = resize_nearest(read_image(secret_path), SECRET_SIZE, SECRET_SIZE)
                framed = frame_payload(secret)
                stego = embed(cover, framed, seed, mode=mode, table=table, k_lsb=k_lsb)
                q = metrics.quality_report(cover, stego)
                recovered = parse_payload(extract(stego, seed, mode=mode, table=table, k_lsb=k_lsb))
                row.update(psnr=q.psnr, ssim=q.ssim, uiq=q.uiq, mse=q.mse, recovered=recovered == secret)
                row["status"] = "ok" if row["recovered"] else "mismatch"
            except StegoError as exc:
                row.update(recovered=False, status=type(exc).__name__)
            rows.append(row)
    return rows


def cmd_report(args, out=None) -> int:
    out = out or sys.stdout
    seed = resolve_seed(args)
    kw = _mode_kwargs(args)
    rows = report_rows(_images_in(args.covers), _images_in(args.secrets), seed, **kw)
    text = _render(rows, args.format, extra=("recovered", "status"))
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    print(f"seed: 0x{seed:016X}; {len(rows)} pairs", file=sys.stderr)
    return EXIT_OK if rows and all(r["recovered"] for r in rows) else EXIT_REPORT_FAILED


COMMANDS = {
    "embed": cmd_embed,
    "extract": cmd_extract,
    "capacity": cmd_capacity,
    "quality": cmd_quality,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"apvdsteg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityExceeded as exc:
        print(f"apvdsteg: capacity exceeded: needed {exc.needed} bits, available {exc.available}", file=sys.stderr)
        return EXIT_CAPACITY
    except InvalidHeader as exc:
        print(f"apvdsteg: no payload found ({exc}); check the key, mode and range table", file=sys.stderr)
        return EXIT_INVALID_HEADER
    except (Truncated, MalformedPayload) as exc:
        print(f"apvdsteg: corrupt payload: {exc}", file=sys.stderr)
        return EXIT_INVALID_HEADER
    except _IO_ERRORS as exc:
        print(f"apvdsteg: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
