#!/usr/bin/env python3
"""
位图文件与报告输出

Bitmap file layout ("CSLB"): 16-byte header = magic, uint32 version,
uint64 N (all little-endian), then ⌈(N+1)/64⌉ little-endian 64-bit words,
bit i of word ⌊i/64⌋ at position i mod 64.
"""

import csv
import io
import json
import struct
from pathlib import Path
from typing import Any, Dict, List

import filelock

from cantorsums.exceptions import InvalidParameter
from cantorsums.intset import IntSetBitmap
from cantorsums.log import logger
from cantorsums.schemas import OutputFormat, Report

BITMAP_MAGIC = b"CSLB"
BITMAP_VERSION = 1
_HEADER = struct.Struct("<4sIQ")


def bitmap_to_bytes(bitmap: IntSetBitmap) -> bytes:
    words = (bitmap.bound + 64) // 64
    header = _HEADER.pack(BITMAP_MAGIC, BITMAP_VERSION, bitmap.bound)
    return header + bitmap.mask.to_bytes(words * 8, "little")


def bitmap_from_bytes(raw: bytes) -> IntSetBitmap:
    if len(raw) < _HEADER.size:
        raise InvalidParameter("bitmap file is shorter than its header")
    magic, version, bound = _HEADER.unpack_from(raw)
    if magic != BITMAP_MAGIC:
        raise InvalidParameter(f"bad bitmap magic {magic!r}")
    if version != BITMAP_VERSION:
        raise InvalidParameter(f"unsupported bitmap version {version}")
    words = (bound + 64) // 64
    body = raw[_HEADER.size :]
    if len(body) != words * 8:
        raise InvalidParameter(f"bitmap body has {len(body)} bytes, expected {words * 8}")
    return IntSetBitmap(bound, int.from_bytes(body, "little"))


def _locked_write(path: Path, payload: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    lock = filelock.FileLock(str(path) + ".lock")
    with lock:
        with open(path, "wb") as f:
            f.write(payload)


def save_bitmap(bitmap: IntSetBitmap, path: Path | str):
    path = Path(path)
    _locked_write(path, bitmap_to_bytes(bitmap))
    logger.info(f"bitmap N={bitmap.bound} written to {path}")


def load_bitmap(path: Path | str) -> IntSetBitmap:
    path = Path(path)
    lock = filelock.FileLock(str(path) + ".lock")
    with lock:
        with open(path, "rb") as f:
            return bitmap_from_bytes(f.read())


def _flatten(prefix: str, value: Any, row: Dict[str, Any]):
    if isinstance(value, dict):
        for key, item in value.items():
            _flatten(f"{prefix}.{key}" if prefix else key, item, row)
    elif isinstance(value, list):
        row[prefix] = ";".join(
            json.dumps(item, separators=(",", ":")) if isinstance(item, (dict, list)) else str(item)
            for item in value
        )
    else:
        row[prefix] = "" if value is None else value


# CSV 列顺序固定
CSV_LEADING_COLUMNS = ["theorem", "pass", "counterexample", "witnesses_sampled", "timing_ms"]


def render_report(report: Report, fmt: OutputFormat) -> str:
    data = report.to_json_dict()
    if fmt is OutputFormat.JSON:
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    if fmt is OutputFormat.CSV:
        row: Dict[str, Any] = {}
        _flatten("", data, row)
        rest = sorted(key for key in row if key not in CSV_LEADING_COLUMNS)
        columns = [c for c in CSV_LEADING_COLUMNS if c in row] + rest
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerow(row)
        return buffer.getvalue()
    return render_text(report)


def render_text(report: Report) -> str:
    """Human-oriented one-liners; ``details.text`` wins when a command sets it."""
    text = report.details.get("text")
    if text is not None:
        return f"{text}\n"
    status = "PASS" if report.passed else "FAIL"
    lines: List[str] = [f"{report.theorem}: {status}"]
    for key, value in sorted(report.params.items()):
        lines.append(f"  {key} = {value}")
    if report.counterexample is not None:
        lines.append(f"  counterexample: {report.counterexample}")
    return "\n".join(lines) + "\n"


def write_report(report: Report, fmt: OutputFormat, output: str | None, stream) -> None:
    rendered = render_report(report, fmt)
    if output:
        _locked_write(Path(output), rendered.encode("utf-8"))
        logger.info(f"report written to {output}")
    else:
        stream.write(rendered)


def load_json(path: Path | str) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)
