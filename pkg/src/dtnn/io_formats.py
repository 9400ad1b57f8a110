"""Bit-exact file formats: TNS3 tensors, MSK3 masks, JSON reports.

Binary layout (all little-endian)::

    bytes 0..3    magic, b"TNS3" or b"MSK3"
    bytes 4..7    u32 version, currently 1
    bytes 8..31   three u64 dims (n1, n2, n3)
    bytes 32..    payload in linear order offset(i,j,k) = i + j*n1 + k*n1*n2;
                  float64 per entry for tensors, one byte in {0,1} for masks

Dictionaries ride on the tensor format as depth-1 tensors of shape
``(n3, d, 1)``.  Reports are JSON with a fixed key set and floats printed
with 17 significant digits so they parse back exactly.
"""

from __future__ import annotations

import json
import math
import struct
from typing import Any

import numpy as np

from .errors import FormatError
from .metrics import MetricsReport
from .solver import IterationRecord
from .tensor3 import as_mask, as_tensor3

MAGIC_TENSOR = b"TNS3"
MAGIC_MASK = b"MSK3"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIQQQ")

REPORT_KEYS = (
    "psnr_mean",
    "ssim_mean",
    "uiqi_mean",
    "sam_mean",
    "rmse",
    "mape",
    "dict_err",
    "iterations",
    "objective_trace",
    "beta_trace",
    "wall_time_s",
    "config",
)


def _pack_header(magic: bytes, dims: tuple[int, int, int]) -> bytes:
    return _HEADER.pack(magic, FORMAT_VERSION, *dims)


def _parse_header(data: bytes, magic: bytes, path: str) -> tuple[int, int, int]:
    if len(data) < _HEADER.size:
        raise FormatError(f"{path}: truncated header, need {_HEADER.size} bytes", offset=len(data))
    got_magic, version, n1, n2, n3 = _HEADER.unpack_from(data)
    if got_magic != magic:
        raise FormatError(f"{path}: bad magic {got_magic!r}, expected {magic!r}", offset=0)
    if version != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported version {version}", offset=4)
    if n1 < 1 or n2 < 1 or n3 < 1:
        raise FormatError(f"{path}: dims must be positive, got ({n1}, {n2}, {n3})", offset=8)
    return int(n1), int(n2), int(n3)


def write_tensor(path: str, t: np.ndarray) -> None:
    t = as_tensor3(t)
    with open(path, "wb") as fh:
        fh.write(_pack_header(MAGIC_TENSOR, t.shape))
        fh.write(np.ascontiguousarray(t.ravel(order="F"), dtype="<f8").tobytes())


def read_tensor(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    n1, n2, n3 = _parse_header(data, MAGIC_TENSOR, path)
    expected = n1 * n2 * n3 * 8
    payload = data[_HEADER.size :]
    if len(payload) != expected:
        raise FormatError(
            f"{path}: payload holds {len(payload)} bytes, expected {expected}",
            offset=_HEADER.size + min(len(payload), expected),
        )
    flat = np.frombuffer(payload, dtype="<f8")
    return flat.astype(np.float64).reshape((n1, n2, n3), order="F")


def write_mask(path: str, mask: np.ndarray) -> None:
    mask = as_mask(mask)
    with open(path, "wb") as fh:
        fh.write(_pack_header(MAGIC_MASK, mask.shape))
        fh.write(np.ascontiguousarray(mask.ravel(order="F")).astype(np.uint8).tobytes())


def read_mask(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    n1, n2, n3 = _parse_header(data, MAGIC_MASK, path)
    expected = n1 * n2 * n3
    payload = data[_HEADER.size :]
    if len(payload) != expected:
        raise FormatError(
            f"{path}: payload holds {len(payload)} bytes, expected {expected}",
            offset=_HEADER.size + min(len(payload), expected),
        )
    flat = np.frombuffer(payload, dtype=np.uint8)
    bad = np.flatnonzero(flat > 1)
    if bad.size:
        raise FormatError(
            f"{path}: mask byte must be 0 or 1, got {flat[bad[0]]}",
            offset=_HEADER.size + int(bad[0]),
        )
    return flat.astype(bool).reshape((n1, n2, n3), order="F")


def write_dictionary(path: str, d_mat: np.ndarray) -> None:
    d_mat = np.asarray(d_mat, dtype=np.float64)
    if d_mat.ndim != 2:
        raise ValueError(f"dictionary must be a matrix, got ndim={d_mat.ndim}")
    write_tensor(path, d_mat[:, :, None])


def read_dictionary(path: str) -> np.ndarray:
    t = read_tensor(path)
    if t.shape[2] != 1:
        raise FormatError(f"{path}: dictionary file must have depth 1, got {t.shape[2]}", offset=24)
    return t[:, :, 0]


def _json_value(v: Any) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if math.isnan(f) or math.isinf(f):
            return "null"
        return format(f, ".17g")
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    if isinstance(v, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {_json_value(val)}" for k, val in v.items())
        return "{" + items + "}"
    raise TypeError(f"cannot serialize {type(v)!r}")


def render_report(
    metrics: MetricsReport | None = None,
    trace: list[IterationRecord] | None = None,
    config: dict | None = None,
) -> str:
    """Render a report as JSON text with the fixed key set ``REPORT_KEYS``."""
    trace = trace or []
    payload: dict[str, Any] = {
        "psnr_mean": metrics.psnr_mean if metrics else None,
        "ssim_mean": metrics.ssim_mean if metrics else None,
        "uiqi_mean": metrics.uiqi_mean if metrics else None,
        "sam_mean": metrics.sam_mean if metrics else None,
        "rmse": metrics.rmse if metrics else None,
        "mape": metrics.mape if metrics else None,
        "dict_err": metrics.dict_err if metrics else None,
        "iterations": len(trace),
        "objective_trace": [rec.objective for rec in trace],
        "beta_trace": [rec.beta for rec in trace],
        "wall_time_s": trace[-1].wall_time_s if trace else None,
        "config": config,
    }
    lines = ",\n".join(f"  {json.dumps(k)}: {_json_value(v)}" for k, v in payload.items())
    return "{\n" + lines + "\n}\n"


def write_report(
    path: str,
    metrics: MetricsReport | None = None,
    trace: list[IterationRecord] | None = None,
    config: dict | None = None,
) -> None:
    text = render_report(metrics=metrics, trace=trace, config=config)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def read_report(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
