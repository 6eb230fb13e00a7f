"""Precomputed banks of color-noise patterns and the ``.cnbk`` file format.

Layout (all little-endian)::

    magic        4s   b"CNBK"
    version      u16
    color kind   u8   index into COLORS
    reserved     u8
    sigma        f64  (0.0 when unused)
    sigma1       f64
    sigma2       f64
    red_iter     u32  (0 when unused)
    count        u32
    side         u32
    seed_base    u64
    payload      count * side * side float32, pattern-major, row-major
"""

from __future__ import annotations

import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    BadMagicError,
    InvalidParameterError,
    KernelTooLargeError,
    LengthMismatchError,
    TruncatedPayloadError,
    VersionMismatchError,
)
from .noise import COLORS, ColorSpec, color_values, normalize_values

MAGIC = b"CNBK"
FORMAT_VERSION = 1
HEADER = struct.Struct("<4sHBB3dIIIQ")
HEADER_SIZE = HEADER.size

PROFILES = {
    "full": {"count": 3072, "side": 256},
    "mini": {"count": 64, "side": 64},
}

_CHUNK = 32


@dataclass
class NoiseBank:
    """``count`` square float32 patterns in [0, 1], pattern ``i`` seeded by ``seed_base + i``."""

    spec: ColorSpec
    patterns: np.ndarray
    seed_base: int = 0

    @property
    def count(self) -> int:
        return self.patterns.shape[0]

    @property
    def side(self) -> int:
        return self.patterns.shape[1]

    @property
    def payload_nbytes(self) -> int:
        return self.patterns.nbytes


def payload_nbytes(count: int, side: int) -> int:
    return count * side * side * 4


def file_nbytes(count: int, side: int) -> int:
    return HEADER_SIZE + payload_nbytes(count, side)


def _white_stack(seeds, side):
    return np.stack([np.random.default_rng(s).random((side, side)) for s in seeds])


def _check_positive_int(value, name):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise InvalidParameterError(f"{name} must be a positive integer, got {value!r}")


def build_bank(spec: ColorSpec, count: int, side: int, seed_base: int = 0, threads: int = 1) -> NoiseBank:
    """Synthesize ``count`` independent ``side x side`` patterns of ``spec.kind``.

    Patterns are computed in float64 and stored as float32. The result does
    not depend on ``threads``.
    """
    _check_positive_int(count, "count")
    _check_positive_int(side, "side")
    _check_positive_int(threads, "threads")
    if not 0 <= seed_base <= 2**64 - count:
        raise InvalidParameterError(f"seed_base must fit in u64 for {count} patterns, got {seed_base}")
    count, side = int(count), int(side)
    if side < 2 * spec.max_radius + 1:
        raise KernelTooLargeError(
            f"side {side} too small for kernel radius {spec.max_radius}; need >= {2 * spec.max_radius + 1}"
        )
    patterns = np.empty((count, side, side), dtype=np.float32)

    def work(start):
        stop = min(start + _CHUNK, count)
        white = _white_stack(range(seed_base + start, seed_base + stop), side)
        if spec.kind == "white":
            patterns[start:stop] = normalize_values(white)
        else:
            patterns[start:stop] = color_values(white, spec)

    starts = range(0, count, _CHUNK)
    if threads == 1:
        for s in starts:
            work(s)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, starts))
    return NoiseBank(spec, patterns, int(seed_base))


def _header_bytes(bank: NoiseBank) -> bytes:
    spec = bank.spec
    return HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        COLORS.index(spec.kind),
        0,
        spec.sigma or 0.0,
        spec.sigma1 or 0.0,
        spec.sigma2 or 0.0,
        spec.red_iterations or 0,
        bank.count,
        bank.side,
        bank.seed_base,
    )


def save_bank(bank: NoiseBank, path) -> None:
    data = np.ascontiguousarray(bank.patterns, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(_header_bytes(bank))
        fh.write(data.tobytes())


def read_header(fh) -> dict:
    raw = fh.read(HEADER_SIZE)
    if len(raw) < 4 or raw[:4] != MAGIC:
        raise BadMagicError(f"not a noise bank file (magic {raw[:4]!r})")
    if len(raw) < HEADER_SIZE:
        raise TruncatedPayloadError(f"header is {len(raw)} bytes, expected {HEADER_SIZE}")
    _, version, kind, _, sigma, sigma1, sigma2, red_iter, count, side, seed_base = HEADER.unpack(raw)
    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"format version {version}, this reader supports {FORMAT_VERSION}")
    if kind >= len(COLORS):
        raise BadMagicError(f"unknown color code {kind}")
    return {
        "kind": COLORS[kind],
        "sigma": sigma or None,
        "sigma1": sigma1 or None,
        "sigma2": sigma2 or None,
        "red_iterations": red_iter or None,
        "count": count,
        "side": side,
        "seed_base": seed_base,
    }


def load_bank(path) -> NoiseBank:
    """Read a ``.cnbk`` file, validating magic, version and payload length."""
    size = os.path.getsize(path)
    with open(path, "rb") as fh:
        h = read_header(fh)
        payload = size - HEADER_SIZE
        expected = payload_nbytes(h["count"], h["side"])
        pattern_bytes = payload_nbytes(1, h["side"])
        if payload != expected:
            if pattern_bytes == 0 or payload % pattern_bytes:
                raise TruncatedPayloadError(
                    f"payload is {payload} bytes, not a whole number of {h['side']}x{h['side']} patterns"
                )
            raise LengthMismatchError(
                f"header declares {h['count']} patterns but payload holds {payload // pattern_bytes}"
            )
        data = np.frombuffer(fh.read(payload), dtype="<f4")
    spec = ColorSpec(h["kind"], h["sigma"], h["sigma1"], h["sigma2"], h["red_iterations"])
    patterns = data.reshape(h["count"], h["side"], h["side"]).astype(np.float32, copy=False)
    return NoiseBank(spec, patterns, h["seed_base"])
