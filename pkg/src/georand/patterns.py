"""Two-dimensional bit patterns and portable bitmap (PBM) serialization.

Sequences are concatenated in argument order and laid out row-major, left to
right then top to bottom.  Bit 1 maps to black, following the portable
bitmap convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bitgen import BitSequence

__all__ = ["Pattern2D", "assemble_pattern", "write_pbm", "read_pbm"]

_MAX_DIM = 1 << 20
_MAX_PIXELS = 1 << 28


@dataclass
class Pattern2D:
    """A width x height raster of bits stored row-major."""

    width: int
    height: int
    bits: list[int]

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"pattern dimensions must be positive, got {self.width}x{self.height}")
        if len(self.bits) != self.width * self.height:
            raise ValueError(
                f"bit count {len(self.bits)} does not fill {self.width}x{self.height}"
                f" = {self.width * self.height} pixels"
            )
        bad = set(self.bits) - {0, 1}
        if bad:
            raise ValueError(f"bits must be 0 or 1, found {sorted(bad)}")

    def to_array(self) -> np.ndarray:
        """Rows-by-columns uint8 view of the raster."""
        return np.asarray(self.bits, dtype=np.uint8).reshape(self.height, self.width)


def _bits_of(seq) -> list[int]:
    if isinstance(seq, BitSequence):
        return list(seq.bits)
    return [int(b) for b in seq]


def assemble_pattern(sequences: Sequence, width: int, height: int) -> Pattern2D:
    """Concatenate bit sequences in order and fill a width x height raster
    row-major.  The combined length must equal width * height exactly."""
    parts = [_bits_of(s) for s in sequences]
    total = sum(len(p) for p in parts)
    expected = width * height
    if total != expected:
        lens = ", ".join(str(len(p)) for p in parts)
        diff = total - expected
        word = "excess" if diff > 0 else "deficit"
        raise ValueError(
            f"sequence lengths ({lens}) sum to {total}, but {width}x{height}"
            f" needs {expected} ({word} of {abs(diff)})"
        )
    bits: list[int] = []
    for p in parts:
        bits.extend(p)
    return Pattern2D(width, height, bits)


def write_pbm(pattern: Pattern2D, variant: str = "p1") -> bytes:
    """Serialize to a portable bitmap: ASCII P1 or packed-binary P4.

    P4 rows are packed most-significant-bit first and padded to whole bytes.
    """
    w, h = pattern.width, pattern.height
    if variant == "p1":
        rows = pattern.to_array()
        body = "\n".join(" ".join(str(int(b)) for b in row) for row in rows)
        return f"P1\n{w} {h}\n{body}\n".encode("ascii")
    if variant == "p4":
        rows = pattern.to_array()
        packed = np.packbits(rows, axis=1, bitorder="big")
        return f"P4\n{w} {h}\n".encode("ascii") + packed.tobytes()
    raise ValueError(f"unknown variant {variant!r}; expected 'p1' or 'p4'")


def _parse_header(data: bytes) -> tuple[bytes, int, int, int]:
    """Return (magic, width, height, offset of first byte after the header).

    Whitespace separates tokens; '#' starts a comment running to end of line.
    """
    tokens: list[bytes] = []
    i = 0
    size = len(data)
    while len(tokens) < 3 and i < size:
        ch = data[i : i + 1]
        if ch.isspace():
            i += 1
        elif ch == b"#":
            while i < size and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
        else:
            j = i
            while j < size and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
                j += 1
            tokens.append(data[i:j])
            i = j
    if len(tokens) < 3:
        raise ValueError("truncated bitmap header")
    magic = tokens[0]
    try:
        w, h = int(tokens[1]), int(tokens[2])
    except ValueError:
        raise ValueError(f"malformed bitmap dimensions {tokens[1]!r} x {tokens[2]!r}") from None
    return magic, w, h, i


def read_pbm(data: bytes) -> Pattern2D:
    """Parse a P1 or P4 portable bitmap; the exact inverse of write_pbm."""
    magic, w, h, i = _parse_header(data)
    if magic not in (b"P1", b"P4"):
        raise ValueError(f"unsupported bitmap format {magic!r}; expected P1 or P4")
    if w < 1 or h < 1 or w > _MAX_DIM or h > _MAX_DIM or w * h > _MAX_PIXELS:
        raise ValueError(f"bitmap dimensions {w}x{h} out of range")

    if magic == b"P1":
        bits: list[int] = []
        size = len(data)
        while i < size:
            ch = data[i : i + 1]
            if ch.isspace():
                i += 1
            elif ch == b"#":
                while i < size and data[i : i + 1] not in (b"\n", b"\r"):
                    i += 1
            elif ch in (b"0", b"1"):
                bits.append(ch == b"1")
                i += 1
            else:
                raise ValueError(f"unexpected byte {ch!r} in P1 raster")
        if len(bits) < w * h:
            raise ValueError(f"truncated P1 raster: {len(bits)} of {w * h} bits")
        if len(bits) > w * h:
            raise ValueError(f"trailing bits in P1 raster: {len(bits)} > {w * h}")
        return Pattern2D(w, h, [int(b) for b in bits])

    # P4: a single whitespace byte terminates the header, then packed rows
    if i >= len(data) or not data[i : i + 1].isspace():
        raise ValueError("malformed P4 header terminator")
    i += 1
    row_bytes = (w + 7) // 8
    payload = data[i:]
    if len(payload) < row_bytes * h:
        raise ValueError(
            f"truncated P4 payload: {len(payload)} of {row_bytes * h} bytes"
        )
    if len(payload) > row_bytes * h:
        raise ValueError(f"trailing data after P4 payload ({len(payload) - row_bytes * h} bytes)")
    raw = np.frombuffer(payload, dtype=np.uint8).reshape(h, row_bytes)
    rows = np.unpackbits(raw, axis=1, bitorder="big")[:, :w]
    return Pattern2D(w, h, rows.reshape(-1).astype(int).tolist())
