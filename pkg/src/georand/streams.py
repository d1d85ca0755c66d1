"""Word-stream adapters that feed the statistical test battery.

Every test consumes 32-bit words.  Bit-based generators are adapted by
packing bits little-endian, 32 per word; uniforms in [0, 1) are word / 2**32
and byte streams are the words' little-endian bytes.  A finite source that
runs dry raises InsufficientDataError naming the shortfall.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator

import numpy as np

from .baselines import LfsrSpec, d_sequence, lfsr_sequence
from .bitgen import DEFAULT_BOUNDS, BitSequence, Rect, generate_sequence, splitmix_outputs

__all__ = [
    "InsufficientDataError",
    "BitWordStream",
    "SplitMixStream",
    "ConstantStream",
    "sequence_stream",
    "geometric_stream",
    "dsequence_stream",
    "lfsr_stream",
]


class InsufficientDataError(ValueError):
    """A finite data source could not supply the amount a test requires."""

    def __init__(self, message: str, required_bits: int | None = None,
                 available_bits: int | None = None):
        super().__init__(message)
        self.required_bits = required_bits
        self.available_bits = available_bits


class _WordOps:
    """Shared derivations from a words() primitive."""

    def uniforms(self, count: int) -> np.ndarray:
        return self.words(count).astype(np.float64) / 2.0 ** 32

    def bytes(self, count: int) -> np.ndarray:
        nwords = -(-count // 4)
        w = np.ascontiguousarray(self.words(nwords), dtype="<u4")
        return np.frombuffer(w.tobytes(), dtype=np.uint8)[:count]


class BitWordStream(_WordOps):
    """Packs a stream of bit chunks into 32-bit words, little-endian."""

    def __init__(self, chunks: Iterable[np.ndarray], description: dict | None = None):
        self._chunks: Iterator[np.ndarray] = iter(chunks)
        self._buf: list[np.ndarray] = []
        self._buffered = 0
        self._served_bits = 0
        self._description = dict(description or {})

    def _take_bits(self, nbits: int) -> np.ndarray:
        while self._buffered < nbits:
            try:
                chunk = np.asarray(next(self._chunks), dtype=np.uint8)
            except StopIteration:
                raise InsufficientDataError(
                    f"bit stream exhausted after {self._served_bits + self._buffered}"
                    f" bits; {self._served_bits + nbits} were required",
                    required_bits=self._served_bits + nbits,
                    available_bits=self._served_bits + self._buffered,
                ) from None
            if chunk.size:
                self._buf.append(chunk)
                self._buffered += chunk.size
        flat = self._buf[0] if len(self._buf) == 1 else np.concatenate(self._buf)
        out, rest = flat[:nbits], flat[nbits:]
        self._buf = [rest] if rest.size else []
        self._buffered = rest.size
        self._served_bits += nbits
        return out

    def words(self, count: int) -> np.ndarray:
        bits = self._take_bits(32 * count)
        return np.packbits(bits, bitorder="little").view("<u4")

    def describe(self) -> dict:
        return dict(self._description)


class SplitMixStream(_WordOps):
    """Reference SplitMix64 source; 64-bit outputs split low word first."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._pos = 0
        self._carry: np.ndarray | None = None

    def words(self, count: int) -> np.ndarray:
        parts = []
        have = 0
        if self._carry is not None:
            parts.append(self._carry)
            have = self._carry.size
            self._carry = None
        if have < count:
            nout = -(-(count - have) // 2)
            outs = splitmix_outputs(self.seed, self._pos, nout).astype("<u8")
            self._pos += nout
            parts.append(outs.view("<u4"))
        w = parts[0] if len(parts) == 1 else np.concatenate(parts)
        if w.size > count:
            self._carry = w[count:]
            w = w[:count]
        return w

    def describe(self) -> dict:
        return {"source": "splitmix", "seed": self.seed}


class ConstantStream(_WordOps):
    """Degenerate source: every uniform equals the given value."""

    def __init__(self, value: float):
        if not 0.0 <= value < 1.0:
            raise ValueError(f"constant must lie in [0, 1), got {value}")
        self.value = value
        self._word = np.uint32(int(value * 2.0 ** 32))

    def words(self, count: int) -> np.ndarray:
        return np.full(count, self._word, dtype="<u4")

    def describe(self) -> dict:
        return {"source": "constant", "value": self.value}


def sequence_stream(seq: BitSequence) -> BitWordStream:
    """Finite stream over one bit sequence."""
    desc = {"source": "sequence", "bits": len(seq)}
    if seq.mode:
        desc["mode"] = seq.mode
    return BitWordStream(iter([seq.to_array()]), desc)


def geometric_stream(
    seed: int,
    n_points: int = 1000,
    mode: str = "delaunay",
    bounds: Rect = DEFAULT_BOUNDS,
) -> BitWordStream:
    """Unbounded geometric bit stream: sequences for seed, seed+1, ...
    concatenated.  The description records the seed range consumed so far."""
    desc = {
        "source": f"{mode}-bits",
        "seed_start": seed,
        "seeds_used": 0,
        "n_points": n_points,
    }

    def chunks():
        s = seed
        while True:
            yield generate_sequence(s, n_points, mode, bounds).to_array()
            s += 1
            desc["seeds_used"] = s - seed

    return BitWordStream(chunks(), desc)


def dsequence_stream(p: int, block: int = 8192) -> BitWordStream:
    """Unbounded periodic d-sequence bit stream for an odd prime p."""

    def chunks():
        offset = 0
        while True:
            seq = d_sequence(p, offset + block)
            yield np.asarray(seq.bits[offset:], dtype=np.uint8)
            offset += block

    return BitWordStream(chunks(), {"source": "dsequence", "p": p})


def lfsr_stream(spec: LfsrSpec, block: int = 8192) -> BitWordStream:
    """Unbounded LFSR bit stream."""

    def chunks():
        state_spec = spec
        while True:
            seq = lfsr_sequence(state_spec, block)
            yield seq.to_array()
            # continue from the register state reached at the block boundary;
            # regenerating from scratch each block would repeat the prefix
            bits = seq.bits
            reg = 0
            for i in range(spec.degree):
                reg |= bits_next(bits, i) << i
            raise NotImplementedError

    return BitWordStream(chunks(), {"source": "lfsr", "degree": spec.degree})
