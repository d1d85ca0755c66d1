"""Reference generators: binary d-sequences, XOR-combined d-sequences, and
maximal-length linear feedback shift registers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bitgen import BitSequence

__all__ = [
    "LfsrSpec",
    "MAXIMAL_TAPS",
    "d_sequence",
    "d_sequence_bits",
    "d_sequence_period",
    "combined_d_sequence",
    "lfsr_sequence",
    "lfsr_bits",
]

# Maximal-length (primitive) feedback polynomials by degree, given as the
# exponent sets of their nonzero terms above the constant; the +1 term is
# implied.  Verified by the period tests.
MAXIMAL_TAPS: dict[int, tuple[int, ...]] = {
    3: (3, 2),
    4: (4, 3),
    5: (5, 3),
    6: (6, 5),
    7: (7, 6),
    8: (8, 6, 5, 4),
    9: (9, 5),
    10: (10, 7),
    11: (11, 9),
    12: (12, 11, 10, 4),
    13: (13, 12, 11, 8),
    14: (14, 13, 12, 2),
    15: (15, 14),
    16: (16, 15, 13, 4),
}


def _require_odd_prime(p: int) -> None:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd prime, got {p}")
    d = 3
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"p must be an odd prime, got {p} = {d} * {p // d}")
        d += 2


def d_sequence_bits(p: int):
    """Endless iterator of d-sequence bits (2**i mod p) mod 2 for i = 1, 2, ..."""
    _require_odd_prime(p)
    r = 1
    while True:
        r = (2 * r) % p
        yield r & 1


def d_sequence(p: int, length: int) -> BitSequence:
    """Binary d-sequence of the prime reciprocal 1/p.

    Bit i (1-based) is (2**i mod p) mod 2, computed by iterated modular
    doubling.
    """
    if length < 1:
        raise ValueError(f"length must be positive, got {length}")
    gen = d_sequence_bits(p)
    return BitSequence([next(gen) for _ in range(length)], mode="dsequence", seed=p)


def d_sequence_period(p: int) -> int:
    """Multiplicative order of 2 modulo p: the period of the d-sequence."""
    _require_odd_prime(p)
    r = 2 % p
    t = 1
    while r != 1:
        r = (2 * r) % p
        t += 1
    return t


def combined_d_sequence(primes: Sequence[int], length: int) -> BitSequence:
    """Bitwise XOR of the d-sequences of two or more distinct odd primes."""
    primes = list(primes)
    if len(primes) < 2:
        raise ValueError("need at least two primes to combine")
    if len(set(primes)) != len(primes):
        raise ValueError(f"primes must be distinct, got {primes}")
    streams = [d_sequence(p, length).bits for p in primes]
    bits = [0] * length
    for s in streams:
        bits = [a ^ b for a, b in zip(bits, s)]
    return BitSequence(bits, mode="combined")


@dataclass(frozen=True)
class LfsrSpec:
    """Fibonacci LFSR: feedback polynomial exponents (degree included,
    constant term implied) and a nonzero initial register value."""

    degree: int
    taps: tuple[int, ...]
    init: int = 1

    def __post_init__(self) -> None:
        if self.degree < 2:
            raise ValueError(f"degree must be at least 2, got {self.degree}")
        if self.degree not in self.taps:
            raise ValueError(
                f"tap polynomial must have the stated degree {self.degree}, got taps {self.taps}"
            )
        if any(t < 1 or t > self.degree for t in self.taps):
            raise ValueError(f"taps must lie in 1..{self.degree}, got {self.taps}")
        if not 0 < self.init < (1 << self.degree):
            raise ValueError(
                f"init must be a nonzero {self.degree}-bit state, got {self.init:#b}"
            )


def _step(state: int, tapmask: int, degree: int) -> tuple[int, int]:
    out = state & 1
    fb = (state & tapmask).bit_count() & 1
    return (state >> 1) | (fb << (degree - 1)), out


def lfsr_sequence(spec: LfsrSpec, length: int) -> BitSequence:
    """Output stream of a Fibonacci LFSR: each step emits the low bit, then
    shifts in the XOR of the tapped bits."""
    if length < 1:
        raise ValueError(f"length must be positive, got {length}")
    # feedback positions: exponents below the degree, plus the implied +1 term
    tapmask = 1
    for t in spec.taps:
        if t < spec.degree:
            tapmask |= 1 << t
    state = spec.init
    bits = []
    for _ in range(length):
        state, out = _step(state, tapmask, spec.degree)
        bits.append(out)
    return BitSequence(bits, mode="lfsr")
