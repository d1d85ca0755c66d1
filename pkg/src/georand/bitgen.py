"""Seeded point sampling and mean-area thresholding of geometric structures.

A triangulation (or clipped Voronoi diagram) of seeded random points is
reduced to a bit string: each region contributes 1 when its area exceeds the
mean area of all regions, else 0.  Delaunay mode emits one bit per triangle
in canonical triangle order (2n-k-2 bits for n points with k hull vertices);
Voronoi mode emits one bit per site in site order (exactly n bits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .geometry import Point2, Rect, delaunay, polygon_area, voronoi_cells

__all__ = [
    "RngState",
    "BitSequence",
    "DEFAULT_BOUNDS",
    "rng_next",
    "sample_points",
    "bits_from_areas",
    "generate_sequence",
    "write_sequence_file",
    "read_sequence_file",
]

DEFAULT_BOUNDS = Rect(0.0, 0.0, 20.0, 20.0)

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MAX_REDRAWS = 1000


@dataclass(frozen=True)
class RngState:
    """SplitMix64 generator state (a single 64-bit integer)."""

    state: int

    def __post_init__(self) -> None:
        if not 0 <= self.state <= _MASK64:
            raise ValueError("state must fit in 64 bits")


def rng_next(state: RngState) -> tuple[RngState, int]:
    """Advance a SplitMix64 state and return (new state, 64-bit output)."""
    s = (state.state + _GOLDEN) & _MASK64
    z = s
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return RngState(s), z ^ (z >> 31)


def splitmix_outputs(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs ``start .. start+count-1`` of the SplitMix64 stream for a seed.

    The state advance is a plain 64-bit addition, so any window of the stream
    can be produced directly without stepping through predecessors.
    """
    with np.errstate(over="ignore"):
        s = np.uint64(seed & _MASK64) + np.uint64(_GOLDEN) * (
            np.arange(start + 1, start + count + 1, dtype=np.uint64)
        )
        z = (s ^ (s >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))


@dataclass
class BitSequence:
    """An ordered 0/1 sequence plus the provenance of its generation."""

    bits: list[int]
    mode: str | None = None
    seed: int | None = None
    n_points: int | None = None
    hull_k: int | None = None

    def __post_init__(self) -> None:
        if len(self.bits) == 0:
            raise ValueError("bit sequence must be nonempty")
        bad = set(self.bits) - {0, 1}
        if bad:
            raise ValueError(f"bits must be 0 or 1, found {sorted(bad)}")

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def ones(self) -> int:
        return sum(self.bits)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.bits, dtype=np.uint8)


def _u64_to_unit(v: int) -> float:
    return float(v) / 2.0 ** 64


def sample_points(seed: int, n: int, bounds: Rect = DEFAULT_BOUNDS) -> list[Point2]:
    """Draw n seeded points strictly inside the working rectangle.

    Consecutive SplitMix64 outputs are mapped to [0, 1) as value / 2**64, a
    pair per point (x first).  A candidate that repeats an accepted point or
    touches the boundary is redrawn from the stream; more than 1000 redraws
    aborts.  The result is a pure function of (seed, n, bounds).
    """
    if n <= 0:
        raise ValueError(f"need at least one point, got n={n}")
    w, h = bounds.width, bounds.height

    vals = splitmix_outputs(seed, 0, 2 * n)
    u = vals.astype(np.float64) / 2.0 ** 64
    xs = bounds.xmin + u[0::2] * w
    ys = bounds.ymin + u[1::2] * h
    inside = (
        (xs > bounds.xmin) & (xs < bounds.xmax) & (ys > bounds.ymin) & (ys < bounds.ymax)
    )
    pts = list(zip(xs.tolist(), ys.tolist()))
    if bool(inside.all()) and len(set(pts)) == n:
        return [Point2(x, y) for x, y in pts]

    # rare path: replay sequentially with the documented redraw rule
    out: list[Point2] = []
    taken: set[tuple[float, float]] = set()
    state = RngState(seed & _MASK64)
    redraws = 0
    while len(out) < n:
        state, vx = rng_next(state)
        state, vy = rng_next(state)
        x = bounds.xmin + _u64_to_unit(vx) * w
        y = bounds.ymin + _u64_to_unit(vy) * h
        if bounds.contains_strict((x, y)) and (x, y) not in taken:
            out.append(Point2(x, y))
            taken.add((x, y))
        else:
            redraws += 1
            if redraws > _MAX_REDRAWS:
                raise ValueError(
                    f"exceeded {_MAX_REDRAWS} redraws sampling {n} points in {bounds}"
                )
    return out


def bits_from_areas(areas: Sequence[float] | np.ndarray, mode: str | None = None,
                    seed: int | None = None, n_points: int | None = None,
                    hull_k: int | None = None) -> BitSequence:
    """Threshold areas against their arithmetic mean: above 1, otherwise 0.

    An area exactly equal to the mean yields 0, so a tie is never a 1.
    Order is preserved.
    """
    arr = np.asarray(areas, dtype=float)
    if arr.size == 0:
        raise ValueError("cannot threshold an empty area list")
    mean = float(arr.mean())
    bits = (arr > mean).astype(int).tolist()
    return BitSequence(bits, mode=mode, seed=seed, n_points=n_points, hull_k=hull_k)


def generate_sequence(
    seed: int, n: int, mode: str, bounds: Rect = DEFAULT_BOUNDS
) -> BitSequence:
    """Sample n points and extract the area-threshold bit sequence.

    ``mode="delaunay"`` thresholds triangle areas in canonical order and
    yields 2n-k-2 bits; ``mode="voronoi"`` thresholds clipped cell areas in
    site order and yields exactly n bits.
    """
    if mode == "delaunay":
        if n < 3:
            raise ValueError("delaunay mode needs n >= 3")
        pts = sample_points(seed, n, bounds)
        tri = delaunay(pts)
        return bits_from_areas(
            tri.triangle_areas(), mode=mode, seed=seed, n_points=n,
            hull_k=len(tri.hull),
        )
    if mode == "voronoi":
        if n < 1:
            raise ValueError("voronoi mode needs n >= 1")
        pts = sample_points(seed, n, bounds)
        cells = voronoi_cells(pts, bounds)
        areas = [polygon_area(c.vertices) for c in cells]
        return bits_from_areas(areas, mode=mode, seed=seed, n_points=n)
    raise ValueError(f"unknown mode {mode!r}; expected 'delaunay' or 'voronoi'")


def write_sequence_file(
    path: str | Path,
    seq: BitSequence,
    bounds: Rect | None = None,
    sidecar: bool = True,
) -> None:
    """Write a sequence as one line of '0'/'1' characters plus, by default,
    a ``<path>.meta`` sidecar of key=value provenance lines."""
    path = Path(path)
    path.write_text("".join(str(b) for b in seq.bits) + "\n", encoding="ascii")
    if not sidecar:
        return
    lines = []
    if seq.mode is not None:
        lines.append(f"mode={seq.mode}")
    if seq.seed is not None:
        lines.append(f"seed={seq.seed}")
    if seq.n_points is not None:
        lines.append(f"n={seq.n_points}")
    if bounds is not None:
        lines.append(f"bounds={bounds.xmin},{bounds.ymin},{bounds.xmax},{bounds.ymax}")
    if seq.hull_k is not None:
        lines.append(f"hull_k={seq.hull_k}")
    Path(str(path) + ".meta").write_text("\n".join(lines) + "\n", encoding="ascii")


def read_sequence_file(path: str | Path) -> BitSequence:
    """Read a sequence file, picking up the sidecar's provenance if present."""
    path = Path(path)
    text = path.read_text(encoding="ascii").strip()
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"{path}: expected a single line of 0/1 characters")
    meta: dict[str, str] = {}
    sidecar = Path(str(path) + ".meta")
    if sidecar.exists():
        for line in sidecar.read_text(encoding="ascii").splitlines():
            line = line.strip()
            if line and "=" in line:
                key, _, value = line.partition("=")
                meta[key] = value
    return BitSequence(
        [int(ch) for ch in text],
        mode=meta.get("mode"),
        seed=int(meta["seed"]) if "seed" in meta else None,
        n_points=int(meta["n"]) if "n" in meta else None,
        hull_k=int(meta["hull_k"]) if "hull_k" in meta else None,
    )
