"""Planar geometry: robust predicates, Delaunay triangulation, convex hulls,
and Voronoi cells clipped to a bounding rectangle.

Predicates run a floating-point fast path guarded by a Shewchuk-style error
bound; anything inside the bound is re-evaluated in exact rational arithmetic,
so every structural decision (orientation, circumcircle membership) is
deterministic even for degenerate inputs such as cocircular quadruples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "Point2",
    "Rect",
    "Triangulation",
    "VoronoiCell",
    "orient2d",
    "in_circumcircle",
    "convex_hull",
    "delaunay",
    "triangle_area",
    "polygon_area",
    "clip_convex_by_halfplane",
    "voronoi_cells",
]

_EPS = 2.0 ** -53
_CCW_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_BOUND = (10.0 + 96.0 * _EPS) * _EPS
# Cavity search margin for triangles built purely from input points: anything
# whose circumcircle test lands within this relative band is re-checked with
# the exact predicate.  Triangles touching a super vertex skip the distance
# shortcut entirely and use the filtered incircle determinant instead.
_CAVITY_MARGIN = 1e-9
# Super-triangle scale factor. Large enough that, for any remotely generic
# input, no true Delaunay circumcircle reaches a super vertex; exact predicate
# fallback keeps the arithmetic correct at this magnitude.
_SUPER_SCALE = 2.0 ** 34


class Point2(NamedTuple):
    """A point in the working plane."""

    x: float
    y: float


@dataclass(frozen=True)
class Rect:
    """Axis-aligned working rectangle; requires xmin < xmax and ymin < ymax."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self) -> None:
        vals = (self.xmin, self.ymin, self.xmax, self.ymax)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("rectangle bounds must be finite")
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError(
                f"degenerate rectangle ({self.xmin},{self.ymin},{self.xmax},{self.ymax})"
            )

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def area(self) -> float:
        return self.width * self.height

    def corners(self) -> list[Point2]:
        """Corner polygon in counterclockwise order starting at (xmin, ymin)."""
        return [
            Point2(self.xmin, self.ymin),
            Point2(self.xmax, self.ymin),
            Point2(self.xmax, self.ymax),
            Point2(self.xmin, self.ymax),
        ]

    def contains_strict(self, p: Sequence[float]) -> bool:
        return self.xmin < p[0] < self.xmax and self.ymin < p[1] < self.ymax


@dataclass
class Triangulation:
    """A Delaunay triangulation of a planar point set.

    Triangles are vertex-index triples in counterclockwise order, rotated so
    the smallest index comes first, and the list is sorted by the ascending
    lexicographic order of each triangle's sorted indices.  This canonical
    ordering is what downstream bit extraction iterates over.
    """

    points: list[Point2]
    triangles: list[tuple[int, int, int]]
    hull: list[int]

    @property
    def n(self) -> int:
        return len(self.points)

    def triangle_areas(self) -> np.ndarray:
        """Areas of all triangles, in canonical triangle order."""
        p = np.asarray(self.points, dtype=float)
        t = np.asarray(self.triangles, dtype=int).reshape(-1, 3)
        a, b, c = p[t[:, 0]], p[t[:, 1]], p[t[:, 2]]
        cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (
            c[:, 0] - a[:, 0]
        )
        return 0.5 * np.abs(cross)


@dataclass
class VoronoiCell:
    """One site's Voronoi region clipped to the working rectangle."""

    site: int
    vertices: list[Point2]

    def area(self) -> float:
        return polygon_area(self.vertices)


def _sign(v) -> int:
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def orient2d(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> int:
    """Sign of the cross product (b-a) x (c-a).

    Returns +1 when a,b,c turn counterclockwise, -1 clockwise, 0 collinear.
    """
    detl = (b[0] - a[0]) * (c[1] - a[1])
    detr = (b[1] - a[1]) * (c[0] - a[0])
    det = detl - detr
    bound = _CCW_BOUND * (abs(detl) + abs(detr))
    if det > bound:
        return 1
    if det < -bound:
        return -1
    return _orient2d_exact(a, b, c)


def _orient2d_exact(a, b, c) -> int:
    ax, ay = Fraction(a[0]), Fraction(a[1])
    bx, by = Fraction(b[0]), Fraction(b[1])
    cx, cy = Fraction(c[0]), Fraction(c[1])
    return _sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def _incircle_det_sign(a, b, c, d) -> int:
    """Sign of the incircle determinant; positive means d is strictly inside
    the circle through a,b,c when (a,b,c) is counterclockwise."""
    adx = a[0] - d[0]
    ady = a[1] - d[1]
    bdx = b[0] - d[0]
    bdy = b[1] - d[1]
    cdx = c[0] - d[0]
    cdy = c[1] - d[1]

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady

    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy

    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = (
        alift * (bdxcdy - cdxbdy)
        + blift * (cdxady - adxcdy)
        + clift * (adxbdy - bdxady)
    )
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    bound = _ICC_BOUND * permanent
    if det > bound:
        return 1
    if det < -bound:
        return -1
    return _incircle_exact(a, b, c, d)


def _incircle_exact(a, b, c, d) -> int:
    ax, ay = Fraction(a[0]) - Fraction(d[0]), Fraction(a[1]) - Fraction(d[1])
    bx, by = Fraction(b[0]) - Fraction(d[0]), Fraction(b[1]) - Fraction(d[1])
    cx, cy = Fraction(c[0]) - Fraction(d[0]), Fraction(c[1]) - Fraction(d[1])
    det = (
        (ax * ax + ay * ay) * (bx * cy - cx * by)
        + (bx * bx + by * by) * (cx * ay - ax * cy)
        + (cx * cx + cy * cy) * (ax * by - bx * ay)
    )
    return _sign(det)


def in_circumcircle(a, b, c, d) -> bool:
    """Whether d lies strictly inside the circumcircle of triangle (a, b, c).

    Points exactly on the circle count as outside.  Raises for collinear
    a,b,c, whose circumcircle is undefined.
    """
    o = orient2d(a, b, c)
    if o == 0:
        raise ValueError("circumcircle undefined: a, b, c are collinear")
    return _incircle_det_sign(a, b, c, d) * o > 0


def triangle_area(a, b, c) -> float:
    """Shoelace area of a triangle (zero when collinear)."""
    return 0.5 * abs(
        (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    )


def polygon_area(vertices: Sequence[Sequence[float]]) -> float:
    """Shoelace area of a simple polygon, independent of orientation."""
    m = len(vertices)
    if m < 3:
        raise ValueError(f"polygon needs at least 3 vertices, got {m}")
    acc = 0.0
    for i in range(m):
        x0, y0 = vertices[i][0], vertices[i][1]
        x1, y1 = vertices[(i + 1) % m][0], vertices[(i + 1) % m][1]
        acc += x0 * y1 - x1 * y0
    return 0.5 * abs(acc)


def convex_hull(points: Sequence[Sequence[float]]) -> list[int]:
    """Indices of the convex hull in counterclockwise order.

    Points lying in the interior of a hull edge are not hull vertices; only
    strict corners are returned.  Raises when fewer than 3 points are given
    or all points are collinear.
    """
    n = len(points)
    if n < 3:
        raise ValueError(f"convex hull needs at least 3 points, got {n}")
    order = sorted(range(n), key=lambda i: (points[i][0], points[i][1], i))

    def build(idx_iter):
        chain: list[int] = []
        for i in idx_iter:
            while len(chain) >= 2 and orient2d(
                points[chain[-2]], points[chain[-1]], points[i]
            ) <= 0:
                chain.pop()
            chain.append(i)
        return chain

    lower = build(order)
    upper = build(reversed(order))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise ValueError("all points are collinear; hull is degenerate")
    return hull


def _circumcircle(pts, ia: int, ib: int, ic: int):
    """Circumcenter and squared radius, relative to vertex a."""
    ax, ay = pts[ia]
    bx = pts[ib][0] - ax
    by = pts[ib][1] - ay
    cx = pts[ic][0] - ax
    cy = pts[ic][1] - ay
    d = 2.0 * (bx * cy - by * cx)
    if d == 0.0:
        raise ValueError("degenerate triangle in triangulation")
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return ax + ux, ay + uy, ux * ux + uy * uy


class _TriStore:
    """Growable triangle arrays used during incremental insertion.

    Triangles containing a super vertex (index >= n) are flagged: their
    circumcircles are so large that the center-distance shortcut loses all
    precision, so the cavity scan tests them with the incircle determinant.
    """

    def __init__(self, cap: int, n: int):
        self.n = n
        self.v = np.empty((cap, 3), dtype=np.int64)
        self.ccx = np.empty(cap, dtype=float)
        self.ccy = np.empty(cap, dtype=float)
        self.r2 = np.empty(cap, dtype=float)
        self.alive = np.zeros(cap, dtype=bool)
        self.sup = np.zeros(cap, dtype=bool)
        self.m = 0

    def push(self, pts, a: int, b: int, c: int) -> None:
        if self.m == len(self.alive):
            grow = len(self.alive) * 2
            self.v = np.resize(self.v, (grow, 3))
            self.ccx = np.resize(self.ccx, grow)
            self.ccy = np.resize(self.ccy, grow)
            self.r2 = np.resize(self.r2, grow)
            alive = np.zeros(grow, dtype=bool)
            alive[: self.m] = self.alive[: self.m]
            self.alive = alive
            sup = np.zeros(grow, dtype=bool)
            sup[: self.m] = self.sup[: self.m]
            self.sup = sup
        i = self.m
        self.v[i] = (a, b, c)
        if a >= self.n or b >= self.n or c >= self.n:
            self.sup[i] = True
            self.ccx[i] = self.ccy[i] = 0.0
            self.r2[i] = -1.0  # never matches the distance shortcut
        else:
            self.ccx[i], self.ccy[i], self.r2[i] = _circumcircle(pts, a, b, c)
        self.alive[i] = True
        self.m += 1


def _validate_point_set(points) -> list[Point2]:
    pts = []
    for p in points:
        x, y = float(p[0]), float(p[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"non-finite coordinate in point ({x}, {y})")
        pts.append(Point2(x, y))
    seen: dict[tuple[float, float], int] = {}
    for i, p in enumerate(pts):
        j = seen.setdefault((p.x, p.y), i)
        if j != i:
            raise ValueError(f"duplicate point at indices {j} and {i}: {p}")
    return pts


def delaunay(points: Sequence[Sequence[float]]) -> Triangulation:
    """Delaunay triangulation by incremental Bowyer-Watson insertion.

    Points are inserted in input order into a super-triangle far outside the
    data; each insertion carves the cavity of triangles whose circumcircle
    strictly contains the new point and re-triangulates its boundary.  On-
    circle ties resolve to "outside", which makes cocircular configurations
    deterministic under the fixed insertion order.

    Raises for fewer than 3 points, duplicate points, or all-collinear input
    (no triangulation exists in that case).
    """
    pts_list = _validate_point_set(points)
    n = len(pts_list)
    if n < 3:
        raise ValueError(f"triangulation needs at least 3 points, got {n}")
    if all(orient2d(pts_list[0], pts_list[1], pts_list[i]) == 0 for i in range(2, n)):
        raise ValueError("all points are collinear; no triangulation exists")

    pts = np.empty((n + 3, 2), dtype=float)
    pts[:n] = pts_list
    xmin, ymin = pts[:n].min(axis=0)
    xmax, ymax = pts[:n].max(axis=0)
    cx, cy = 0.5 * (xmin + xmax), 0.5 * (ymin + ymax)
    big = max(xmax - xmin, ymax - ymin, 1.0) * _SUPER_SCALE
    pts[n] = (cx - 3.0 * big, cy - big)
    pts[n + 1] = (cx + 3.0 * big, cy - big)
    pts[n + 2] = (cx, cy + 3.0 * big)
    ptsf = [(float(x), float(y)) for x, y in pts]

    store = _TriStore(max(64, 8 * n), n)
    store.push(ptsf, n, n + 1, n + 2)

    for p in range(n):
        px, py = ptsf[p]
        m = store.m
        alive = store.alive[:m]

        # data-only triangles: circumcenter distance with a guard band
        dx = store.ccx[:m] - px
        dy = store.ccy[:m] - py
        dist2 = dx * dx + dy * dy
        delta = dist2 - store.r2[:m]
        margin = _CAVITY_MARGIN * (dist2 + store.r2[:m])
        inside = alive & ~store.sup[:m] & (delta < margin)

        bad = [int(t) for t in np.flatnonzero(inside)]
        for i in range(len(bad) - 1, -1, -1):
            t = bad[i]
            if delta[t] > -margin[t]:
                a, b, c = store.v[t]
                if _incircle_det_sign(ptsf[a], ptsf[b], ptsf[c], (px, py)) <= 0:
                    del bad[i]

        # super-adjacent triangles: filtered incircle determinant, batched
        sidx = np.flatnonzero(alive & store.sup[:m])
        if sidx.size:
            tv = store.v[sidx]
            adx = pts[tv[:, 0], 0] - px
            ady = pts[tv[:, 0], 1] - py
            bdx = pts[tv[:, 1], 0] - px
            bdy = pts[tv[:, 1], 1] - py
            cdx = pts[tv[:, 2], 0] - px
            cdy = pts[tv[:, 2], 1] - py
            bdxcdy = bdx * cdy
            cdxbdy = cdx * bdy
            cdxady = cdx * ady
            adxcdy = adx * cdy
            adxbdy = adx * bdy
            bdxady = bdx * ady
            alift = adx * adx + ady * ady
            blift = bdx * bdx + bdy * bdy
            clift = cdx * cdx + cdy * cdy
            det = (
                alift * (bdxcdy - cdxbdy)
                + blift * (cdxady - adxcdy)
                + clift * (adxbdy - bdxady)
            )
            bound = _ICC_BOUND * (
                (np.abs(bdxcdy) + np.abs(cdxbdy)) * alift
                + (np.abs(cdxady) + np.abs(adxcdy)) * blift
                + (np.abs(adxbdy) + np.abs(bdxady)) * clift
            )
            bad.extend(int(t) for t in sidx[det > bound])
            for t in sidx[np.abs(det) <= bound]:
                a, b, c = store.v[t]
                if _incircle_exact(ptsf[a], ptsf[b], ptsf[c], (px, py)) > 0:
                    bad.append(int(t))

        if not bad:
            raise RuntimeError("insertion cavity is empty; inconsistent predicates")

        edges: dict[tuple[int, int], None] = {}
        for t in bad:
            store.alive[t] = False
            a, b, c = store.v[t].tolist()
            for e in ((a, b), (b, c), (c, a)):
                twin = (e[1], e[0])
                if twin in edges:
                    del edges[twin]
                else:
                    edges[e] = None
        for a, b in edges:
            store.push(ptsf, a, b, p)

    tris = []
    for t in range(store.m):
        if not store.alive[t]:
            continue
        a, b, c = (int(v) for v in store.v[t])
        if a >= n or b >= n or c >= n:
            continue
        # rotate the CCW triple so the smallest index leads
        if b < a and b < c:
            a, b, c = b, c, a
        elif c < a and c < b:
            a, b, c = c, a, b
        tris.append((a, b, c))
    tris.sort(key=lambda t: tuple(sorted(t)))

    return Triangulation(points=pts_list, triangles=tris, hull=convex_hull(pts_list))


def clip_convex_by_halfplane(
    poly: Sequence[Sequence[float]],
    halfplane: tuple[Sequence[float], Sequence[float]],
) -> list[Point2]:
    """Intersect a convex CCW polygon with a closed half-plane.

    The half-plane is given as (point on boundary, inward normal); vertices v
    with dot(v - point, normal) >= 0 are kept.  Returns the clipped CCW
    polygon, or an empty list when the intersection has no interior.
    """
    (px, py), (nx, ny) = halfplane
    m = len(poly)
    if m == 0:
        return []
    d = [(v[0] - px) * nx + (v[1] - py) * ny for v in poly]
    out: list[Point2] = []
    for i in range(m):
        j = (i + 1) % m
        di, dj = d[i], d[j]
        if di >= 0.0:
            out.append(Point2(poly[i][0], poly[i][1]))
        if (di > 0.0 > dj) or (dj > 0.0 > di):
            t = di / (di - dj)
            out.append(
                Point2(
                    poly[i][0] + t * (poly[j][0] - poly[i][0]),
                    poly[i][1] + t * (poly[j][1] - poly[i][1]),
                )
            )
    # drop exact consecutive duplicates produced by vertices on the boundary
    dedup: list[Point2] = []
    for v in out:
        if not dedup or (v.x, v.y) != (dedup[-1].x, dedup[-1].y):
            dedup.append(v)
    if len(dedup) > 1 and (dedup[0].x, dedup[0].y) == (dedup[-1].x, dedup[-1].y):
        dedup.pop()
    if len(dedup) < 3:
        return []
    return dedup


def _bisector_halfplane(site: Point2, other: Point2):
    mid = Point2(0.5 * (site.x + other.x), 0.5 * (site.y + other.y))
    normal = (site.x - other.x, site.y - other.y)
    return mid, normal


def voronoi_cells(points: Sequence[Sequence[float]], bounds: Rect) -> list[VoronoiCell]:
    """Voronoi cells of the given sites, clipped to the working rectangle.

    Each cell is the intersection of the rectangle with the bisector
    half-planes toward its site.  For three or more sites in general position
    only the site's Delaunay neighbors are clipped against (their bisectors
    already determine the cell exactly); collinear site sets fall back to
    clipping against every other site.  Cells come back in site order, one
    per site.
    """
    pts = _validate_point_set(points)
    n = len(pts)
    if n == 0:
        raise ValueError("at least one site is required")
    for i, p in enumerate(pts):
        if not bounds.contains_strict(p):
            raise ValueError(f"site {i} at {p} is not strictly inside {bounds}")

    base = bounds.corners()
    if n == 1:
        return [VoronoiCell(0, list(base))]

    if n == 2:
        neighbor_sets: list[set[int]] = [{1}, {0}]
    else:
        try:
            tri = delaunay(pts)
            neighbor_sets = [set() for _ in range(n)]
            for a, b, c in tri.triangles:
                neighbor_sets[a].update((b, c))
                neighbor_sets[b].update((a, c))
                neighbor_sets[c].update((a, b))
        except ValueError:
            # collinear sites: every bisector can matter
            neighbor_sets = [set(range(n)) - {i} for i in range(n)]

    cells = []
    for i in range(n):
        poly: list[Point2] = list(base)
        for j in sorted(neighbor_sets[i]):
            poly = clip_convex_by_halfplane(poly, _bisector_halfplane(pts[i], pts[j]))
            if not poly:
                break
        if len(poly) < 3:
            raise RuntimeError(f"Voronoi cell for site {i} degenerated during clipping")
        cells.append(VoronoiCell(i, poly))
    return cells
