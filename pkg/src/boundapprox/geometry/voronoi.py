"""Voronoi dual of a Delaunay triangulation, clipped to the layout's box."""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from typing import Sequence

from .delaunay import Edge, Triangulation
from .predicates import orient2d_xy
from .types import BoundingBox, Point2

# clipped pieces no longer than this are dropped; endpoints are clamped
# onto the box, absorbing rounding of the same order
CLIP_TOL = 1e-12

Segment = tuple[Point2, Point2]


@dataclass(frozen=True)
class VoronoiDiagram:
    """``segments`` has an entry for each Delaunay edge whose bisector piece
    survives clipping; ``cells`` holds each site's clipped cell as a CCW
    polygon."""

    segments: dict[Edge, Segment]
    cells: dict[int, tuple[Point2, ...]]
    bbox: BoundingBox

    def to_dict(self) -> dict:
        return {"segments": {f"{i}-{j}": [[a.x, a.y], [b.x, b.y]]
                             for (i, j), (a, b) in sorted(self.segments.items())}}


def circumcenter(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> tuple[float, float]:
    bx, by = b[0] - a[0], b[1] - a[1]
    cx, cy = c[0] - a[0], c[1] - a[1]
    d = 2.0 * (bx * cy - by * cx)
    # nearly flat triangle: the float determinant may have the wrong sign,
    # which would put the center on the wrong side of the triangle
    if abs(d) <= 1e-12 * (abs(bx * cy) + abs(by * cx)):
        return _circumcenter_exact(a, b, c)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    return (a[0] + (cy * b2 - by * c2) / d, a[1] + (bx * c2 - cx * b2) / d)


def _circumcenter_exact(a, b, c) -> tuple[float, float]:
    ax, ay = Fraction(a[0]), Fraction(a[1])
    bx, by = Fraction(b[0]) - ax, Fraction(b[1]) - ay
    cx, cy = Fraction(c[0]) - ax, Fraction(c[1]) - ay
    d = 2 * (bx * cy - by * cx)
    if d == 0:
        raise ZeroDivisionError("circumcenter of collinear points")
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    return (float(ax + (cy * b2 - by * c2) / d), float(ay + (bx * c2 - cx * b2) / d))


def clip_line_param(ox: float, oy: float, dx: float, dy: float,
                    lo: float, hi: float, bbox: BoundingBox,
                    tol: float = 0.0) -> tuple[float, float] | None:
    """Liang-Barsky: restrict t in [lo, hi] so that o + t*d stays in the box
    (inflated by ``tol``).  Returns the clipped interval, or None if empty.
    """
    x0, y0, x1, y1 = bbox.bounds
    for p, q in ((-dx, ox - (x0 - tol)), (dx, (x1 + tol) - ox),
                 (-dy, oy - (y0 - tol)), (dy, (y1 + tol) - oy)):
        if p == 0.0:
            if q < 0.0:
                return None
            continue
        r = q / p
        if p < 0.0:
            if r > lo:
                lo = r
        elif r < hi:
            hi = r
        if lo > hi:
            return None
    return lo, hi


def clip_segment(a: Sequence[float], b: Sequence[float], bbox: BoundingBox,
                 tol: float = CLIP_TOL) -> Segment | None:
    """Clip segment ab to the box; None if nothing of length > tol remains."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    span = clip_line_param(a[0], a[1], dx, dy, 0.0, 1.0, bbox)
    if span is None or (span[1] - span[0]) * math.hypot(dx, dy) <= tol:
        return None
    return tuple(_clamp(a[0] + t * dx, a[1] + t * dy, bbox) for t in span)


def _clamp(x: float, y: float, bbox: BoundingBox) -> Point2:
    x0, y0, x1, y1 = bbox.bounds
    return Point2(min(max(x, x0), x1), min(max(y, y0), y1))


def clip_halfplane(poly: list[tuple[float, float]], nx: float, ny: float,
                    c: float) -> list[tuple[float, float]]:
    """Sutherland-Hodgman step keeping the part with nx*x + ny*y <= c."""
    out: list[tuple[float, float]] = []
    if not poly:
        return out
    prev = poly[-1]
    fprev = nx * prev[0] + ny * prev[1] - c
    for cur in poly:
        fcur = nx * cur[0] + ny * cur[1] - c
        if fcur <= 0.0:
            if fprev > 0.0:
                t = fprev / (fprev - fcur)
                out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
            out.append(cur)
        elif fprev <= 0.0:
            t = fprev / (fprev - fcur)
            out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
        prev, fprev = cur, fcur
    return out


def _bisector_halfplane(p: Sequence[float], q: Sequence[float]) -> tuple[float, float, float]:
    """(nx, ny, c) with nx*x + ny*y <= c exactly on p's side of the bisector."""
    nx, ny = q[0] - p[0], q[1] - p[1]
    mx, my = 0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])
    return nx, ny, nx * mx + ny * my


def voronoi_cell(site: int, neighbors: Sequence[int], pts: Sequence[Sequence[float]],
                 bbox: BoundingBox) -> tuple[Point2, ...]:
    poly = bbox.corners()
    p = pts[site]
    for j in neighbors:
        poly = clip_halfplane(poly, *_bisector_halfplane(p, pts[j]))
    return tuple(_clamp(x, y, bbox) for x, y in poly)


def voronoi(tri: Triangulation) -> VoronoiDiagram:
    """Clipped Voronoi segments (one per Delaunay edge, where non-empty) and cells."""
    layout = tri.layout
    bbox = layout.bbox
    pts = [(p.x, p.y) for p in layout.points]
    centers = [circumcenter(pts[a], pts[b], pts[c]) for a, b, c in tri.triangles]

    segments: dict[Edge, Segment] = {}
    for (i, j), tris in tri.edge_triangles.items():
        (xi, yi), (xj, yj) = pts[i], pts[j]
        mx, my = 0.5 * (xi + xj), 0.5 * (yi + yj)
        # direction along the bisector: left normal of i->j
        dx, dy = -(yj - yi), xj - xi
        dd = dx * dx + dy * dy
        ts = [((cx - mx) * dx + (cy - my) * dy) / dd for cx, cy in (centers[t] for t in tris)]
        if len(ts) == 2:
            lo, hi = min(ts), max(ts)
        else:
            k = next(v for v in tri.triangles[tris[0]] if v != i and v != j)
            # extend away from the triangle, i.e. to the side opposite k
            if orient2d_xy(xi, yi, xj, yj, pts[k][0], pts[k][1]) > 0:
                lo, hi = -math.inf, ts[0]
            else:
                lo, hi = ts[0], math.inf
        span = clip_line_param(mx, my, dx, dy, lo, hi, bbox)
        if span is None or (span[1] - span[0]) * math.sqrt(dd) <= CLIP_TOL:
            continue
        segments[(i, j)] = (_clamp(mx + span[0] * dx, my + span[0] * dy, bbox),
                            _clamp(mx + span[1] * dx, my + span[1] * dy, bbox))

    cells = {i: voronoi_cell(i, nb, pts, bbox) for i, nb in tri.neighbors.items()}
    return VoronoiDiagram(segments, cells, bbox)


def export_dict(tri: Triangulation, vor: VoronoiDiagram) -> dict:
    """Triangulation/diagram export: triangles plus segments keyed "i-j"."""
    return {**tri.to_dict(), **vor.to_dict()}
