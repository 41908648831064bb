"""Incremental Bowyer-Watson Delaunay triangulation.

The enclosing "super-triangle" is symbolic: a single vertex at infinity
(``GHOST``) closes every convex-hull edge into a ghost triangle.  A point
conflicts with a ghost triangle on hull edge ``uv`` when it lies strictly
outside that edge, or on the open segment ``uv`` itself.  This keeps the
hull exact, which a finite super-triangle cannot guarantee.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

from ..errors import DegenerateInput
from .predicates import incircle_xy, orient2d_xy
from .types import SensorLayout

log = logging.getLogger(__name__)

GHOST = -1

Edge = tuple[int, int]
Tri = tuple[int, int, int]


def _canonical(t: Tri) -> Tri:
    """Rotate so the smallest id comes first (orientation kept)."""
    a, b, c = t
    if a < b and a < c:
        return (a, b, c)
    if b < c:
        return (b, c, a)
    return (c, a, b)


@dataclass(frozen=True)
class Triangulation:
    layout: SensorLayout
    triangles: tuple[Tri, ...]
    edges: frozenset[Edge]

    @cached_property
    def edge_triangles(self) -> dict[Edge, tuple[int, ...]]:
        """Map from edge (i < j) to the indices of the 1 or 2 triangles sharing it."""
        out: dict[Edge, list[int]] = defaultdict(list)
        for ti, (a, b, c) in enumerate(self.triangles):
            for u, v in ((a, b), (b, c), (c, a)):
                out[(u, v) if u < v else (v, u)].append(ti)
        return {e: tuple(ts) for e, ts in sorted(out.items())}

    @cached_property
    def neighbors(self) -> dict[int, tuple[int, ...]]:
        nbrs: dict[int, set[int]] = {i: set() for i in range(len(self.layout))}
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return {i: tuple(sorted(s)) for i, s in nbrs.items()}

    @cached_property
    def hull_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e, ts in self.edge_triangles.items() if len(ts) == 1)

    @cached_property
    def hull_vertices(self) -> frozenset[int]:
        return frozenset(v for e in self.hull_edges for v in e)

    def to_dict(self) -> dict:
        return {"triangles": [list(t) for t in self.triangles]}


class _Mesh:
    """Directed-edge -> apex map: triangle (u, v, w) in CCW order is stored as
    apex[(u, v)] = w, apex[(v, w)] = u, apex[(w, u)] = v."""

    def __init__(self, pts: list[tuple[float, float]]):
        self.pts = pts
        self.apex: dict[Edge, int] = {}
        self.start: Edge | None = None

    def add(self, u: int, v: int, w: int) -> None:
        apex = self.apex
        apex[(u, v)] = w
        apex[(v, w)] = u
        apex[(w, u)] = v

    def remove(self, u: int, v: int, w: int) -> None:
        apex = self.apex
        del apex[(u, v)]
        del apex[(v, w)]
        del apex[(w, u)]

    def _orient(self, u: int, v: int, p: int) -> int:
        a, b, c = self.pts[u], self.pts[v], self.pts[p]
        return orient2d_xy(a[0], a[1], b[0], b[1], c[0], c[1])

    def _ghost_conflict(self, u: int, v: int, p: int) -> bool:
        # hull edge u->v with the exterior on its left
        o = self._orient(u, v, p)
        if o != 0:
            return o > 0
        (ux, uy), (vx, vy), (px, py) = self.pts[u], self.pts[v], self.pts[p]
        if ux != vx:
            return min(ux, vx) < px < max(ux, vx)
        return min(uy, vy) < py < max(uy, vy)

    def conflict(self, u: int, v: int, w: int, p: int) -> bool:
        if w == GHOST:
            return self._ghost_conflict(u, v, p)
        if u == GHOST:
            return self._ghost_conflict(v, w, p)
        if v == GHOST:
            return self._ghost_conflict(w, u, p)
        a, b, c, d = self.pts[u], self.pts[v], self.pts[w], self.pts[p]
        return incircle_xy(a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1]) > 0

    def locate(self, p: int) -> Tri:
        """Visibility walk from the last insertion to a triangle in conflict with p."""
        apex = self.apex
        u, v = self.start
        w = apex[(u, v)]
        for _ in range(4 * len(apex) + 16):
            if GHOST in (u, v, w):
                return (u, v, w)
            if self._orient(u, v, p) < 0:
                u, v = v, u
            elif self._orient(v, w, p) < 0:
                u, v = w, v
            elif self._orient(w, u, p) < 0:
                u, v = u, w
            else:
                return (u, v, w)
            w = apex[(u, v)]
        # unreachable for a Delaunay mesh; keep a safe fallback anyway
        log.warning("point location walk did not terminate; scanning")
        for (u, v), w in apex.items():
            if self.conflict(u, v, w, p):
                return (u, v, w)
        raise RuntimeError(f"no triangle conflicts with site {p}")

    def insert(self, p: int) -> None:
        u, v, w = self.locate(p)
        self.remove(u, v, w)
        stack = [(u, v), (v, w), (w, u)]
        boundary: list[Edge] = []
        apex = self.apex
        while stack:
            a, b = stack.pop()
            x = apex.get((b, a))
            if x is None:
                continue  # neighbour already carved out of the cavity
            if self.conflict(b, a, x, p):
                self.remove(b, a, x)
                stack.append((a, x))
                stack.append((x, b))
            else:
                boundary.append((a, b))
        for a, b in boundary:
            self.add(a, b, p)
            if a != GHOST and b != GHOST:
                self.start = (a, b)

    def flip_cocircular(self) -> int:
        """Resolve cocircular quadrilaterals by the id tie-break rule.

        Of the two valid diagonals, keep the one whose smaller endpoint id is
        smaller.  Each flip strictly lowers that id for one edge, so the loop
        terminates.
        """
        flips = 0
        changed = True
        while changed:
            changed = False
            for (u, v) in sorted(e for e in self.apex if e[0] < e[1]):
                w = self.apex.get((u, v))
                x = self.apex.get((v, u))
                if w is None or x is None or GHOST in (u, v, w, x):
                    continue
                if min(w, x) >= min(u, v):
                    continue
                a, b, c, d = self.pts[u], self.pts[v], self.pts[w], self.pts[x]
                if incircle_xy(a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1]) != 0:
                    continue
                # quad u, x, v, w in CCW order; swap diagonal uv for xw
                self.remove(u, v, w)
                self.remove(v, u, x)
                self.add(x, v, w)
                self.add(w, u, x)
                self.start = (x, v)
                flips += 1
                changed = True
        return flips


def delaunay(layout: SensorLayout) -> Triangulation:
    """Delaunay triangulation of the layout's sites.

    Sites are inserted in node-id order, except that the seed triangle is
    formed from sites 0, 1 and the first site not collinear with them.
    """
    pts = [(p.x, p.y) for p in layout.points]
    n = len(pts)
    if n < 3:
        raise DegenerateInput(f"need at least 3 sites, got {n}")
    (x0, y0), (x1, y1) = pts[0], pts[1]
    c = next((k for k in range(2, n)
              if orient2d_xy(x0, y0, x1, y1, pts[k][0], pts[k][1]) != 0), None)
    if c is None:
        raise DegenerateInput("all sites are collinear")

    mesh = _Mesh(pts)
    a, b = (0, 1) if orient2d_xy(x0, y0, x1, y1, pts[c][0], pts[c][1]) > 0 else (1, 0)
    mesh.add(a, b, c)
    mesh.add(b, a, GHOST)
    mesh.add(c, b, GHOST)
    mesh.add(a, c, GHOST)
    mesh.start = (a, b)
    for p in range(2, n):
        if p != c:
            mesh.insert(p)
    flips = mesh.flip_cocircular()
    if flips:
        log.debug("cocircular tie-break flipped %d edges", flips)

    tris = set()
    for (u, v), w in mesh.apex.items():
        if GHOST not in (u, v, w):
            tris.add(_canonical((u, v, w)))
    triangles = tuple(sorted(tris))
    edges = frozenset((min(u, v), max(u, v)) for (u, v) in mesh.apex
                      if u != GHOST and v != GHOST)
    return Triangulation(layout, triangles, edges)
