"""SVG output: network scenes and reporting-fraction scatter plots.

Style conventions: sites are small dark dots, Delaunay edges light gray,
Voronoi segments mid gray, the phenomenon a gray fill, the true boundary a
solid black line and the approximated boundary a dashed black line.
Coordinates are written with 6 decimals so output is byte-stable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import EmptyAfterFilter
from .field import Disk, HalfPlane
from .geometry.types import BoundingBox, Point2
from .geometry.voronoi import Segment, clip_halfplane, clip_segment
from .montecarlo import TrialRecord, TrialRecords

CIRCLE_STEPS = 256


@dataclass(frozen=True)
class Sites:
    points: tuple[Point2, ...]
    radius_px: float = 2.5


@dataclass(frozen=True)
class DelaunayEdges:
    segments: tuple[Segment, ...]


@dataclass(frozen=True)
class VoronoiSegments:
    segments: tuple[Segment, ...]


@dataclass(frozen=True)
class FieldShading:
    field: HalfPlane | Disk


@dataclass(frozen=True)
class TrueBoundary:
    field: HalfPlane | Disk


@dataclass(frozen=True)
class ApproxBoundary:
    segments: tuple[Segment, ...]


Layer = Union[Sites, DelaunayEdges, VoronoiSegments, FieldShading, TrueBoundary, ApproxBoundary]


@dataclass(frozen=True)
class Scene:
    bbox: BoundingBox
    layers: tuple[Layer, ...] = field(default_factory=tuple)


def build_scene(layout, tri=None, vor=None, phenomenon=None, result=None) -> Scene:
    """Convenience assembly in the usual drawing order (back to front)."""
    pts = layout.points
    layers: list[Layer] = []
    if phenomenon is not None:
        layers.append(FieldShading(phenomenon))
    if vor is not None:
        layers.append(VoronoiSegments(tuple(s for _, s in sorted(vor.segments.items()))))
    if tri is not None:
        layers.append(DelaunayEdges(tuple((pts[i], pts[j]) for i, j in sorted(tri.edges))))
    if phenomenon is not None:
        layers.append(TrueBoundary(phenomenon))
    if result is not None:
        layers.append(ApproxBoundary(tuple(s.geom for s in result.segments)))
    layers.append(Sites(tuple(pts)))
    return Scene(layout.bbox, tuple(layers))


def _f(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


class _Frame:
    """Maps domain coordinates to pixels (y flipped)."""

    def __init__(self, bbox: BoundingBox, width_px: int):
        self.bbox = bbox
        self.scale = width_px / bbox.width
        self.width = float(width_px)
        self.height = bbox.height * self.scale

    def __call__(self, p: Sequence[float]) -> tuple[float, float]:
        x = (p[0] - self.bbox.min.x) * self.scale
        y = (self.bbox.max.y - p[1]) * self.scale
        return (min(max(x, 0.0), self.width), min(max(y, 0.0), self.height))


def _line(a, b, style: str) -> str:
    return (f'<line x1="{_f(a[0])}" y1="{_f(a[1])}" x2="{_f(b[0])}" y2="{_f(b[1])}" '
            f'{style}/>')


def _points_attr(pts: Iterable[Sequence[float]]) -> str:
    return " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)


def _circle_chords(disk: Disk) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    cx, cy, r = disk.center.x, disk.center.y, disk.radius
    pts = [(cx + r * math.cos(2 * math.pi * i / CIRCLE_STEPS),
            cy + r * math.sin(2 * math.pi * i / CIRCLE_STEPS)) for i in range(CIRCLE_STEPS)]
    return list(zip(pts, pts[1:] + pts[:1]))


def _shading_polygon(phenomenon: HalfPlane | Disk, bbox: BoundingBox) -> list[tuple[float, float]]:
    if isinstance(phenomenon, HalfPlane):
        nx, ny = phenomenon.normal
        return clip_halfplane(bbox.corners(), -nx, -ny, -phenomenon.offset)
    poly = [a for a, _ in _circle_chords(phenomenon)]
    for (x0, y0), (x1, y1) in zip(bbox.corners(), bbox.corners()[1:] + bbox.corners()[:1]):
        # keep the left side of each CCW box edge
        nx, ny = (y1 - y0), -(x1 - x0)
        poly = clip_halfplane(poly, nx, ny, nx * x0 + ny * y0)
    return poly


def _boundary_segments(phenomenon: HalfPlane | Disk, bbox: BoundingBox) -> list[Segment]:
    if isinstance(phenomenon, HalfPlane):
        nx, ny = phenomenon.normal
        # a point on the line, and a span long enough to cross the whole box
        px, py = nx * phenomenon.offset, ny * phenomenon.offset
        reach = 2.0 * (math.hypot(*bbox.min) + math.hypot(*bbox.max) + abs(phenomenon.offset))
        a = (px - ny * reach, py + nx * reach)
        b = (px + ny * reach, py - nx * reach)
        seg = clip_segment(a, b, bbox)
        return [seg] if seg else []
    out = []
    for a, b in _circle_chords(phenomenon):
        seg = clip_segment(a, b, bbox)
        if seg:
            out.append(seg)
    return out


def _render_layer(layer: Layer, frame: _Frame, bbox: BoundingBox) -> list[str]:
    if isinstance(layer, FieldShading):
        poly = _shading_polygon(layer.field, bbox)
        if len(poly) < 3:
            return []
        return [f'<polygon class="field" points="{_points_attr(frame(p) for p in poly)}" '
                f'fill="#c8c8c8" stroke="none"/>']
    if isinstance(layer, VoronoiSegments):
        return [_line(frame(a), frame(b), 'class="voronoi" stroke="#808080" stroke-width="1"')
                for a, b in layer.segments]
    if isinstance(layer, DelaunayEdges):
        return [_line(frame(a), frame(b), 'class="delaunay" stroke="#b0b0b0" stroke-width="0.75"')
                for a, b in layer.segments]
    if isinstance(layer, TrueBoundary):
        return [_line(frame(a), frame(b), 'class="true-boundary" stroke="#000000" stroke-width="2"')
                for a, b in _boundary_segments(layer.field, bbox)]
    if isinstance(layer, ApproxBoundary):
        return [_line(frame(a), frame(b),
                      'class="approx-boundary" stroke="#000000" stroke-width="2" '
                      'stroke-dasharray="6,4"')
                for a, b in layer.segments]
    if isinstance(layer, Sites):
        out = []
        for p in layer.points:
            x, y = frame(p)
            out.append(f'<circle class="site" cx="{_f(x)}" cy="{_f(y)}" '
                       f'r="{_f(layer.radius_px)}" fill="#202020"/>')
        return out
    raise TypeError(f"unknown layer {type(layer).__name__}")


def _document(width: float, height: float, body: list[str]) -> str:
    head = ('<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_f(width)}" height="{_f(height)}" '
            f'viewBox="0 0 {_f(width)} {_f(height)}">\n')
    return head + "".join(line + "\n" for line in body) + "</svg>\n"


def scene_to_svg(scene: Scene, width_px: int = 600) -> str:
    if width_px <= 0:
        raise ValueError("width_px must be positive")
    frame = _Frame(scene.bbox, width_px)
    body = [f'<rect class="background" x="0" y="0" width="{_f(frame.width)}" '
            f'height="{_f(frame.height)}" fill="#ffffff"/>']
    for layer in scene.layers:
        kind = type(layer).__name__
        inner = _render_layer(layer, frame, scene.bbox)
        body.append(f'<g class="{kind}">')
        body.extend("  " + el for el in inner)
        body.append("</g>")
    return _document(frame.width, frame.height, body)


# scatter plot geometry, as fractions of the width
_MARGIN = 0.12


class ScatterFrame:
    """Pixel mapping for the scatter plot; both axes run 0..100 percent."""

    def __init__(self, width_px: int):
        self.size = float(width_px)
        self.margin = _MARGIN * width_px
        self.span = self.size - 2 * self.margin

    def __call__(self, obs_pct: float, rep_pct: float) -> tuple[float, float]:
        return (self.margin + obs_pct / 100.0 * self.span,
                self.size - self.margin - rep_pct / 100.0 * self.span)


def scatter_to_svg(records: TrialRecords | Iterable[TrialRecord], n_filter: int,
                   width_px: int = 500) -> str:
    """Observing vs reporting percentages for networks of ``n_filter`` nodes.

    Reference lines: the horizontal at 100% (every sensor reports) and the
    diagonal (only sensing nodes report).  Coincident markers are drawn once.
    """
    if not isinstance(records, TrialRecords):
        records = TrialRecords.from_records(records)
    sel = records.select(records.n == n_filter)
    if not len(sel):
        raise EmptyAfterFilter(f"no records for n={n_filter}")
    if width_px <= 0:
        raise ValueError("width_px must be positive")
    frame = ScatterFrame(width_px)
    pairs = np.unique(np.round(np.column_stack([sel.observing_fraction,
                                                sel.reporting_fraction]) * 100, 6), axis=0)
    top = float(sel.reporting_fraction.max()) * 100

    body = [f'<rect class="background" x="0" y="0" width="{_f(frame.size)}" '
            f'height="{_f(frame.size)}" fill="#ffffff"/>']
    body.append('<g class="axes" stroke="#000000" stroke-width="1">')
    body.append("  " + _line(frame(0, 0), frame(100, 0), 'class="x-axis"'))
    body.append("  " + _line(frame(0, 0), frame(0, 100), 'class="y-axis"'))
    body.append("</g>")
    body.append('<g class="ticks" font-family="sans-serif" font-size="10" fill="#000000">')
    for t in range(0, 101, 20):
        x, y = frame(t, 0)
        body.append(f'  <text x="{_f(x)}" y="{_f(y + 14)}" text-anchor="middle">{t}</text>')
        x, y = frame(0, t)
        body.append(f'  <text x="{_f(x - 6)}" y="{_f(y + 3)}" text-anchor="end">{t}</text>')
    body.append("</g>")
    body.append('<g class="points" fill="#9a9a9a">')
    for obs, rep in pairs:
        x, y = frame(obs, rep)
        body.append(f'  <circle class="trial" cx="{_f(x)}" cy="{_f(y)}" r="1.5"/>')
    body.append("</g>")
    body.append('<g class="reference" stroke="#000000" stroke-width="1.5">')
    body.append("  " + _line(frame(0, 100), frame(100, 100), 'class="naive-full"'))
    body.append("  " + _line(frame(0, 0), frame(100, 100), 'class="naive-sensing"'))
    body.append("  " + _line(frame(0, top), frame(100, top),
                             'class="max-reporting" stroke-dasharray="4,3" stroke="#505050"'))
    body.append("</g>")
    x, _ = frame(50, 0)
    body.append(f'<text class="title" x="{_f(x)}" y="{_f(frame.margin / 2)}" '
                f'font-family="sans-serif" font-size="12" text-anchor="middle">'
                f'n = {n_filter}: observing % vs reporting % (max {top:.1f}%)</text>')
    return _document(frame.size, frame.size, body)
