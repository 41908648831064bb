from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from ..errors import DuplicateSite


@dataclass(frozen=True, slots=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinate in Point2({self.x!r}, {self.y!r})")
        # normalise ints/numpy scalars so equality and hashing are plain-float
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y

    def __getitem__(self, i: int) -> float:
        return (self.x, self.y)[i]

    def __len__(self) -> int:
        return 2

    def dist(self, other: Sequence[float]) -> float:
        return math.hypot(self.x - other[0], self.y - other[1])


@dataclass(frozen=True, slots=True)
class BoundingBox:
    min: Point2
    max: Point2

    def __post_init__(self):
        if not (self.min.x < self.max.x and self.min.y < self.max.y):
            raise ValueError(f"bounding box must have positive area: {self.min} .. {self.max}")

    @classmethod
    def from_bounds(cls, minx: float, miny: float, maxx: float, maxy: float) -> BoundingBox:
        return cls(Point2(minx, miny), Point2(maxx, maxy))

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (self.min.x, self.min.y, self.max.x, self.max.y)

    @property
    def width(self) -> float:
        return self.max.x - self.min.x

    @property
    def height(self) -> float:
        return self.max.y - self.min.y

    def contains(self, p: Sequence[float], tol: float = 0.0) -> bool:
        return (self.min.x - tol <= p[0] <= self.max.x + tol
                and self.min.y - tol <= p[1] <= self.max.y + tol)

    def corners(self) -> list[tuple[float, float]]:
        """Corners in counter-clockwise order starting at ``min``."""
        x0, y0, x1, y1 = self.bounds
        return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


UNIT_BOX = BoundingBox(Point2(0.0, 0.0), Point2(1.0, 1.0))


@dataclass(frozen=True)
class SensorLayout:
    """Sensor positions inside a rectangular domain.

    The index of a point in ``points`` is its node id.  Points must lie in
    ``bbox`` (borders included) and must be pairwise distinct.
    """

    points: tuple[Point2, ...]
    bbox: BoundingBox = UNIT_BOX

    def __post_init__(self):
        pts = tuple(p if isinstance(p, Point2) else Point2(*p) for p in self.points)
        object.__setattr__(self, "points", pts)
        seen: dict[tuple[float, float], int] = {}
        for i, p in enumerate(pts):
            if not self.bbox.contains(p):
                raise ValueError(f"point {i} {p} lies outside {self.bbox.bounds}")
            key = (p.x, p.y)
            if key in seen:
                raise DuplicateSite(f"points {seen[key]} and {i} coincide at {key}")
            seen[key] = i

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def coords(self) -> np.ndarray:
        """(n, 2) float array of the positions; do not mutate."""
        arr = np.array([(p.x, p.y) for p in self.points], dtype=float).reshape(-1, 2)
        arr.setflags(write=False)
        return arr

    @classmethod
    def from_coords(cls, coords, bbox: BoundingBox = UNIT_BOX) -> SensorLayout:
        return cls(tuple(Point2(float(x), float(y)) for x, y in coords), bbox)

    def to_dict(self) -> dict:
        return {"bbox": list(self.bbox.bounds), "points": [[p.x, p.y] for p in self.points]}

    @classmethod
    def from_dict(cls, data: dict) -> SensorLayout:
        return cls.from_coords(data["points"], BoundingBox.from_bounds(*data["bbox"]))


def random_layout(n: int, bbox: BoundingBox, rng: np.random.Generator) -> SensorLayout:
    """Draw ``n`` independent uniform positions in ``bbox``.

    May raise DuplicateSite (vanishingly rare); callers that need a
    triangulable layout should also check collinearity and redraw.
    """
    x0, y0, x1, y1 = bbox.bounds
    xy = rng.random((n, 2))
    xs = x0 + xy[:, 0] * (x1 - x0)
    ys = y0 + xy[:, 1] * (y1 - y0)
    # rounding can push x0 + u*(x1-x0) a hair past x1
    xs = np.minimum(xs, x1)
    ys = np.minimum(ys, y1)
    return SensorLayout.from_coords(np.column_stack([xs, ys]), bbox)
