"""Scalar phenomena sampled at sensor positions.

Every reading lies in [0, 1].  Points exactly on a half-plane or disk
boundary take the inside value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import InvalidNodeId
from .geometry.types import Point2, SensorLayout

DEFAULT_INSIDE = 0.8
DEFAULT_OUTSIDE = 0.1


def _check_level(name: str, v: float) -> None:
    if not (0.0 <= v <= 1.0):
        raise ValueError(f"{name} must be in [0, 1], got {v}")


@dataclass(frozen=True)
class HalfPlane:
    """Inside is ``{p : normal . p >= offset}``."""

    normal: tuple[float, float]
    offset: float
    inside: float = DEFAULT_INSIDE
    outside: float = DEFAULT_OUTSIDE

    def __post_init__(self):
        nx, ny = (float(c) for c in self.normal)
        object.__setattr__(self, "normal", (nx, ny))
        if abs(math.hypot(nx, ny) - 1.0) > 1e-12:
            raise ValueError(f"normal must be a unit vector, got {self.normal}")
        _check_level("inside", self.inside)
        _check_level("outside", self.outside)

    @classmethod
    def through(cls, p: Sequence[float], q: Sequence[float], **levels) -> HalfPlane:
        """Half-plane bounded by the line pq, inside to the left of p->q."""
        dx, dy = q[0] - p[0], q[1] - p[1]
        length = math.hypot(dx, dy)
        nx, ny = -dy / length, dx / length
        return cls((nx, ny), nx * p[0] + ny * p[1], **levels)

    def contains(self, p: Sequence[float]) -> bool:
        return self.normal[0] * p[0] + self.normal[1] * p[1] >= self.offset

    def value_at(self, p: Sequence[float]) -> float:
        return self.inside if self.contains(p) else self.outside


@dataclass(frozen=True)
class Disk:
    center: Point2
    radius: float
    inside: float = DEFAULT_INSIDE
    outside: float = DEFAULT_OUTSIDE

    def __post_init__(self):
        if not isinstance(self.center, Point2):
            object.__setattr__(self, "center", Point2(*self.center))
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        _check_level("inside", self.inside)
        _check_level("outside", self.outside)

    def contains(self, p: Sequence[float]) -> bool:
        dx, dy = p[0] - self.center.x, p[1] - self.center.y
        return dx * dx + dy * dy <= self.radius * self.radius

    def value_at(self, p: Sequence[float]) -> float:
        return self.inside if self.contains(p) else self.outside


@dataclass(frozen=True)
class ScaledGray:
    """A base field dimmed by ``brightness``: every reading is multiplied by it."""

    base: PhenomenonField
    brightness: float

    def __post_init__(self):
        _check_level("brightness", self.brightness)


@dataclass(frozen=True)
class BinaryActivation:
    """Reading 1 on the active node ids, 0 elsewhere."""

    active: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "active", frozenset(int(i) for i in self.active))


PhenomenonField = Union[HalfPlane, Disk, ScaledGray, BinaryActivation]


@dataclass(frozen=True)
class Readings:
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        for i, v in enumerate(vals):
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"reading {i} = {v} outside [0, 1]")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def _sample_values(field: PhenomenonField, layout: SensorLayout) -> list[float]:
    if isinstance(field, (HalfPlane, Disk)):
        return [field.value_at(p) for p in layout.points]
    if isinstance(field, ScaledGray):
        return [field.brightness * v for v in _sample_values(field.base, layout)]
    if isinstance(field, BinaryActivation):
        n = len(layout)
        bad = sorted(i for i in field.active if not 0 <= i < n)
        if bad:
            raise InvalidNodeId(f"activation ids {bad} out of range for {n} nodes")
        return [1.0 if i in field.active else 0.0 for i in range(n)]
    raise TypeError(f"unknown field type {type(field).__name__}")


def sample(field: PhenomenonField, layout: SensorLayout) -> Readings:
    """Reading of ``field`` at every sensor, indexed by node id."""
    return Readings(tuple(_sample_values(field, layout)))


def field_to_dict(field: PhenomenonField) -> dict:
    if isinstance(field, HalfPlane):
        return {"type": "halfplane", "normal": list(field.normal), "offset": field.offset,
                "inside": field.inside, "outside": field.outside}
    if isinstance(field, Disk):
        return {"type": "disk", "center": [field.center.x, field.center.y],
                "radius": field.radius, "inside": field.inside, "outside": field.outside}
    if isinstance(field, ScaledGray):
        return {"type": "scaledgray", "base": field_to_dict(field.base),
                "brightness": field.brightness}
    if isinstance(field, BinaryActivation):
        return {"type": "activation", "active": sorted(field.active)}
    raise TypeError(f"unknown field type {type(field).__name__}")


class FieldSpecError(ValueError):
    """Invalid field description; ``path`` names the offending entry."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def field_from_dict(data: dict, path: str = "field") -> PhenomenonField:
    if not isinstance(data, dict):
        raise FieldSpecError(path, "expected an object")
    kind = data.get("type")
    levels = {k: data[k] for k in ("inside", "outside") if k in data}
    try:
        if kind == "halfplane":
            return HalfPlane(tuple(data["normal"]), float(data["offset"]), **levels)
        if kind == "disk":
            return Disk(Point2(*data["center"]), float(data["radius"]), **levels)
        if kind == "scaledgray":
            return ScaledGray(field_from_dict(data["base"], f"{path}.base"),
                              float(data["brightness"]))
        if kind == "activation":
            return BinaryActivation(frozenset(data["active"]))
    except KeyError as exc:
        raise FieldSpecError(f"{path}.{exc.args[0]}", "missing") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, FieldSpecError):
            raise
        raise FieldSpecError(path, str(exc)) from None
    raise FieldSpecError(f"{path}.type",
                         f"expected halfplane|disk|scaledgray|activation, got {kind!r}")
