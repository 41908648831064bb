"""Delaunay neighbour graph and clipped Voronoi segments for sensor layouts."""
from .delaunay import GHOST, Triangulation, delaunay
from .predicates import in_circumcircle, orient2d
from .types import UNIT_BOX, BoundingBox, Point2, SensorLayout, random_layout
from .voronoi import CLIP_TOL, VoronoiDiagram, circumcenter, clip_segment, export_dict, voronoi

__all__ = [
    "GHOST", "Triangulation", "delaunay", "in_circumcircle", "orient2d",
    "UNIT_BOX", "BoundingBox", "Point2", "SensorLayout", "random_layout",
    "CLIP_TOL", "VoronoiDiagram", "circumcenter", "clip_segment", "export_dict", "voronoi",
]
