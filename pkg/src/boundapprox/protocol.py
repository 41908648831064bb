"""Local boundary detection and the communication cost of each reporting scheme.

Three schemes are compared:

* naive full: every sensor reports to the station (cost ``n * beta``);
* naive sensing: sensors whose reading exceeds a fixed threshold report
  (cost ``m * beta``);
* proposed: neighbours exchange readings, and for each neighbour pair whose
  readings differ by more than ``theta`` the higher-reading sensor sends the
  pair's Voronoi segment.  One remote message per transmitting sensor.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import LengthMismatch
from .field import Readings
from .geometry.delaunay import Edge, Triangulation
from .geometry.voronoi import Segment, VoronoiDiagram

DEFAULT_SENSE_THRESHOLD = 0.5


@dataclass(frozen=True)
class CostModel:
    beta: float = 1.0
    epsilon_unit: float = 0.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.epsilon_unit >= 0:
            raise ValueError(f"epsilon_unit must be non-negative, got {self.epsilon_unit}")


@dataclass(frozen=True)
class BoundarySegment:
    pair: Edge
    geom: Segment
    transmitter: int


@dataclass(frozen=True)
class BoundaryResult:
    segments: tuple[BoundarySegment, ...]
    local_messages: int
    remote_messages: int
    incident_nodes: frozenset[int]
    transmitters: frozenset[int]

    @property
    def pairs(self) -> frozenset[Edge]:
        return frozenset(s.pair for s in self.segments)


def _check_theta(theta: float) -> None:
    if not (0.0 <= theta <= 1.0):
        raise ValueError(f"theta must be in [0, 1], got {theta}")


def detect_boundary(tri: Triangulation, vor: VoronoiDiagram, readings: Readings,
                    theta: float) -> BoundaryResult:
    """Run one round of the local detection protocol.

    A Delaunay edge (i, j) is a boundary pair when ``|psi_i - psi_j| > theta``
    and its clipped Voronoi segment exists.  The endpoint with the larger
    reading transmits (smaller id on ties).
    """
    n = len(tri.layout)
    if len(readings) != n:
        raise LengthMismatch(f"{len(readings)} readings for {n} sensors")
    _check_theta(theta)
    psi = readings.values

    segments = []
    for (i, j) in sorted(tri.edges):
        if abs(psi[i] - psi[j]) <= theta:
            continue
        geom = vor.segments.get((i, j))
        if geom is None:
            continue
        tx = i if psi[i] >= psi[j] else j
        segments.append(BoundarySegment((i, j), geom, tx))

    transmitters = frozenset(s.transmitter for s in segments)
    incident = frozenset(v for s in segments for v in s.pair)
    return BoundaryResult(
        segments=tuple(segments),
        local_messages=2 * len(tri.edges),
        remote_messages=len(transmitters),
        incident_nodes=incident,
        transmitters=transmitters,
    )


def approximate_boundary_polyline(result: BoundaryResult) -> list[Segment]:
    """Station-side aggregation: the reported segments, ordered by pair."""
    return [s.geom for s in sorted(result.segments, key=lambda s: s.pair)]


def cost_naive_full(n: int, cost: CostModel) -> float:
    if n < 0:
        raise ValueError("node count must be non-negative")
    return n * cost.beta


def cost_naive_sensing(readings: Readings, sense_threshold: float,
                       cost: CostModel) -> tuple[int, float]:
    """(m, m * beta) where m counts readings strictly above ``sense_threshold``."""
    m = sum(1 for v in readings if v > sense_threshold)
    return m, m * cost.beta


def cost_proposed(result: BoundaryResult, cost: CostModel) -> float:
    return result.remote_messages * cost.beta + result.local_messages * cost.epsilon_unit


def result_to_dict(result: BoundaryResult, costs: dict | None = None) -> dict:
    out = {
        "segments": [{"pair": list(s.pair),
                      "geom": [[s.geom[0].x, s.geom[0].y], [s.geom[1].x, s.geom[1].y]],
                      "tx": s.transmitter}
                     for s in result.segments],
        "local_messages": result.local_messages,
        "remote_messages": result.remote_messages,
    }
    if costs is not None:
        out["costs"] = costs
    return out
