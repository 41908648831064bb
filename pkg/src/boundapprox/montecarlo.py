"""Monte Carlo sweep of reporting fractions over random layouts and activations.

For every network size ``n``: draw random layouts, build the Delaunay /
Voronoi structure once per layout, then for each activation size
``k = 1..n`` draw random k-subsets of active sensors and count how many
sensors would report to the station.

Random streams are keyed, not sequential.  The layout for ``(n, layout)``
comes from ``SeedSequence(seed, spawn_key=(0, n, layout, attempt))`` and
the activation patterns for ``(n, layout, k)`` from
``SeedSequence(seed, spawn_key=(1, n, layout, k))``, with pattern ``p``
being row ``p`` of that stream's draw.  Trials can therefore be split and
recombined in any order.
"""
from __future__ import annotations

import csv
import enum
import io
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import DegenerateInput, DuplicateSite, EmptyInput
from .field import BinaryActivation, sample
from .geometry import UNIT_BOX, BoundingBox, SensorLayout, Triangulation, delaunay, random_layout, voronoi
from .geometry.voronoi import VoronoiDiagram
from .protocol import DEFAULT_SENSE_THRESHOLD, cost_naive_sensing, CostModel, detect_boundary

log = logging.getLogger(__name__)

DEFAULT_NODE_COUNTS = (3, 4, 5, 10, 25, 100, 200, 500, 1000)
# largest-n values reported with reduced sampling unless asked otherwise
REDUCED_ABOVE = 100
REDUCED_SAMPLING = (20, 20)
MAX_REDRAWS = 1000

_LAYOUT_STREAM = 0
_PATTERN_STREAM = 1


class ReportingMetric(str, enum.Enum):
    TRANSMITTERS = "transmitters"
    INCIDENT_NODES = "incident"


@dataclass(frozen=True)
class SweepConfig:
    node_counts: tuple[int, ...] = DEFAULT_NODE_COUNTS
    layouts_per_count: int = 100
    patterns_per_activation_size: int = 100
    theta: float = 0.5
    seed: int = 0
    bbox: BoundingBox = UNIT_BOX
    reporting_metric: ReportingMetric = ReportingMetric.INCIDENT_NODES
    # (layouts, patterns) used for n > REDUCED_ABOVE; None means full sampling everywhere
    reduced_sampling: tuple[int, int] | None = REDUCED_SAMPLING

    def __post_init__(self):
        object.__setattr__(self, "node_counts", tuple(int(n) for n in self.node_counts))
        object.__setattr__(self, "reporting_metric", ReportingMetric(self.reporting_metric))
        if not self.node_counts:
            raise ValueError("node_counts is empty")
        if min(self.node_counts) < 3:
            raise ValueError("every node count must be at least 3")
        if self.layouts_per_count < 1 or self.patterns_per_activation_size < 1:
            raise ValueError("layout and pattern counts must be at least 1")
        if self.reduced_sampling is not None and min(self.reduced_sampling) < 1:
            raise ValueError("reduced sampling counts must be at least 1")
        if not (0.0 <= self.theta < 1.0):
            raise ValueError(f"theta must be in [0, 1), got {self.theta}")

    def sampling_for(self, n: int) -> tuple[int, int]:
        """(layouts, patterns per activation size) used for networks of n nodes."""
        if self.reduced_sampling is not None and n > REDUCED_ABOVE:
            return self.reduced_sampling
        return self.layouts_per_count, self.patterns_per_activation_size


@dataclass(frozen=True)
class TrialRecord:
    n: int
    layout_index: int
    activation_size: int
    pattern_index: int
    observing_fraction: float
    reporting_fraction: float
    reporters_naive_sensing: float


RECORD_HEADER = ("n", "layout", "activation_size", "pattern",
                 "observing_frac", "reporting_frac", "naive_sensing_frac")

_INT_COLUMNS = ("n", "layout_index", "activation_size", "pattern_index")
_FLOAT_COLUMNS = ("observing_fraction", "reporting_fraction", "reporters_naive_sensing")


class TrialRecords:
    """Column store of trial records; iterating yields TrialRecord objects.

    Sweeps produce millions of trials, so records are kept as numpy columns.
    """

    def __init__(self, **columns: np.ndarray):
        missing = set(_INT_COLUMNS + _FLOAT_COLUMNS) - set(columns)
        if missing:
            raise ValueError(f"missing columns: {sorted(missing)}")
        lengths = {len(columns[c]) for c in _INT_COLUMNS + _FLOAT_COLUMNS}
        if len(lengths) != 1:
            raise ValueError("columns differ in length")
        for c in _INT_COLUMNS:
            setattr(self, c, np.asarray(columns[c], dtype=np.int64))
        for c in _FLOAT_COLUMNS:
            setattr(self, c, np.asarray(columns[c], dtype=float))

    @classmethod
    def empty(cls) -> TrialRecords:
        return cls(**{c: np.empty(0) for c in _INT_COLUMNS + _FLOAT_COLUMNS})

    @classmethod
    def from_records(cls, records: Iterable[TrialRecord]) -> TrialRecords:
        records = list(records)
        return cls(**{c: np.array([getattr(r, c) for r in records])
                      for c in _INT_COLUMNS + _FLOAT_COLUMNS})

    @classmethod
    def concat(cls, parts: Sequence[TrialRecords]) -> TrialRecords:
        if not parts:
            return cls.empty()
        return cls(**{c: np.concatenate([getattr(p, c) for p in parts])
                      for c in _INT_COLUMNS + _FLOAT_COLUMNS})

    def __len__(self) -> int:
        return len(self.n)

    def __iter__(self) -> Iterator[TrialRecord]:
        for row in zip(*(getattr(self, c).tolist() for c in _INT_COLUMNS + _FLOAT_COLUMNS)):
            yield TrialRecord(*row)

    def __getitem__(self, i: int) -> TrialRecord:
        return TrialRecord(*(getattr(self, c)[i].item() for c in _INT_COLUMNS + _FLOAT_COLUMNS))

    def select(self, mask: np.ndarray) -> TrialRecords:
        return TrialRecords(**{c: getattr(self, c)[mask] for c in _INT_COLUMNS + _FLOAT_COLUMNS})

    def write_csv(self, fh) -> None:
        fh.write(",".join(RECORD_HEADER) + "\n")
        if not len(self):
            return
        table = np.column_stack([getattr(self, c) for c in _INT_COLUMNS]
                                + [getattr(self, c) for c in _FLOAT_COLUMNS]).astype(object)
        buf = io.StringIO()
        np.savetxt(buf, table, fmt=["%d"] * 4 + ["%.6f"] * 3, delimiter=",")
        fh.write(buf.getvalue())

    @classmethod
    def read_csv(cls, fh) -> TrialRecords:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != RECORD_HEADER:
            raise ValueError(f"unexpected records header {header}")
        rows = [r for r in reader if r]
        if not rows:
            return cls.empty()
        cols = list(zip(*rows))
        data = {c: np.array(cols[i], dtype=np.int64) for i, c in enumerate(_INT_COLUMNS)}
        data.update({c: np.array(cols[4 + i], dtype=float) for i, c in enumerate(_FLOAT_COLUMNS)})
        return cls(**data)


@dataclass(frozen=True)
class NodeCountSummary:
    n: int
    max_reporting: float
    mean_reporting: float
    trials: int
    # scatter sample: (observing_fraction, reporting_fraction) per trial
    observing: np.ndarray = field(repr=False, compare=False)
    reporting: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class SweepSummary:
    per_n: dict[int, NodeCountSummary]
    redraws: dict[int, int] = field(default_factory=dict)

    def max_reporting(self, n: int) -> float:
        return self.per_n[n].max_reporting

    def write_csv(self, fh) -> None:
        fh.write("n,max_reporting_pct,mean_reporting_pct\n")
        for n, s in sorted(self.per_n.items()):
            fh.write(f"{n},{100 * s.max_reporting:.4f},{100 * s.mean_reporting:.4f}\n")


def summarize(records: TrialRecords | Iterable[TrialRecord]) -> SweepSummary:
    """Per-n max and mean of the reporting fraction, keeping the scatter data."""
    if not isinstance(records, TrialRecords):
        records = TrialRecords.from_records(records)
    if not len(records):
        raise EmptyInput("no trial records to summarize")
    per_n = {}
    for n in np.unique(records.n).tolist():
        mask = records.n == n
        rep = records.reporting_fraction[mask]
        per_n[n] = NodeCountSummary(
            n=n,
            max_reporting=float(rep.max()),
            mean_reporting=float(rep.mean()),
            trials=int(mask.sum()),
            observing=records.observing_fraction[mask],
            reporting=rep,
        )
    return SweepSummary(per_n)


def layout_rng(seed: int, n: int, layout_index: int, attempt: int = 0) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(_LAYOUT_STREAM, n, layout_index, attempt)))


def pattern_rng(seed: int, n: int, layout_index: int, k: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(_PATTERN_STREAM, n, layout_index, k)))


LayoutSource = Callable[[int, int, int], SensorLayout]


def seeded_layout(seed: int, n: int, layout_index: int = 0,
                  bbox: BoundingBox = UNIT_BOX) -> tuple[SensorLayout, Triangulation, int]:
    """Uniform random layout that triangulates, redrawing degenerate draws.

    Returns the layout, its triangulation and the number of redraws.
    """
    for attempt in range(MAX_REDRAWS):
        try:
            layout = random_layout(n, bbox, layout_rng(seed, n, layout_index, attempt))
            return layout, delaunay(layout), attempt
        except (DegenerateInput, DuplicateSite) as exc:
            log.warning("layout n=%d index=%d attempt=%d degenerate (%s); redrawing",
                        n, layout_index, attempt, exc)
    raise DegenerateInput(f"no usable layout for n={n} after {MAX_REDRAWS} draws")


def activation_patterns(rng: np.random.Generator, n: int, k: int, count: int) -> np.ndarray:
    """(count, n) boolean matrix, each row a uniform random k-subset of nodes."""
    keys = rng.random((count, n))
    # the k smallest keys; only set membership matters, not their order
    chosen = np.argpartition(keys, k - 1, axis=1)[:, :k]
    active = np.zeros((count, n), dtype=bool)
    np.put_along_axis(active, chosen, True, axis=1)
    return active


class _LayoutEvaluator:
    """Counts reporters for many binary activation patterns on one layout.

    Equivalent to detect_boundary with 0/1 readings and theta < 1: an edge
    with a Voronoi segment is a boundary pair iff exactly one endpoint is
    active, and the active endpoint is its transmitter.
    """

    def __init__(self, n: int, vor: VoronoiDiagram):
        self.n = n
        pairs = np.array(sorted(vor.segments), dtype=np.int64).reshape(-1, 2)
        ends = np.concatenate([pairs[:, 0], pairs[:, 1]])
        other = np.concatenate([pairs[:, 1], pairs[:, 0]])
        order = np.argsort(ends, kind="stable")
        self.ends = ends[order]
        self.other = other[order]
        self.nodes, self.starts = np.unique(self.ends, return_index=True)

    def count(self, active: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(incident counts, transmitter counts) per row of ``active``."""
        rows = active.shape[0]
        if len(self.ends) == 0:
            zeros = np.zeros(rows, dtype=np.int64)
            return zeros, zeros
        differs = active[:, self.ends] != active[:, self.other]
        incident = np.logical_or.reduceat(differs, self.starts, axis=1)
        transmit = incident & active[:, self.nodes]
        return incident.sum(axis=1), transmit.sum(axis=1)


def _sweep_layout(config: SweepConfig, n: int, layout_index: int, patterns: int,
                  vor: VoronoiDiagram) -> TrialRecords:
    evaluator = _LayoutEvaluator(n, vor)
    ks = np.arange(1, n + 1)
    # keep each batch around a few million booleans
    batch = max(1, 2_000_000 // max(1, patterns * 2 * len(evaluator.ends)))
    reporting = []
    for start in range(0, n, batch):
        block = [activation_patterns(pattern_rng(config.seed, n, layout_index, int(k)),
                                     n, int(k), patterns)
                 for k in ks[start:start + batch]]
        incident, transmit = evaluator.count(np.concatenate(block))
        if config.reporting_metric is ReportingMetric.INCIDENT_NODES:
            reporting.append(incident)
        else:
            reporting.append(transmit)
    k_col = np.repeat(ks, patterns)
    # binary readings: exactly the k active sensors exceed any threshold in [0, 1)
    observing = k_col / n
    return TrialRecords(
        n=np.full(len(k_col), n),
        layout_index=np.full(len(k_col), layout_index),
        activation_size=k_col,
        pattern_index=np.tile(np.arange(patterns), n),
        observing_fraction=observing,
        reporting_fraction=np.concatenate(reporting) / n,
        reporters_naive_sensing=observing.copy(),
    )


def run_sweep(config: SweepConfig,
              layouts: LayoutSource | None = None) -> tuple[TrialRecords, SweepSummary]:
    """Run the sweep described by ``config``.

    ``layouts(seed, n, layout_index)`` may supply layouts; by default they are
    drawn uniformly in ``config.bbox`` from keyed substreams.
    """
    parts = []
    redraws: dict[int, int] = {}
    for n in config.node_counts:
        n_layouts, patterns = config.sampling_for(n)
        redraws[n] = 0
        for li in range(n_layouts):
            if layouts is None:
                layout, tri, extra = seeded_layout(config.seed, n, li, config.bbox)
                redraws[n] += extra
            else:
                layout = layouts(config.seed, n, li)
                tri = delaunay(layout)
            parts.append(_sweep_layout(config, n, li, patterns, voronoi(tri)))
        log.info("n=%d: %d layouts x %d patterns x %d sizes", n, n_layouts, patterns, n)
    records = TrialRecords.concat(parts)
    summary = summarize(records)
    return records, SweepSummary(summary.per_n, redraws)


def evaluate_trial(tri: Triangulation, vor: VoronoiDiagram, active: Iterable[int],
                   theta: float = 0.5,
                   sense_threshold: float = DEFAULT_SENSE_THRESHOLD) -> dict[str, float]:
    """One trial through the reference protocol path (slow; used for cross-checks)."""
    n = len(tri.layout)
    readings = sample(BinaryActivation(frozenset(active)), tri.layout)
    result = detect_boundary(tri, vor, readings, theta)
    m, _ = cost_naive_sensing(readings, sense_threshold, CostModel())
    return {
        "incident": len(result.incident_nodes) / n,
        "transmitters": len(result.transmitters) / n,
        "naive_sensing": m / n,
    }
