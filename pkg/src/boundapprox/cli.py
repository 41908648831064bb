"""Command-line entry point.

    boundapprox generate N [--seed S] [--bbox X0 Y0 X1 Y1] --out layout.json
    boundapprox triangulate layout.json --out geometry.json
    boundapprox simulate scenario.json --out result.json [--svg scene.svg]
    boundapprox montecarlo config.json --out DIR [--seed S] [--metric M] [--paper-faithful]
    boundapprox render records.csv --n N --out scatter.svg

Exit codes: 0 success, 2 usage or schema error, 3 runtime failure.
Outputs are written to a temporary file and renamed into place, so a failed
command never leaves a partial file behind.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .errors import BoundaryApproxError, InvalidNodeId
from .field import (Disk, FieldSpecError, HalfPlane, PhenomenonField, ScaledGray,
                    field_from_dict, sample)
from .geometry import BoundingBox, SensorLayout, delaunay, export_dict, voronoi
from .montecarlo import ReportingMetric, SweepConfig, TrialRecords, run_sweep, seeded_layout
from .protocol import (DEFAULT_SENSE_THRESHOLD, CostModel, cost_naive_full, cost_naive_sensing,
                       cost_proposed, detect_boundary, result_to_dict)
from .render import build_scene, scatter_to_svg, scene_to_svg

log = logging.getLogger("boundapprox")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _load_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(str(path), f"invalid JSON ({exc})") from None


def _number(data: dict, key: str, path: str, default=None, lo=None, hi=None) -> float:
    if key not in data:
        if default is None:
            raise SchemaError(f"{path}.{key}", "missing")
        return default
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(f"{path}.{key}", f"expected a number, got {v!r}")
    if (lo is not None and v < lo) or (hi is not None and v > hi):
        raise SchemaError(f"{path}.{key}", f"must be in [{lo}, {hi}], got {v}")
    return float(v)


def _bbox(value, path: str) -> BoundingBox:
    try:
        return BoundingBox.from_bounds(*(float(v) for v in value))
    except (TypeError, ValueError) as exc:
        raise SchemaError(path, f"expected [minx, miny, maxx, maxy] with positive area ({exc})")


def layout_from_dict(data, path: str = "layout") -> SensorLayout:
    if not isinstance(data, dict):
        raise SchemaError(path, "expected an object")
    if "bbox" not in data:
        raise SchemaError(f"{path}.bbox", "missing")
    if "points" not in data:
        raise SchemaError(f"{path}.points", "missing")
    bbox = _bbox(data["bbox"], f"{path}.bbox")
    pts = data["points"]
    if not isinstance(pts, list):
        raise SchemaError(f"{path}.points", "expected a list of [x, y]")
    for i, p in enumerate(pts):
        if (not isinstance(p, list) or len(p) != 2
                or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p)):
            raise SchemaError(f"{path}.points[{i}]", f"expected [x, y], got {p!r}")
    try:
        return SensorLayout.from_coords(pts, bbox)
    except ValueError as exc:
        raise SchemaError(f"{path}.points", str(exc)) from None


@dataclass(frozen=True)
class Scenario:
    layout: SensorLayout
    field: PhenomenonField
    theta: float
    cost: CostModel
    sense_threshold: float = DEFAULT_SENSE_THRESHOLD
    seed: int | None = None


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    data = _load_json(path)
    if not isinstance(data, dict):
        raise SchemaError("scenario", "expected an object")
    seed = data.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise SchemaError("seed", f"expected an integer, got {seed!r}")

    raw = data.get("layout")
    if raw is None:
        raise SchemaError("layout", "missing")
    if isinstance(raw, str):
        ref = (path.parent / raw) if not Path(raw).is_absolute() else Path(raw)
        if not ref.exists():
            raise SchemaError("layout", f"file not found: {ref}")
        layout = layout_from_dict(_load_json(ref), "layout")
    elif isinstance(raw, dict) and "n" in raw:
        n = raw["n"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 3:
            raise SchemaError("layout.n", f"expected an integer >= 3, got {n!r}")
        bbox = _bbox(raw.get("bbox", [0, 0, 1, 1]), "layout.bbox")
        layout, _, _ = seeded_layout(seed or 0, n, 0, bbox)
    else:
        layout = layout_from_dict(raw, "layout")

    if "field" not in data:
        raise SchemaError("field", "missing")
    try:
        phenomenon = field_from_dict(data["field"], "field")
    except FieldSpecError as exc:
        raise SchemaError(exc.path, str(exc).split(": ", 1)[-1]) from None
    try:
        sample(phenomenon, layout)
    except InvalidNodeId as exc:
        raise SchemaError("field.active", str(exc)) from None

    cost_data = data.get("cost", {})
    if not isinstance(cost_data, dict):
        raise SchemaError("cost", "expected an object")
    cost = CostModel(
        beta=_number(cost_data, "beta", "cost", default=1.0),
        epsilon_unit=_number(cost_data, "epsilon_unit", "cost", default=0.0, lo=0.0),
    )
    if cost.beta <= 0:
        raise SchemaError("cost.beta", "must be positive")
    return Scenario(
        layout=layout,
        field=phenomenon,
        theta=_number(data, "theta", "scenario", lo=0.0, hi=1.0),
        cost=cost,
        sense_threshold=_number(data, "sense_threshold", "scenario",
                                default=DEFAULT_SENSE_THRESHOLD, lo=0.0, hi=1.0),
        seed=seed,
    )


def simulate(scenario: Scenario):
    """Full pipeline for one scenario; returns (result dict, tri, vor, result)."""
    tri = delaunay(scenario.layout)
    vor = voronoi(tri)
    readings = sample(scenario.field, scenario.layout)
    result = detect_boundary(tri, vor, readings, scenario.theta)
    m, sensing_cost = cost_naive_sensing(readings, scenario.sense_threshold, scenario.cost)
    costs = {
        "naive_full": cost_naive_full(len(scenario.layout), scenario.cost),
        "naive_sensing": sensing_cost,
        "proposed": cost_proposed(result, scenario.cost),
    }
    out = result_to_dict(result, costs)
    out["sensing_nodes"] = m
    out["nodes"] = len(scenario.layout)
    return out, tri, vor, result


def load_sweep_config(path: str | Path, seed: int | None = None, metric: str | None = None,
                      paper_faithful: bool = False) -> SweepConfig:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise SchemaError("config", "expected an object")
    known = {"node_counts", "layouts_per_count", "patterns_per_activation_size", "theta",
             "seed", "bbox", "reporting_metric", "reduced_sampling"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise SchemaError(f"config.{unknown[0]}", "unknown key")
    kwargs = {}
    if "node_counts" in data:
        nc = data["node_counts"]
        if (not isinstance(nc, list) or not nc
                or not all(isinstance(n, int) and not isinstance(n, bool) and n >= 3 for n in nc)):
            raise SchemaError("config.node_counts", "expected a non-empty list of integers >= 3")
        kwargs["node_counts"] = tuple(nc)
    for key in ("layouts_per_count", "patterns_per_activation_size", "seed"):
        if key in data:
            v = data[key]
            if isinstance(v, bool) or not isinstance(v, int) or (key != "seed" and v < 1):
                raise SchemaError(f"config.{key}", f"expected a positive integer, got {v!r}")
            kwargs[key] = v
    if "theta" in data:
        kwargs["theta"] = _number(data, "theta", "config", lo=0.0, hi=1.0)
        if kwargs["theta"] >= 1.0:
            raise SchemaError("config.theta", "must be < 1")
    if "bbox" in data:
        kwargs["bbox"] = _bbox(data["bbox"], "config.bbox")
    if "reduced_sampling" in data:
        rs = data["reduced_sampling"]
        if rs is not None and (not isinstance(rs, list) or len(rs) != 2
                               or not all(isinstance(v, int) and v >= 1 for v in rs)):
            raise SchemaError("config.reduced_sampling", "expected [layouts, patterns] or null")
        kwargs["reduced_sampling"] = tuple(rs) if rs is not None else None
    metric = metric or data.get("reporting_metric")
    if metric is not None:
        try:
            kwargs["reporting_metric"] = ReportingMetric(metric)
        except ValueError:
            raise SchemaError("config.reporting_metric",
                              f"expected transmitters|incident, got {metric!r}") from None
    if seed is not None:
        kwargs["seed"] = seed
    if paper_faithful:
        kwargs["reduced_sampling"] = None
    return SweepConfig(**kwargs)


def cmd_generate(args) -> int:
    if args.n < 3:
        raise SchemaError("n", f"need at least 3 sensors, got {args.n}")
    bbox = _bbox(args.bbox, "bbox")
    layout, _, redraws = seeded_layout(args.seed, args.n, 0, bbox)
    if redraws:
        log.info("redrew degenerate layout %d time(s)", redraws)
    write_atomic(args.out, _dump(layout.to_dict()))
    print(args.out)
    return EXIT_OK


def cmd_triangulate(args) -> int:
    layout = layout_from_dict(_load_json(args.layout))
    tri = delaunay(layout)
    write_atomic(args.out, _dump(export_dict(tri, voronoi(tri))))
    print(args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    out, tri, vor, result = simulate(scenario)
    svg = None
    if args.svg:
        phenomenon = scenario.field
        while isinstance(phenomenon, ScaledGray):
            phenomenon = phenomenon.base
        if not isinstance(phenomenon, (HalfPlane, Disk)):
            phenomenon = None
        svg = scene_to_svg(build_scene(scenario.layout, tri, vor, phenomenon, result))
    write_atomic(args.out, _dump(out))
    if svg is not None:
        write_atomic(args.svg, svg)
    print(args.out)
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    config = load_sweep_config(args.config, args.seed, args.metric, args.paper_faithful)
    records, summary = run_sweep(config)
    out = Path(args.out)
    rec_buf, sum_buf = io.StringIO(), io.StringIO()
    records.write_csv(rec_buf)
    summary.write_csv(sum_buf)
    write_atomic(out / "records.csv", rec_buf.getvalue())
    write_atomic(out / "summary.csv", sum_buf.getvalue())
    for n, s in sorted(summary.per_n.items()):
        print(f"n={n:5d}  max reporting {100 * s.max_reporting:6.2f}%  "
              f"mean {100 * s.mean_reporting:6.2f}%  trials {s.trials}")
    return EXIT_OK


def cmd_render(args) -> int:
    with open(args.records, encoding="utf-8", newline="") as fh:
        try:
            records = TrialRecords.read_csv(fh)
        except ValueError as exc:
            raise SchemaError(str(args.records), str(exc)) from None
    write_atomic(args.out, scatter_to_svg(records, args.n, args.width))
    print(args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boundapprox", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a seeded uniform random layout")
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bbox", type=float, nargs=4, default=[0.0, 0.0, 1.0, 1.0],
                   metavar=("MINX", "MINY", "MAXX", "MAXY"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("triangulate", help="export Delaunay triangles and Voronoi segments")
    p.add_argument("layout")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_triangulate)

    p = sub.add_parser("simulate", help="run one scenario through all three schemes")
    p.add_argument("scenario")
    p.add_argument("--out", required=True)
    p.add_argument("--svg")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("montecarlo", help="reporting-fraction sweep")
    p.add_argument("config")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--metric", choices=[m.value for m in ReportingMetric])
    p.add_argument("--paper-faithful", action="store_true",
                   help="full sampling for every network size")
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("render", help="scatter plot of sweep records")
    p.add_argument("records")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=int, default=500)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BoundaryApproxError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
