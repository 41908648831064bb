import json
import subprocess
import sys

import pytest

from boundapprox.cli import main


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def _run(*argv):
    return main([str(a) for a in argv])


def test_generate_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert _run("generate", 100, "--seed", 42, "--out", a) == 0
    assert _run("generate", 100, "--seed", 42, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert len(data["points"]) == 100
    assert all(0 <= x <= 1 and 0 <= y <= 1 for x, y in data["points"])


def test_generate_too_few(tmp_path):
    out = tmp_path / "x.json"
    assert _run("generate", 2, "--out", out) == 2
    assert not out.exists()


def test_generate_thousand_distinct(tmp_path):
    out = tmp_path / "big.json"
    assert _run("generate", 1000, "--seed", 7, "--out", out) == 0
    pts = json.loads(out.read_text())["points"]
    assert len({tuple(p) for p in pts}) == 1000


def test_triangulate(tmp_path):
    lay = tmp_path / "l.json"
    _run("generate", 30, "--out", lay)
    out = tmp_path / "g.json"
    assert _run("triangulate", lay, "--out", out) == 0
    data = json.loads(out.read_text())
    assert data["triangles"] and data["segments"]


def test_simulate_all_equal(tmp_path):
    sc = _write(tmp_path / "s.json", {
        "layout": {"n": 50}, "seed": 3, "theta": 0.2,
        "field": {"type": "disk", "center": [0.5, 0.5], "radius": 0.3, "inside": 0.4, "outside": 0.4},
        "cost": {"beta": 1.0, "epsilon_unit": 0.01}})
    out = tmp_path / "r.json"
    assert _run("simulate", sc, "--out", out) == 0
    r = json.loads(out.read_text())
    assert r["segments"] == [] and r["remote_messages"] == 0
    assert r["costs"]["proposed"] == pytest.approx(0.01 * r["local_messages"])


def test_simulate_halfplane_naive_full(tmp_path):
    sc = _write(tmp_path / "s.json", {
        "layout": {"n": 100}, "seed": 1, "theta": 0.5,
        "field": {"type": "halfplane", "normal": [0.6, 0.8], "offset": 0.7},
        "cost": {"beta": 2.0}})
    out = tmp_path / "r.json"
    assert _run("simulate", sc, "--out", out) == 0
    r = json.loads(out.read_text())
    assert r["costs"]["naive_full"] == 200.0
    assert r["segments"]
    assert r["remote_messages"] <= r["sensing_nodes"]


def test_simulate_disk_with_svg(tmp_path):
    lay = tmp_path / "l.json"
    _run("generate", 100, "--seed", 5, "--out", lay)
    sc = _write(tmp_path / "s.json", {
        "layout": "l.json", "theta": 0.5,
        "field": {"type": "disk", "center": [0.5, 0.5], "radius": 0.25}})
    out, svg = tmp_path / "r.json", tmp_path / "scene.svg"
    assert _run("simulate", sc, "--out", out, "--svg", svg) == 0
    r = json.loads(out.read_text())
    assert set(r["costs"]) == {"naive_full", "naive_sensing", "proposed"}
    # closed loop: every segment endpoint is shared by an even number of segments
    counts = {}
    for s in r["segments"]:
        for x, y in s["geom"]:
            k = (round(x, 9), round(y, 9))
            counts[k] = counts.get(k, 0) + 1
    assert counts and all(c % 2 == 0 for c in counts.values())
    assert svg.read_text().startswith("<?xml")


@pytest.mark.parametrize("scenario, path", [
    ({"layout": {"n": 10}, "field": {"type": "disk", "center": [0, 0], "radius": 1}}, "scenario.theta"),
    ({"layout": {"n": 10}, "theta": 1.5, "field": {"type": "halfplane", "normal": [1, 0], "offset": 0}},
     "scenario.theta"),
    ({"layout": {"n": 10}, "theta": 0.5, "field": {"type": "disk", "center": [0, 0]}}, "field.radius"),
    ({"layout": {"n": 10}, "theta": 0.5, "field": {"type": "activation", "active": [10]}}, "field.active"),
    ({"layout": {"bbox": [0, 0, 1, 1], "points": [[0, 0], [2, 0], [0, 1]]}, "theta": 0.5,
      "field": {"type": "activation", "active": []}}, "layout.points"),
    ({"theta": 0.5, "field": {"type": "activation", "active": []}}, "layout"),
])
def test_simulate_schema_errors(tmp_path, capsys, scenario, path):
    sc = _write(tmp_path / "s.json", scenario)
    out = tmp_path / "r.json"
    assert _run("simulate", sc, "--out", out, "--svg", tmp_path / "x.svg") == 2
    assert path in capsys.readouterr().err
    assert not out.exists() and not (tmp_path / "x.svg").exists()
    assert sorted(p.name for p in tmp_path.iterdir()) == ["s.json"]


def test_collinear_layout_is_runtime_error(tmp_path):
    sc = _write(tmp_path / "s.json", {
        "layout": {"bbox": [0, 0, 1, 1], "points": [[0, 0], [0.5, 0.5], [1, 1]]}, "theta": 0.5,
        "field": {"type": "activation", "active": [0]}})
    assert _run("simulate", sc, "--out", tmp_path / "r.json") == 3


def test_montecarlo_deterministic(tmp_path):
    cfg = _write(tmp_path / "c.json", {"node_counts": [3, 8], "layouts_per_count": 3,
                                       "patterns_per_activation_size": 4})
    assert _run("montecarlo", cfg, "--out", tmp_path / "a", "--seed", 9) == 0
    assert _run("montecarlo", cfg, "--out", tmp_path / "b", "--seed", 9) == 0
    for name in ("records.csv", "summary.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_montecarlo_single_count(tmp_path):
    cfg = _write(tmp_path / "c.json", {"node_counts": [3], "layouts_per_count": 2,
                                       "patterns_per_activation_size": 2})
    assert _run("montecarlo", cfg, "--out", tmp_path / "o") == 0
    rows = (tmp_path / "o" / "summary.csv").read_text().splitlines()
    assert len(rows) == 2 and rows[1].startswith("3,100.0000")


def test_montecarlo_bad_config(tmp_path, capsys):
    cfg = _write(tmp_path / "c.json", {"node_counts": [2]})
    assert _run("montecarlo", cfg, "--out", tmp_path / "o") == 2
    assert "config.node_counts" in capsys.readouterr().err
    cfg = _write(tmp_path / "c.json", {"layouts": 3})
    assert _run("montecarlo", cfg, "--out", tmp_path / "o") == 2
    assert not (tmp_path / "o").exists()


def test_render_roundtrip(tmp_path):
    cfg = _write(tmp_path / "c.json", {"node_counts": [6], "layouts_per_count": 2,
                                       "patterns_per_activation_size": 3})
    _run("montecarlo", cfg, "--out", tmp_path / "o")
    svg = tmp_path / "f.svg"
    assert _run("render", tmp_path / "o" / "records.csv", "--n", 6, "--out", svg) == 0
    assert "<svg" in svg.read_text()
    assert _run("render", tmp_path / "o" / "records.csv", "--n", 7, "--out", tmp_path / "g.svg") == 3
    assert not (tmp_path / "g.svg").exists()


def test_usage_error_exit_code():
    assert _run("frobnicate") == 2
    assert _run("generate") == 2


def test_module_entry_point(tmp_path):
    out = tmp_path / "l.json"
    proc = subprocess.run([sys.executable, "-m", "boundapprox", "generate", "5", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == str(out)
