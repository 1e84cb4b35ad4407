import csv
import json

import pytest

from blowup_embed import graphio
from blowup_embed.experiment import (
    RESULT_COLUMNS,
    ExperimentConfig,
    make_instance,
    run_experiment,
    sweep_points,
    verify_file,
)


def small_cfg(out, **kw):
    base = dict(out_dir=str(out), seeds=[0, 1, 2], host="blowup", N=[20], plots=False)
    base.update(kw)
    return ExperimentConfig(**base)


def read_rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_from_dict_scalars_and_ranges(tmp_path):
    cfg = ExperimentConfig.from_dict({"out_dir": "x", "N": 30, "d": [0.5, 0.6], "seeds": {"start": 2, "stop": 5}, "overrides": {"d1": 0.1}})
    assert cfg.N == [30] and cfg.seeds == [2, 3, 4] and cfg.overrides == [{"d1": 0.1}]
    assert [p.label for p in sweep_points(cfg)] == ["p000", "p001"]
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"out_dir": "x", "colour": "blue"})
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"out_dir": "y", "seeds": [4]}))
    assert ExperimentConfig.load(path).seeds == [4]


@pytest.mark.parametrize(
    "kw",
    [
        {"seeds": []},
        {"seeds": [1, 1]},
        {"host": "torus"},
        {"pattern": "stars"},
        {"host": "file"},
        {"Delta": [3]},
        {"N": []},
        {"workers": 0},
    ],
)
def test_validate_rejects(tmp_path, kw):
    with pytest.raises(ValueError):
        small_cfg(tmp_path, **kw).validate()


def test_sweep_writes_tables_and_reverifiable_runs(tmp_path):
    res = run_experiment(small_cfg(tmp_path / "a"))
    rows = read_rows(res.paths["results"])
    assert list(rows[0]) == RESULT_COLUMNS
    assert [r["outcome"] for r in rows] == ["success"] * 3
    assert res.success_rate() == 1.0
    summary = read_rows(res.paths["summary"])
    assert summary[0]["successes"] == "3" and summary[0]["success_rate"] == "1.0000"
    assert "total_ms" in read_rows(res.paths["timings"])[0]
    out = tmp_path / "a"
    for seed in range(3):
        stem = f"p000_s{seed}"
        lines = []
        code = verify_file(out / "instances" / f"{stem}.pattern", out / "instances" / f"{stem}.host", out / "runs" / f"{stem}.map", lines.append)
        assert code == 0 and lines[-1].startswith("ok")
        report = json.loads((out / "runs" / f"{stem}.json").read_text())
        assert report["outcome"] == "success" and "timings" not in report


def test_sweep_is_byte_identical(tmp_path):
    cfg = dict(host="random", N=[40], d=[0.7], delta=[0.5], low_degree_fraction=0.03)
    a = run_experiment(small_cfg(tmp_path / "a", **cfg))
    b = run_experiment(small_cfg(tmp_path / "b", **cfg))
    assert open(a.paths["results"], "rb").read() == open(b.paths["results"], "rb").read()
    assert open(a.paths["summary"], "rb").read() == open(b.paths["summary"], "rb").read()


def test_workers_do_not_change_results(tmp_path):
    a = run_experiment(small_cfg(tmp_path / "a", seeds=[0, 1, 2, 3]))
    b = run_experiment(small_cfg(tmp_path / "b", seeds=[0, 1, 2, 3], workers=2))
    assert open(a.paths["results"], "rb").read() == open(b.paths["results"], "rb").read()


def test_error_rows_do_not_abort(tmp_path):
    cfg = small_cfg(tmp_path / "e", host="file", host_file=str(tmp_path / "missing.host"))
    res = run_experiment(cfg)
    assert [r["outcome"] for r in res.rows] == ["error"] * 3
    assert "FileNotFoundError" in res.rows[0]["message"]
    assert res.success_rate() == 0.0


def test_lenient_sweep_pads_persisted_pattern(tmp_path):
    res = run_experiment(small_cfg(tmp_path / "l", pattern="random", Delta=[2], fill_fraction=0.7, strict=False, seeds=[0]))
    assert res.rows[0]["outcome"] == "success"
    saved = graphio.read(tmp_path / "l" / "instances" / "p000_s0.pattern")
    assert saved.class_sizes() == [20, 20, 20]


def test_plots_next_to_csv(tmp_path):
    res = run_experiment(small_cfg(tmp_path / "p", N=[15, 20], seeds=[0, 1], plots=True))
    for key in ("plot_success", "plot_outcomes", "plot_min_H"):
        path = res.paths[key]
        assert path.endswith(".png")
        assert open(path, "rb").read(8) == b"\x89PNG\r\n\x1a\n"


def test_make_instance_kinds(tmp_path):
    cfg = small_cfg(tmp_path, host="random", pattern="random", Delta=[3], d=[0.8])
    (point,) = sweep_points(cfg)
    pattern, host = make_instance(cfg, point, 5)
    assert host.N == 20 and pattern.graph.max_degree <= 3
    again = make_instance(cfg, point, 5)
    assert graphio.dumps_host(again[1]) == graphio.dumps_host(host)


def test_verify_file_exit_codes(tmp_path):
    run_experiment(small_cfg(tmp_path, seeds=[0]))
    inst, runs = tmp_path / "instances", tmp_path / "runs"
    pattern, host, mp = inst / "p000_s0.pattern", inst / "p000_s0.host", runs / "p000_s0.map"
    lines = mp.read_text().splitlines()
    first = lines[0].split()
    second = lines[1].split()
    lines[1] = f"map {second[1]} {first[2]}"
    bad = tmp_path / "bad.map"
    bad.write_text("\n".join(lines) + "\n")
    out = []
    assert verify_file(pattern, host, bad, out.append) == 1
    assert out[-1].startswith("FAILED") and "injectivity=1" in out[-1]
    garbage = tmp_path / "garbage.map"
    garbage.write_text("map one two\n")
    assert verify_file(pattern, host, garbage, out.append) == 2
    assert verify_file(host, pattern, mp, out.append) == 2
