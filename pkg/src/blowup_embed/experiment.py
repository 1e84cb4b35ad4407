"""Batch driver: generate instances, embed across seeds and sweep points,
verify, and write per-run JSON plus aggregate CSV tables.

Output layout under ``out_dir``::

    results.csv    one row per (sweep point, seed), sorted; no wall-clock data
    summary.csv    success counts per sweep point
    timings.csv    per-run phase timings (the only non-deterministic file)
    runs/<point>_s<seed>.json   full report without timings
    runs/<point>_s<seed>.map    the embedding, when the run succeeded
    instances/<point>_s<seed>.{host,pattern}   when ``save_instances`` is set
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import graphio
from .embedder import EmbedConfig, embed, verify_embedding
from .generators import HostRecipe, blowup, cluster_graph_from_spec, pattern_cycles, pattern_random_bounded, random_host
from .graph import PartitionedHost, Pattern

log = logging.getLogger(__name__)

RESULT_COLUMNS = [
    "point",
    "N",
    "d",
    "delta",
    "Delta",
    "overrides",
    "seed",
    "outcome",
    "verified",
    "min_H_set",
    "E1",
    "E2",
    "Bad_T",
    "case2",
    "step4",
    "T",
    "message",
]
SUMMARY_COLUMNS = ["point", "N", "d", "delta", "Delta", "overrides", "runs", "successes", "verified", "success_rate"]
TIMING_COLUMNS = ["point", "seed", "preprocess_ms", "phase1_ms", "phase2_ms", "total_ms"]

HOST_KINDS = ("random", "blowup", "file")
PATTERN_KINDS = ("cycles", "random", "file")


@dataclass
class ExperimentConfig:
    """One sweep. Every combination of the axis lists is a sweep point, and
    every sweep point runs once per seed.

    ``Delta`` is the degree bound handed to ``pattern_random_bounded``; with
    cycle patterns it must be 2. With ``host="file"`` / ``pattern="file"``
    the instance is loaded from ``host_file`` / ``pattern_file`` and the N,
    d, delta axes only feed the embedder.
    """

    out_dir: str
    seeds: List[int] = field(default_factory=lambda: [0])
    cluster_graph: str = "triangle"
    host: str = "random"
    pattern: str = "cycles"
    N: List[int] = field(default_factory=lambda: [150])
    d: List[float] = field(default_factory=lambda: [0.6])
    delta: List[float] = field(default_factory=lambda: [0.5])
    Delta: List[int] = field(default_factory=lambda: [2])
    overrides: List[Dict[str, float]] = field(default_factory=lambda: [{}])
    low_degree_fraction: float = 0.0
    fill_fraction: float = 1.0
    host_file: Optional[str] = None
    pattern_file: Optional[str] = None
    mode: str = "practical"
    strict: bool = True
    exhaustive_selection: bool = False
    invariant_check_rate: float = 0.0
    save_instances: bool = True
    plots: bool = True
    workers: int = 1

    def validate(self) -> None:
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be distinct")
        if self.host not in HOST_KINDS:
            raise ValueError(f"host must be one of {HOST_KINDS}")
        if self.pattern not in PATTERN_KINDS:
            raise ValueError(f"pattern must be one of {PATTERN_KINDS}")
        if self.host == "file" and not self.host_file:
            raise ValueError("host='file' needs host_file")
        if self.pattern == "file" and not self.pattern_file:
            raise ValueError("pattern='file' needs pattern_file")
        if self.pattern == "cycles" and any(D != 2 for D in self.Delta):
            raise ValueError("cycle patterns have Delta = 2")
        for axis in ("N", "d", "delta", "Delta", "overrides"):
            if not getattr(self, axis):
                raise ValueError(f"sweep axis {axis} is empty")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown experiment keys: {sorted(unknown)}")
        data = dict(data)
        # scalars are accepted where a single-value axis is meant
        for axis in ("N", "d", "delta", "Delta"):
            if axis in data and not isinstance(data[axis], list):
                data[axis] = [data[axis]]
        if "overrides" in data and isinstance(data["overrides"], dict):
            data["overrides"] = [data["overrides"]]
        if "seeds" in data and isinstance(data["seeds"], dict):
            data["seeds"] = list(range(data["seeds"]["start"], data["seeds"]["stop"]))
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class SweepPoint:
    index: int
    N: int
    d: float
    delta: float
    Delta: int
    overrides: Tuple[Tuple[str, float], ...]

    @property
    def label(self) -> str:
        return f"p{self.index:03d}"

    def overrides_text(self) -> str:
        return ";".join(f"{k}={v}" for k, v in self.overrides)

    def axes(self) -> dict:
        return {
            "point": self.label,
            "N": self.N,
            "d": self.d,
            "delta": self.delta,
            "Delta": self.Delta,
            "overrides": self.overrides_text(),
        }


def sweep_points(cfg: ExperimentConfig) -> List[SweepPoint]:
    combos = itertools.product(cfg.N, cfg.d, cfg.delta, cfg.Delta, cfg.overrides)
    return [
        SweepPoint(k, N, d, delta, Delta, tuple(sorted(ov.items())))
        for k, (N, d, delta, Delta, ov) in enumerate(combos)
    ]


def make_instance(cfg: ExperimentConfig, point: SweepPoint, seed: int) -> Tuple[Pattern, PartitionedHost]:
    if cfg.host == "file":
        host = graphio.read(cfg.host_file)
        if not isinstance(host, PartitionedHost):
            raise ValueError(f"{cfg.host_file} is not a host file")
    else:
        R = cluster_graph_from_spec(cfg.cluster_graph)
        if cfg.host == "blowup":
            host = blowup(R, point.N)
        else:
            host = random_host(HostRecipe(R, point.N, point.d, point.delta, cfg.low_degree_fraction, seed=seed))
    if cfg.pattern == "file":
        pattern = graphio.read(cfg.pattern_file)
        if not isinstance(pattern, Pattern):
            raise ValueError(f"{cfg.pattern_file} is not a pattern file")
    elif cfg.pattern == "cycles":
        pattern = pattern_cycles(host.cluster_graph, host.N)
    else:
        pattern = pattern_random_bounded(host.cluster_graph, host.N, point.Delta, cfg.fill_fraction, seed)
    return pattern, host


def _run_one(cfg: ExperimentConfig, point: SweepPoint, seed: int) -> Tuple[dict, dict]:
    """One (sweep point, seed) task. Returns (result row, timing row); I/O and
    input errors become an ``error`` row instead of aborting the sweep."""
    out = Path(cfg.out_dir)
    stem = f"{point.label}_s{seed}"
    row = {**point.axes(), "seed": seed}
    timing = {"point": point.label, "seed": seed}
    try:
        pattern, host = make_instance(cfg, point, seed)
        if not cfg.strict:
            # persist what the embedder sees, so the map re-verifies
            pattern = pattern.padded(host.N)
        if cfg.save_instances:
            graphio.write(out / "instances" / f"{stem}.host", host)
            graphio.write(out / "instances" / f"{stem}.pattern", pattern)
        config = EmbedConfig(
            mode=cfg.mode,
            seed=seed,
            d=point.d,
            delta=point.delta,
            overrides=dict(point.overrides),
            strict=cfg.strict,
            exhaustive_selection=cfg.exhaustive_selection,
            invariant_check_rate=cfg.invariant_check_rate,
        )
        report = embed(pattern, host, config)
        verified = False
        if report.success:
            verified = verify_embedding(pattern, host, report.phi).ok
            (out / "runs" / f"{stem}.map").write_text(graphio.dumps_map(report.phi))
        (out / "runs" / f"{stem}.json").write_text(report.to_json(timings=False) + "\n")
        diag = report.diagnostics
        row.update(
            outcome=report.outcome,
            verified=int(verified),
            min_H_set="" if diag["min_H_set"] is None else diag["min_H_set"],
            E1=sum(diag["E1_sizes"]),
            E2=sum(diag["E2_sizes"]),
            Bad_T=diag["bad_total"],
            case2=len(diag["case2_events"]),
            step4=len(diag["step4_events"]),
            T="" if diag["T"] is None else diag["T"],
            message=report.message,
        )
        timing.update(report.timings)
    except (OSError, ValueError) as exc:
        log.warning("%s seed %d: %s", point.label, seed, exc)
        row.update(outcome="error", verified=0, message=f"{type(exc).__name__}: {exc}")
    timing["total_ms"] = sum(v for k, v in timing.items() if k.endswith("_ms"))
    return row, timing


def summarize(rows: Sequence[dict], points: Sequence[SweepPoint]) -> List[dict]:
    out = []
    for p in points:
        mine = [r for r in rows if r["point"] == p.label]
        successes = sum(1 for r in mine if r["outcome"] == "success")
        verified = sum(int(r["verified"]) for r in mine)
        rate = successes / len(mine) if mine else 0.0
        out.append({**p.axes(), "runs": len(mine), "successes": successes, "verified": verified, "success_rate": f"{rate:.4f}"})
    return out


def _csv_text(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r)
    return buf.getvalue()


def _sort_key(row: dict):
    return (row["point"], row["seed"])


@dataclass
class ExperimentResult:
    rows: List[dict]
    summary: List[dict]
    timings: List[dict]
    paths: Dict[str, str]

    def success_rate(self, point: Optional[str] = None) -> float:
        rows = [r for r in self.rows if point is None or r["point"] == point]
        return sum(r["outcome"] == "success" and int(r["verified"]) == 1 for r in rows) / max(1, len(rows))


def run_experiment(
    cfg: ExperimentConfig,
    progress: Optional[Callable[[dict], None]] = None,
) -> ExperimentResult:
    """Run every (sweep point, seed) task and write the output tables.

    Rows are sorted by (point, seed) before writing, so the files do not
    depend on ``workers`` or on completion order.
    """
    cfg.validate()
    out = Path(cfg.out_dir)
    (out / "runs").mkdir(parents=True, exist_ok=True)
    if cfg.save_instances:
        (out / "instances").mkdir(exist_ok=True)
    points = sweep_points(cfg)
    tasks = [(p, s) for p in points for s in cfg.seeds]
    results: List[Tuple[dict, dict]] = []
    if cfg.workers == 1:
        for p, s in tasks:
            results.append(_run_one(cfg, p, s))
            if progress:
                progress(results[-1][0])
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_run_one, cfg, p, s) for p, s in tasks]
            for fut in futures:
                results.append(fut.result())
                if progress:
                    progress(results[-1][0])
    rows = sorted((r for r, _ in results), key=_sort_key)
    timings = sorted((t for _, t in results), key=_sort_key)
    summary = summarize(rows, points)
    paths = {
        "results": str(out / "results.csv"),
        "summary": str(out / "summary.csv"),
        "timings": str(out / "timings.csv"),
        "config": str(out / "config.json"),
    }
    Path(paths["results"]).write_text(_csv_text(rows, RESULT_COLUMNS))
    Path(paths["summary"]).write_text(_csv_text(summary, SUMMARY_COLUMNS))
    Path(paths["timings"]).write_text(_csv_text(timings, TIMING_COLUMNS))
    Path(paths["config"]).write_text(json.dumps(asdict(cfg), indent=1, sort_keys=True) + "\n")
    if cfg.plots:
        from .plotting import plot_experiment

        paths.update(plot_experiment(rows, summary, out))
    return ExperimentResult(rows, summary, timings, paths)


def verify_file(pattern_file, host_file, map_file, echo: Callable[[str], None] = print) -> int:
    """Re-run the verifier on persisted files. 0 iff the map is an embedding;
    2 on unreadable or malformed input."""
    try:
        pattern = graphio.read(pattern_file)
        host = graphio.read(host_file)
        phi = graphio.read_map(map_file)
    except (OSError, ValueError) as exc:
        echo(f"error: {exc}")
        return 2
    if not isinstance(pattern, Pattern) or not isinstance(host, PartitionedHost):
        echo("error: expected a pattern file and a host file")
        return 2
    if pattern.cluster_graph != host.cluster_graph:
        echo("error: pattern and host use different cluster graphs")
        return 2
    rep = verify_embedding(pattern, host, phi)
    for line in rep.lines():
        echo(line)
    if rep.ok:
        echo(f"ok: {pattern.n} vertices embedded")
        return 0
    echo("FAILED: " + ", ".join(f"{k}={v}" for k, v in rep.counts.items() if v))
    return 1


def default_workers() -> int:
    return max(1, min(4, os.cpu_count() or 1))
