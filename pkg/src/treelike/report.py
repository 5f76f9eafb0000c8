"""Pipeline that turns edge-list files into the tree-likeness tables."""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .decomposition import TbBoundsReport, tree_breadth_bounds
from .distortion import DistortionReport, report_and_cdf, td_lower_bound
from .estimation import EstimationResult, iterated_bfs_estimate
from .graph import Graph, exact_diameter_radius, largest_connected_component, pair_sampler, read_edge_list
from .hyperbolicity import Budget, HyperbolicityResult, delta_histogram, exact_hyperbolicity
from .labeling import build_distance_labels, write_labels
from .layering import LayeringPartition, build_layering_partition, cluster_stats
from .trees import (EmbeddingTree, build_canonic_tree, build_H_ell, build_H_prime_ell, compute_ell,
                    read_tree, write_tree)

ANALYSES = ("stats", "layering", "trees", "distortion", "hyperbolicity", "tb", "estimate", "summary")
REQUIRES = {
    "trees": ("layering",),
    "distortion": ("trees",),
    "tb": ("layering",),
    "summary": ("stats", "layering", "trees", "distortion"),
}
# bump when an analysis changes what it writes to the cache
CACHE_VERSION = 1


class ConfigError(ValueError):
    """Invalid configuration, raised before any analysis runs."""


@dataclass(frozen=True)
class RunConfig:
    inputs: tuple[str, ...]
    analyses: tuple[str, ...] = ANALYSES
    source: str | int = "min-id"
    seed: int = 0
    budget_seconds: float | None = None
    max_component_size: int = 20000
    pair_sample: int | None = None
    quad_sample: int | None = None
    histogram: bool = False
    exhaustive_hyperbolicity: bool = False
    max_scans: int = 8
    out_dir: str = "treelike-out"
    fmt: str = "csv"
    cache_dir: str | None = None

    @property
    def cache_root(self) -> Path:
        return Path(self.cache_dir) if self.cache_dir else Path(self.out_dir) / ".cache"


@dataclass
class InputRun:
    name: str
    graph: Graph
    source: int
    status: dict[str, str] = field(default_factory=dict)
    seconds: dict[str, float] = field(default_factory=dict)
    stats: tuple[int, int, int, int] | None = None
    lp: LayeringPartition | None = None
    cluster: object | None = None
    trees: dict[str, EmbeddingTree] | None = None
    ell: int | None = None
    distortion: dict[str, DistortionReport] | None = None
    cdf: dict | None = None
    td_bound: object | None = None
    hyper: HyperbolicityResult | None = None
    histogram: dict[float, float] | None = None
    tb: TbBoundsReport | None = None
    estimate: EstimationResult | None = None


@dataclass
class ReportBundle:
    out_dir: Path
    tables: dict[str, list[list]]
    manifest: dict
    runs: list[InputRun]

    @property
    def partial(self) -> bool:
        return any(s == "budget-partial" for r in self.runs for s in r.status.values())


def _load(path: str) -> Graph:
    return largest_connected_component(read_edge_list(path))


def _choose_source(cfg: RunConfig, g: Graph) -> int:
    if cfg.source == "min-id":
        return 0
    if cfg.source == "random":
        return int(np.random.default_rng(cfg.seed).integers(g.n))
    s = int(cfg.source)
    if not 0 <= s < g.n:
        raise ConfigError(f"source vertex {s} outside 0..{g.n - 1}")
    return s


def _cache_dir(cfg: RunConfig, g: Graph, s: int) -> Path:
    return cfg.cache_root / g.content_hash() / f"s{s}" / f"v{CACHE_VERSION}"


def _cached_trees(d: Path) -> dict[str, EmbeddingTree] | None:
    files = {k: d / f"tree_{k}.txt" for k in ("H", "H_ell", "H_prime_ell")}
    if all(f.exists() for f in files.values()):
        return {k: read_tree(f) for k, f in files.items()}
    return None


def validate(cfg: RunConfig) -> list[tuple[str, Graph, int]]:
    """Check the configuration and load inputs; raise ConfigError on any problem."""
    if not cfg.inputs:
        raise ConfigError("no input files")
    unknown = set(cfg.analyses) - set(ANALYSES)
    if unknown:
        raise ConfigError(f"unknown analyses: {sorted(unknown)}")
    if cfg.fmt not in ("csv", "markdown"):
        raise ConfigError(f"unknown format {cfg.fmt!r}")
    if cfg.source not in ("min-id", "random") and not isinstance(cfg.source, int):
        raise ConfigError(f"bad source policy {cfg.source!r}")
    for name, value in (("pair_sample", cfg.pair_sample), ("quad_sample", cfg.quad_sample)):
        if value is not None and value < 1:
            raise ConfigError(f"{name} must be positive")
    if cfg.budget_seconds is not None and cfg.budget_seconds <= 0:
        raise ConfigError("budget must be positive")
    if cfg.max_scans < 2:
        raise ConfigError("max_scans must be at least 2")
    loaded = []
    for path in cfg.inputs:
        try:
            g = _load(path)
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        loaded.append((path, g, _choose_source(cfg, g)))
    enabled = set(cfg.analyses)
    for a in cfg.analyses:
        for need in REQUIRES.get(a, ()):
            if need in enabled:
                continue
            # trees may come from a previous run's cache; everything else must run
            if need == "trees" and all(_cached_trees(_cache_dir(cfg, g, s)) for _, g, s in loaded):
                continue
            raise ConfigError(f"analysis {a!r} needs {need!r}, which is disabled and not cached")
    return loaded


def _fmt(x, digits=6) -> str:
    return f"{x:.{digits}g}" if isinstance(x, float) else str(x)


def _pairs(cfg: RunConfig, g: Graph):
    if cfg.pair_sample is None:
        return "all", None
    return pair_sampler(g, "uniform", k=cfg.pair_sample, seed=cfg.seed), f"sampled(k={cfg.pair_sample}, seed={cfg.seed})"


def _timed(run: InputRun, name: str, fn) -> None:
    t0 = time.perf_counter()
    status = fn()
    run.seconds[name] = round(time.perf_counter() - t0, 3)
    run.status[name] = status or "ok"


def _analyze(cfg: RunConfig, path: str, g: Graph, s: int) -> InputRun:
    run = InputRun(Path(path).stem, g, s)
    enabled = set(cfg.analyses)
    cache = _cache_dir(cfg, g, s)
    cache.mkdir(parents=True, exist_ok=True)

    if "stats" in enabled:
        def stats():
            diam, rad, _ = exact_diameter_radius(g)
            run.stats = (g.n, g.m, diam, rad)
        _timed(run, "stats", stats)

    if "layering" in enabled:
        def layering():
            f = cache / "layering.npz"
            run.lp = build_layering_partition(g, s)
            if not f.exists():
                np.savez(f, layer_of=run.lp.layer_of, cluster_of=run.lp.cluster_of)
            run.cluster = cluster_stats(g, run.lp)
        _timed(run, "layering", layering)

    if "trees" in enabled:
        def trees():
            h = build_canonic_tree(g, run.lp)
            run.ell = compute_ell(g, h)
            run.trees = {
                "H": h,
                "H_ell": build_H_ell(h, run.ell),
                "H_prime_ell": build_H_prime_ell(g, run.lp, h, run.cluster.delta_s, run.ell),
            }
            for k, t in run.trees.items():
                write_tree(t, cache / f"tree_{k}.txt")
            write_labels(build_distance_labels(run.trees["H_prime_ell"]), cache / "labels_H_prime_ell.bin")
        _timed(run, "trees", trees)
    elif enabled & {"distortion"}:
        run.trees = _cached_trees(cache)

    if "distortion" in enabled:
        def distortion():
            run.distortion, run.cdf = {}, {}
            for k, t in run.trees.items():
                pairs, label = _pairs(cfg, g)
                run.distortion[k], run.cdf[k] = report_and_cdf(g, t, pairs, sampling=label)
            run.td_bound = td_lower_bound(run.distortion["H_prime_ell"]) if run.distortion[
                "H_prime_ell"].exhaustive else None
        _timed(run, "distortion", distortion)

    if "hyperbolicity" in enabled:
        def hyper():
            budget = Budget(cfg.budget_seconds, cfg.max_component_size)
            method = "exhaustive" if cfg.exhaustive_hyperbolicity else "pruned"
            run.hyper = exact_hyperbolicity(g, budget, method)
            if cfg.histogram and g.n >= 4:
                if cfg.quad_sample:
                    run.histogram = delta_histogram(g, "sampled", k=cfg.quad_sample, seed=cfg.seed)
                else:
                    run.histogram = delta_histogram(g, "exhaustive")
            return "ok" if run.hyper.exact else "budget-partial"
        _timed(run, "hyperbolicity", hyper)

    if "tb" in enabled:
        def tb():
            run.tb = tree_breadth_bounds(g, run.lp)
        _timed(run, "tb", tb)

    if "estimate" in enabled:
        def estimate():
            exact = run.stats[2:] if run.stats else None
            run.estimate = iterated_bfs_estimate(g, 0, cfg.max_scans, exact)
        _timed(run, "estimate", estimate)
    return run


def summary_row(run: InputRun) -> list:
    """One summary record per graph; blended averages count undistorted pairs as 1."""
    n, m, diam, rad = run.stats
    cs = run.cluster
    delta = "--"
    if run.hyper is not None and run.hyper.exact:
        delta = _fmt(run.hyper.delta)
    d = run.distortion
    return [run.name, diam, rad, cs.delta_s, f"{cs.avg_diameter:.9f}", delta,
            f"{d['H'].blended_average():.5f}", f"{d['H_ell'].blended_average():.5f}",
            f"{d['H_prime_ell'].blended_average():.5f}", cs.r_s]


SUMMARY_HEADER = ["graph", "diameter", "radius", "cluster_diameter", "avg_cluster_diameter", "delta",
                  "H_avg_distortion", "H_ell_avg_distortion", "H_prime_ell_avg_distortion", "cluster_radius"]


def _tables(runs: list[InputRun], cfg: RunConfig) -> dict[str, list[list]]:
    enabled = set(cfg.analyses)
    t: dict[str, list[list]] = {}
    if "stats" in enabled:
        t["stats"] = [["graph", "n", "m", "diameter", "radius"]] + [[r.name, *r.stats] for r in runs]
    if "layering" in enabled:
        t["layering"] = [list(runs[0].cluster.CSV_HEADER)] + [
            r.cluster.csv_row(r.name, r.graph.n, r.stats[2] if r.stats else "") for r in runs]
        for r in runs:
            t[f"cluster_diameters_{r.name}"] = list(csv.reader(io.StringIO(r.cluster.histogram_csv())))
    if "trees" in enabled:
        t["trees"] = [["graph", "source", "ell", "cluster_diameter", "clusters", "steiner_points",
                       "H_ell_edge_weight", "H_prime_ell_edge_weight"]] + [
            [r.name, r.source, r.ell, r.cluster.delta_s, r.lp.cluster_count, r.trees["H_prime_ell"].steiner_count,
             _fmt(r.trees["H_ell"].weight_times_two / 2), _fmt(r.trees["H_prime_ell"].weight_times_two / 2)]
            for r in runs]
    if "distortion" in enabled:
        t["distortion_H"] = [list(DistortionReport.H_HEADER)] + [r.distortion["H"].h_row(r.name) for r in runs]
        t["distortion_weighted"] = [list(DistortionReport.WEIGHTED_HEADER)] + [
            r.distortion[k].weighted_row(r.name) for r in runs for k in ("H_ell", "H_prime_ell")]
        first = runs[0].cdf["H"]
        t["distortion_cdf"] = [["graph", "tree"] + first.header()[1:]] + [
            [r.name, k] + r.cdf[k].row(r.name)[1:] for r in runs for k in ("H", "H_ell", "H_prime_ell")]
        t["td_bound"] = [["graph", "max_distortion_H_prime_ell", "td_lower_bound", "sampling"]] + [
            [r.name, _fmt(r.distortion["H_prime_ell"].max_distortion_right or 1),
             "--" if r.td_bound is None else _fmt(float(r.td_bound)), r.distortion["H_prime_ell"].sampling]
            for r in runs]
    if "hyperbolicity" in enabled:
        t["hyperbolicity"] = [["graph", "n", "m", "delta", "evaluation", "witness"]] + [
            [r.name, r.graph.n, r.graph.m, _fmt(r.hyper.delta), r.hyper.evaluation,
             " ".join(map(str, r.hyper.witness_quadruplet or ()))] for r in runs]
        if cfg.histogram:
            rows = [["graph", "delta", "relative_frequency"]]
            for r in runs:
                for dlt, f in sorted((r.histogram or {}).items()):
                    rows.append([r.name, _fmt(dlt), f"{f:.6f}"])
            t["delta_histogram"] = rows
    if "tb" in enabled:
        t["tb"] = [list(TbBoundsReport.CSV_HEADER)] + [r.tb.csv_row(r.name) for r in runs]
    if "estimate" in enabled:
        t["estimate"] = [list(EstimationResult.CSV_HEADER)] + [r.estimate.csv_row(r.name) for r in runs]
    if "summary" in enabled:
        t["summary"] = [SUMMARY_HEADER] + [summary_row(r) for r in runs]
    return t


def _csv_text(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def markdown_table(rows: list[list]) -> str:
    head, *body = rows
    lines = ["| " + " | ".join(map(str, head)) + " |", "|" + "---|" * len(head)]
    lines += ["| " + " | ".join(map(str, r)) + " |" for r in body]
    return "\n".join(lines) + "\n"


def run_pipeline(cfg: RunConfig) -> ReportBundle:
    """Validate, run the enabled analyses in dependency order, write tables and manifest."""
    loaded = validate(cfg)
    runs = [_analyze(cfg, path, g, s) for path, g, s in loaded]
    tables = _tables(runs, cfg)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, rows in tables.items():
        (out / f"{name}.csv").write_text(_csv_text(rows))
        if cfg.fmt == "markdown":
            (out / f"{name}.md").write_text(markdown_table(rows))
    manifest = {
        "tool": "treelike",
        "version": __version__,
        "cache_version": CACHE_VERSION,
        "config": {k: v for k, v in asdict(cfg).items() if k not in ("out_dir", "cache_dir")},
        "inputs": [
            {"path": path, "name": r.name, "graph_hash": r.graph.content_hash(), "n": r.graph.n,
             "m": r.graph.m, "source": r.source, "status": r.status}
            for (path, _, _), r in zip(loaded, runs)
        ],
        "tables": sorted(f"{k}.csv" for k in tables),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    # wall times differ between runs, so they live apart from the reproducible files
    timings = {r.name: r.seconds for r in runs}
    (out / "timings.json").write_text(json.dumps(timings, indent=2, sort_keys=True) + "\n")
    return ReportBundle(out, tables, manifest, runs)
