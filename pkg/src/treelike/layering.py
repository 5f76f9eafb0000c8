"""Layering partition LP(G, s), its layering tree, and cluster statistics."""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graph import Graph, bfs_distances


@dataclass(eq=False)
class LayeringPartition:
    """Clusters of each BFS layer from ``source``.

    Cluster ids are ordered by (layer, smallest member). Cluster 0 is the
    root ``{source}``; ``parent_cluster[c]`` is the unique adjacent cluster in
    the previous layer (-1 for the root), so the parent links describe the
    layering tree.
    """

    source: int
    layer_of: np.ndarray
    cluster_of: np.ndarray
    clusters: list[np.ndarray]
    cluster_layer: np.ndarray
    parent_cluster: np.ndarray
    _metrics: tuple | None = field(default=None, repr=False)

    @property
    def cluster_count(self) -> int:
        return len(self.clusters)

    @property
    def depth(self) -> int:
        return int(self.layer_of.max())

    def tree_edges(self) -> list[tuple[int, int]]:
        return [(int(p), c) for c, p in enumerate(self.parent_cluster.tolist()) if p >= 0]


def build_layering_partition(g: Graph, s: int) -> LayeringPartition:
    """Layer by BFS from ``s``; split each layer into clusters.

    Two vertices of layer i share a cluster iff they are joined by a path
    through vertices at distance >= i from ``s``. Computed with a union-find
    that absorbs layers deepest-first.
    """
    layer = bfs_distances(g, s)
    if np.any(layer < 0):
        raise ValueError("layering partition needs a connected graph")
    order = np.lexsort((np.arange(g.n), -layer)).astype(np.int32)
    tag = _kernels.layering_clusters(g.indptr, g.indices, layer, order)

    # tag identifies the component of G[layer >= i]; relabel each group by its
    # smallest member so ids sort by (layer, smallest member).
    keys = layer.astype(np.int64) * g.n + tag
    _, group = np.unique(keys, return_inverse=True)
    first = np.full(group.max() + 1, g.n, dtype=np.int64)
    np.minimum.at(first, group, np.arange(g.n))
    uniq, cluster_of = np.unique(layer.astype(np.int64) * g.n + first[group], return_inverse=True)
    cluster_of = cluster_of.astype(np.int32).reshape(-1)
    k = len(uniq)
    members_order = np.argsort(cluster_of, kind="stable")
    bounds = np.searchsorted(cluster_of[members_order], np.arange(k + 1))
    clusters = [members_order[bounds[c]:bounds[c + 1]].astype(np.int32) for c in range(k)]
    cluster_layer = (uniq // g.n).astype(np.int32)

    parent = np.full(k, -1, dtype=np.int32)
    for c in range(1, k):
        v = clusters[c][0]
        lv = layer[v]
        for w in g.neighbors(v):
            if layer[w] == lv - 1:
                parent[c] = cluster_of[w]
                break
    return LayeringPartition(s, layer, cluster_of, clusters, cluster_layer, parent)


def _cluster_metrics(g: Graph, lp: LayeringPartition):
    """Per-cluster (diameter, radius, center) computed once and memoized."""
    if lp._metrics is None:
        k = lp.cluster_count
        diam = np.zeros(k, dtype=np.int32)
        rad = np.zeros(k, dtype=np.int32)
        center = np.array([c[0] for c in lp.clusters], dtype=np.int32)
        dist = np.empty(g.n, dtype=np.int32)
        queue = np.empty(g.n, dtype=np.int32)
        running = np.empty(g.n, dtype=np.int32)
        for c, members in enumerate(lp.clusters):
            if len(members) == 1:
                continue
            diam[c], rad[c], center[c] = _kernels.set_cover_radius(
                g.indptr, g.indices, members, dist, queue, running
            )
        lp._metrics = (diam, rad, center)
    return lp._metrics


def cluster_diameter(g: Graph, lp: LayeringPartition) -> tuple[int, np.ndarray]:
    """Cluster-diameter and per-cluster diameters, measured with d_G."""
    diam, _, _ = _cluster_metrics(g, lp)
    return int(diam.max()), diam


def cluster_radius(g: Graph, lp: LayeringPartition) -> tuple[int, np.ndarray, np.ndarray]:
    """Cluster-radius, per-cluster covering radii and their centers.

    A center can lie outside its cluster.
    """
    _, rad, center = _cluster_metrics(g, lp)
    return int(rad.max()), rad, center


@dataclass(frozen=True)
class ClusterStats:
    source: int
    cluster_count: int
    cluster_diameters: np.ndarray
    cluster_radii: np.ndarray
    delta_s: int
    r_s: int
    avg_diameter: float
    clique_fraction: float
    diameter_histogram: dict[int, int]

    CSV_HEADER = ("graph", "n", "diameter", "clusters", "cluster_diameter",
                  "avg_cluster_diameter", "clique_percent", "cluster_radius", "source")

    def csv_row(self, name: str, n: int, diameter: int | str = "") -> list:
        return [name, n, diameter, self.cluster_count, self.delta_s,
                f"{self.avg_diameter:.9f}", f"{100 * self.clique_fraction:.8f}", self.r_s, self.source]

    def histogram_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["diameter", "frequency", "relative_frequency"])
        for d in range(self.delta_s + 1):
            f = self.diameter_histogram.get(d, 0)
            w.writerow([d, f, f"{f / self.cluster_count:.4f}"])
        return buf.getvalue()


def cluster_stats(g: Graph, lp: LayeringPartition) -> ClusterStats:
    delta_s, diam = cluster_diameter(g, lp)
    r_s, rad, _ = cluster_radius(g, lp)
    hist = Counter(diam.tolist())
    return ClusterStats(
        source=lp.source,
        cluster_count=lp.cluster_count,
        cluster_diameters=diam,
        cluster_radii=rad,
        delta_s=delta_s,
        r_s=r_s,
        avg_diameter=float(diam.mean()),
        clique_fraction=float(np.count_nonzero(diam <= 1) / len(diam)),
        diameter_histogram=dict(sorted(hist.items())),
    )


def cluster_parameters_over_sources(g: Graph, sources=None) -> tuple[int, int, int, int]:
    """Minimum cluster-diameter and cluster-radius over a set of start vertices.

    With ``sources=None`` every vertex is tried, which gives Delta(G) and
    R(G) exactly; that costs one partition plus cluster metrics per vertex.
    Returns (Delta, argmin s, R, argmin s).
    """
    if sources is None:
        sources = range(g.n)
    best_d = best_r = None
    arg_d = arg_r = -1
    for s in sources:
        lp = build_layering_partition(g, int(s))
        d, _ = cluster_diameter(g, lp)
        r, _, _ = cluster_radius(g, lp)
        if best_d is None or d < best_d:
            best_d, arg_d = d, int(s)
        if best_r is None or r < best_r:
            best_r, arg_r = r, int(s)
    return best_d, arg_d, best_r, arg_r
