"""Tree-decompositions built from a layering partition, their validity, breadth and length."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph
from .layering import LayeringPartition, cluster_radius


@dataclass(frozen=True)
class TreeDecomposition:
    bags: list[np.ndarray]
    tree_edges: list[tuple[int, int]]
    provenance: str = "external"

    @property
    def bag_count(self) -> int:
        return len(self.bags)


@dataclass(frozen=True)
class Verification:
    """Outcome of a validity check.

    ``condition`` names the first failed requirement: "tree" (the bag graph
    is not a tree), 1 (vertex coverage), 2 (edge coverage) or 3 (the bags
    holding a vertex are not connected). ``witness`` is the offending vertex
    or edge.
    """

    ok: bool
    condition: int | str | None = None
    witness: tuple | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class BreadthLength:
    breadth: int
    length: int
    bag_radius: np.ndarray
    bag_diameter: np.ndarray
    bag_center: np.ndarray


@dataclass(frozen=True)
class TbBoundsReport:
    source: int
    r_s: int
    lower_bound: int
    upper_bound: int
    length: int

    CSV_HEADER = ("graph", "R_s", "lower", "upper")

    def csv_row(self, name: str) -> list:
        return [name, self.r_s, self.lower_bound, self.upper_bound]


def layering_tree_decomposition(lp: LayeringPartition) -> TreeDecomposition:
    """The layering tree itself, clusters as bags (misses inter-layer edges)."""
    return TreeDecomposition([c.copy() for c in lp.clusters], lp.tree_edges(), "gamma")


def build_gamma_prime(g: Graph, lp: LayeringPartition) -> TreeDecomposition:
    """Grow each cluster by the parent-cluster vertices adjacent to it.

    Same tree shape as the layering tree; one pass over the edges.
    """
    extra: list[set[int]] = [set() for _ in range(lp.cluster_count)]
    layer, cof = lp.layer_of, lp.cluster_of
    for u, v in g.edges():
        if layer[u] == layer[v]:
            continue
        lo, hi = (u, v) if layer[u] < layer[v] else (v, u)
        extra[cof[hi]].add(int(lo))
    bags = []
    for c, members in enumerate(lp.clusters):
        bags.append(np.union1d(members, np.fromiter(extra[c], dtype=np.int64, count=len(extra[c]))).astype(np.int32))
    return TreeDecomposition(bags, lp.tree_edges(), "gamma_prime")


def _is_tree(k: int, edges) -> bool:
    if len(edges) != k - 1:
        return False
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def verify_tree_decomposition(g: Graph, td: TreeDecomposition) -> Verification:
    """Check the bag tree, vertex coverage, edge coverage and the subtree condition."""
    k = td.bag_count
    if k == 0 or not _is_tree(k, td.tree_edges):
        return Verification(False, "tree", None, "bag adjacency is not a tree")
    holders: list[list[int]] = [[] for _ in range(g.n)]
    for i, bag in enumerate(td.bags):
        for v in bag.tolist():
            if not 0 <= v < g.n:
                return Verification(False, 1, (v,), f"bag {i} holds unknown vertex {v}")
            holders[v].append(i)
    for v in range(g.n):
        if not holders[v]:
            return Verification(False, 1, (v,), f"vertex {v} is in no bag")
    bag_sets = [set(b.tolist()) for b in td.bags]
    for u, v in g.edges().tolist():
        a, b = (u, v) if len(holders[u]) <= len(holders[v]) else (v, u)
        if not any(b in bag_sets[i] for i in holders[a]):
            return Verification(False, 2, (u, v), f"edge {u}-{v} is in no bag")
    # inside a tree, the bags holding v are connected iff they span |bags|-1 tree edges
    inner = np.zeros(g.n, dtype=np.int64)
    for i, j in td.tree_edges:
        for v in bag_sets[i] & bag_sets[j]:
            inner[v] += 1
    for v in range(g.n):
        if inner[v] != len(holders[v]) - 1:
            return Verification(False, 3, (v,), f"bags holding vertex {v} are not connected")
    return Verification(True)


def decomposition_breadth_length(g: Graph, td: TreeDecomposition) -> BreadthLength:
    """Per-bag covering radius (center anywhere in V) and G-diameter, with maxima."""
    check = verify_tree_decomposition(g, td)
    if not check:
        raise ValueError(f"invalid tree-decomposition: {check.message}")
    k = td.bag_count
    rad = np.zeros(k, dtype=np.int32)
    diam = np.zeros(k, dtype=np.int32)
    center = np.zeros(k, dtype=np.int32)
    dist = np.empty(g.n, dtype=np.int32)
    queue = np.empty(g.n, dtype=np.int32)
    running = np.empty(g.n, dtype=np.int32)
    for i, bag in enumerate(td.bags):
        diam[i], rad[i], center[i] = _kernels.set_cover_radius(
            g.indptr, g.indices, np.asarray(bag, dtype=np.int32), dist, queue, running
        )
    return BreadthLength(int(rad.max()), int(diam.max()), rad, diam, center)


def tree_breadth_bounds(g: Graph, lp: LayeringPartition) -> TbBoundsReport:
    """ceil(R_s / 3) <= tb(G) <= breadth of the grown layering tree."""
    r_s, _, _ = cluster_radius(g, lp)
    bl = decomposition_breadth_length(g, build_gamma_prime(g, lp))
    return TbBoundsReport(lp.source, r_s, -(-r_s // 3), bl.breadth, bl.length)
