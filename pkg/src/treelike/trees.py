"""Canonic tree H and its uniformly weighted variants H_ell and H'_ell.

Tree distances are integers in half-units (twice the real distance) so the
half-integral edge weight of H'_ell stays exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .graph import Graph
from .layering import LayeringPartition

KINDS = ("H", "H_ell", "H_prime_ell")


@dataclass(eq=False)
class EmbeddingTree:
    """Rooted tree over the graph's vertices plus optional Steiner nodes.

    Nodes ``0..n_vertices-1`` are graph vertices; Steiner nodes follow.
    Every edge weighs ``weight_times_two / 2``.
    """

    kind: str
    parent: np.ndarray
    root: int
    n_vertices: int
    weight_times_two: int = 2
    steiner: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown tree kind {self.kind!r}")
        if self.weight_times_two < 1:
            raise ValueError("edge weight must be positive")
        if self.steiner is None:
            self.steiner = np.zeros(len(self.parent), dtype=bool)

    @property
    def node_count(self) -> int:
        return len(self.parent)

    @property
    def steiner_count(self) -> int:
        return int(self.steiner.sum())

    def edges(self) -> np.ndarray:
        child = np.flatnonzero(self.parent >= 0)
        return np.column_stack([self.parent[child], child])

    @cached_property
    def adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """Undirected CSR adjacency of the tree topology."""
        e = self.edges()
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((cols, rows))
        indptr = np.zeros(self.node_count + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        np.cumsum(indptr, out=indptr)
        return indptr, cols[order].astype(np.int32)

    @cached_property
    def depth(self) -> np.ndarray:
        indptr, indices = self.adjacency
        dist = np.full(self.node_count, -1, dtype=np.int32)
        queue = np.empty(self.node_count, dtype=np.int32)
        reached = _kernels.bfs_row(indptr, indices, self.root, dist, queue)
        if reached != self.node_count:
            raise ValueError("parent links do not form a single tree")
        return dist

    @cached_property
    def _lifting(self) -> np.ndarray:
        levels = max(1, int(self.depth.max()).bit_length())
        up = np.empty((levels, self.node_count), dtype=np.int32)
        up[0] = np.where(self.parent >= 0, self.parent, np.arange(self.node_count))
        for k in range(1, levels):
            up[k] = up[k - 1][up[k - 1]]
        return up

    def hops(self, us, vs) -> np.ndarray:
        """Vectorized unweighted hop distances via binary-lifting LCA."""
        u = np.array(us, dtype=np.int64, ndmin=1)
        v = np.array(vs, dtype=np.int64, ndmin=1)
        depth = self.depth
        up = self._lifting
        swap = depth[u] < depth[v]
        u[swap], v[swap] = v[swap], u[swap].copy()
        diff = depth[u] - depth[v]
        a = u.copy()
        for k in range(up.shape[0]):
            bit = (diff >> k) & 1 == 1
            a[bit] = up[k][a[bit]]
        b = v.copy()
        for k in range(up.shape[0] - 1, -1, -1):
            step = up[k][a] != up[k][b]
            a[step] = up[k][a[step]]
            b[step] = up[k][b[step]]
        lca = np.where(a == b, a, up[0][a])
        return depth[u] + depth[v] - 2 * depth[lca]

    def distance_row(self, source: int) -> np.ndarray:
        """Half-unit distances from ``source`` to every node."""
        indptr, indices = self.adjacency
        dist = np.full(self.node_count, -1, dtype=np.int32)
        queue = np.empty(self.node_count, dtype=np.int32)
        _kernels.bfs_row(indptr, indices, source, dist, queue)
        return dist.astype(np.int64) * self.weight_times_two


def tree_distance(t: EmbeddingTree, u: int, v: int, allow_steiner: bool = False) -> int:
    """Tree distance between two nodes, in half-units.

    Graph-pair queries (the default) refuse Steiner nodes.
    """
    for x in (u, v):
        if not 0 <= x < t.node_count:
            raise IndexError(f"node {x} out of range")
        if not allow_steiner and t.steiner[x]:
            raise ValueError(f"node {x} is a Steiner point")
    return int(t.hops(u, v)[0]) * t.weight_times_two


def tree_distances(t: EmbeddingTree, us, vs) -> np.ndarray:
    return t.hops(us, vs) * t.weight_times_two


def build_canonic_tree(g: Graph, lp: LayeringPartition) -> EmbeddingTree:
    """Attach every cluster to its support vertex x_C.

    x_C is the smallest-id vertex of the parent cluster with a neighbor in C.
    """
    layer = lp.layer_of
    parent = np.full(g.n, -1, dtype=np.int32)
    for c in range(1, lp.cluster_count):
        members = lp.clusters[c]
        below = layer[members[0]] - 1
        support = g.n
        for v in members:
            nb = g.neighbors(v)
            nb = nb[layer[nb] == below]
            if len(nb) and nb[0] < support:
                support = nb[0]
        parent[members] = support
    return EmbeddingTree("H", parent, lp.source, g.n)


def support_vertices(h: EmbeddingTree, lp: LayeringPartition) -> np.ndarray:
    """x_C for every cluster (-1 for the root cluster)."""
    return np.array([-1] + [int(h.parent[c[0]]) for c in lp.clusters[1:]], dtype=np.int32)


def compute_ell(g: Graph, h: EmbeddingTree) -> int:
    """Largest graph distance spanned by an edge of H.

    Runs one truncated BFS per distinct support vertex.
    """
    if h.kind != "H" or h.steiner_count:
        raise ValueError("compute_ell expects the canonic tree H")
    child = np.flatnonzero(h.parent >= 0)
    sup = h.parent[child]
    order = np.argsort(sup, kind="stable")
    child, sup = child[order], sup[order]
    starts = np.flatnonzero(np.r_[True, sup[1:] != sup[:-1]])
    ends = np.r_[starts[1:], len(sup)]
    is_target = np.zeros(g.n, dtype=np.bool_)
    dist = np.full(g.n, -1, dtype=np.int32)
    queue = np.empty(g.n, dtype=np.int32)
    ell = 1
    for a, b in zip(starts, ends):
        targets = child[a:b]
        is_target[targets] = True
        far = _kernels.bfs_until_targets(g.indptr, g.indices, int(sup[a]), is_target, len(targets), dist, queue)
        is_target[targets] = False
        ell = max(ell, int(far))
    return ell


def build_H_ell(h: EmbeddingTree, ell: int) -> EmbeddingTree:
    if ell < 1:
        raise ValueError("ell must be >= 1")
    return EmbeddingTree("H_ell", h.parent.copy(), h.root, h.n_vertices, 2 * int(ell))


def build_H_prime_ell(g: Graph, lp: LayeringPartition, h: EmbeddingTree, delta_s: int, ell: int) -> EmbeddingTree:
    """Insert one Steiner point p_C per non-root cluster between C and x_C.

    All edges get weight max(delta_s, ell) / 2.
    """
    n = g.n
    k = lp.cluster_count
    parent = np.empty(n + k - 1, dtype=np.int32)
    parent[:n] = h.parent
    steiner = np.zeros(n + k - 1, dtype=bool)
    steiner[n:] = True
    for c in range(1, k):
        p = n + c - 1
        members = lp.clusters[c]
        parent[p] = h.parent[members[0]]
        parent[members] = p
    w2 = max(int(delta_s), int(ell))
    if w2 < 1:
        raise ValueError("edge weight must be positive")
    return EmbeddingTree("H_prime_ell", parent, h.root, n, w2, steiner)


def write_tree(t: EmbeddingTree, path) -> None:
    """Parent-array text file with a one-line header."""
    with open(path, "w") as fh:
        fh.write(
            f"treelike-tree kind={t.kind} nodes={t.node_count} vertices={t.n_vertices} "
            f"root={t.root} weight_times_two={t.weight_times_two} steiner={t.steiner_count}\n"
        )
        fh.write("".join(f"{p}\n" for p in t.parent.tolist()))


def read_tree(path) -> EmbeddingTree:
    with open(path) as fh:
        header = fh.readline().split()
        if not header or header[0] != "treelike-tree":
            raise ValueError("not a treelike tree file")
        meta = dict(item.split("=", 1) for item in header[1:])
        parent = np.array([int(x) for x in fh.read().split()], dtype=np.int32)
    nodes = int(meta["nodes"])
    if len(parent) != nodes:
        raise ValueError(f"expected {nodes} parent entries, found {len(parent)}")
    n = int(meta["vertices"])
    steiner = np.zeros(nodes, dtype=bool)
    steiner[n:] = True
    if int(meta["steiner"]) != nodes - n:
        raise ValueError("steiner count does not match node count")
    return EmbeddingTree(meta["kind"], parent, int(meta["root"]), n, int(meta["weight_times_two"]), steiner)
