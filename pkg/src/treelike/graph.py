"""Graph ingestion, canonical CSR representation and BFS primitives."""
from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import IO, Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels


class GraphFormatError(ValueError):
    """Raised for unreadable or empty edge lists."""


@dataclass(frozen=True)
class IngestionOptions:
    comment_prefixes: tuple[str, ...] = ("#", "%")
    # Some collections append weights or timestamps; take the first two tokens.
    allow_extra_columns: bool = False


@dataclass(frozen=True)
class IngestStats:
    lines: int = 0
    dropped_loops: int = 0
    dropped_duplicates: int = 0


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph in compressed adjacency form.

    Vertices are dense ids ``0..n-1``; ``labels[i]`` is the source token of
    vertex ``i``. Neighbor lists are sorted ascending.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: tuple[str, ...]
    ingest: IngestStats | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edges(self) -> np.ndarray:
        """Edges as an (m, 2) array with u < v, sorted lexicographically."""
        src = np.repeat(np.arange(self.n, dtype=np.int32), self.degree())
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return bool(np.all(bfs_distances(self, 0) >= 0))

    def subgraph(self, vertices: Sequence[int] | np.ndarray) -> Graph:
        """Induced subgraph; vertices keep their relative order."""
        keep = np.unique(np.asarray(vertices, dtype=np.int64))
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[keep] = np.arange(len(keep))
        e = self.edges()
        mask = (remap[e[:, 0]] >= 0) & (remap[e[:, 1]] >= 0)
        e = remap[e[mask]]
        return from_edges(len(keep), e, labels=tuple(self.labels[i] for i in keep))

    def content_hash(self) -> str:
        import hashlib

        h = hashlib.sha256()
        h.update(np.asarray(self.indptr, dtype=np.int64).tobytes())
        h.update(np.asarray(self.indices, dtype=np.int32).tobytes())
        return h.hexdigest()


def from_edges(n: int, edges, labels: Sequence[str] | None = None) -> Graph:
    """Build a graph from an iterable of (u, v) dense-id pairs.

    Loops and repeated edges are discarded silently; use
    :func:`parse_edge_list` when those need to be counted.
    """
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    e = e[e[:, 0] != e[:, 1]]
    if len(e) and (e.min() < 0 or e.max() >= n):
        raise ValueError("edge endpoint out of range")
    lo = np.minimum(e[:, 0], e[:, 1])
    hi = np.maximum(e[:, 0], e[:, 1])
    key = np.unique(lo * n + hi)
    lo, hi = key // n, key % n
    rows = np.concatenate([lo, hi])
    cols = np.concatenate([hi, lo])
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    np.cumsum(indptr, out=indptr)
    if labels is None:
        labels = tuple(str(i) for i in range(n))
    return Graph(indptr, cols.astype(np.int32), tuple(labels))


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    if isinstance(source, (os.PathLike,)):
        with open(source, "rb") as fh:
            return fh.read().decode("utf-8")
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def parse_edge_list(text: str | bytes | IO, options: IngestionOptions | None = None) -> Graph:
    """Parse a whitespace-separated edge list into a (possibly disconnected) graph.

    Tokens become dense ids in order of first appearance. Self-loops and
    repeated edges (in either direction) are dropped and counted in
    ``graph.ingest``.
    """
    opts = options or IngestionOptions()
    ids: dict[str, int] = {}
    us: list[int] = []
    vs: list[int] = []
    loops = 0
    nlines = 0
    for lineno, line in enumerate(io.StringIO(_read_text(text)), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(opts.comment_prefixes):
            continue
        nlines += 1
        tokens = stripped.split()
        if len(tokens) != 2 and not (opts.allow_extra_columns and len(tokens) > 2):
            raise GraphFormatError(f"line {lineno}: expected 2 tokens, got {len(tokens)}")
        a = ids.setdefault(tokens[0], len(ids))
        b = ids.setdefault(tokens[1], len(ids))
        if a == b:
            loops += 1
            continue
        us.append(a)
        vs.append(b)
    if not us:
        raise GraphFormatError("no edges")
    n = len(ids)
    lo = np.minimum(us, vs).astype(np.int64)
    hi = np.maximum(us, vs).astype(np.int64)
    unique = len(np.unique(lo * n + hi))
    g = from_edges(n, np.column_stack([lo, hi]), labels=tuple(ids))
    stats = IngestStats(lines=nlines, dropped_loops=loops, dropped_duplicates=len(us) - unique)
    return Graph(g.indptr, g.indices, g.labels, stats)


def read_edge_list(path: str | os.PathLike, options: IngestionOptions | None = None) -> Graph:
    with open(path, "rb") as fh:
        return parse_edge_list(fh.read(), options)


def format_edge_list(g: Graph) -> str:
    """Canonical text form: one ``u v`` line per edge, dense ids, sorted."""
    return "".join(f"{u} {v}\n" for u, v in g.edges().tolist())


def largest_connected_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component.

    Equal-sized components are ranked by their smallest vertex id.
    """
    if g.n == 0:
        return g
    adj = csr_matrix((np.ones(len(g.indices), dtype=np.int8), g.indices, g.indptr), shape=(g.n, g.n))
    count, comp = connected_components(adj, directed=False)
    if count == 1:
        return g
    sizes = np.bincount(comp)
    first = np.full(count, g.n, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(g.n))
    candidates = np.flatnonzero(sizes == sizes.max())
    best = int(candidates[np.argmin(first[candidates])])
    sub = g.subgraph(np.flatnonzero(comp == best))
    return Graph(sub.indptr, sub.indices, sub.labels, g.ingest)


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Hop distances from ``source`` (int32, -1 for unreachable vertices)."""
    if not 0 <= source < g.n:
        raise IndexError(f"vertex {source} out of range")
    dist = np.full(g.n, -1, dtype=np.int32)
    queue = np.empty(g.n, dtype=np.int32)
    _kernels.bfs_row(g.indptr, g.indices, source, dist, queue)
    return dist


def bfs_tree(g: Graph, source: int) -> tuple[np.ndarray, np.ndarray]:
    """Distances and BFS parent links (parent of the source is -1)."""
    dist = np.full(g.n, -1, dtype=np.int32)
    parent = np.full(g.n, -1, dtype=np.int32)
    queue = np.empty(g.n, dtype=np.int32)
    _kernels.bfs_row_parents(g.indptr, g.indices, source, dist, parent, queue)
    return dist, parent


def eccentricity(g: Graph, v: int) -> int:
    return int(bfs_distances(g, v).max())


def eccentricities(g: Graph) -> np.ndarray:
    return _kernels.all_eccentricities(g.indptr, g.indices)


def exact_diameter_radius(g: Graph) -> tuple[int, int, int]:
    """(diameter, radius, smallest-id central vertex) from a full BFS sweep."""
    if g.n == 1:
        return 0, 0, 0
    ecc = eccentricities(g)
    rad = int(ecc.min())
    return int(ecc.max()), rad, int(np.flatnonzero(ecc == rad)[0])


def distance_matrix(g: Graph) -> np.ndarray:
    """All-pairs hop distances as an n x n int16 matrix."""
    return _kernels.distance_matrix(g.indptr, g.indices)


@dataclass(frozen=True)
class ComponentDecomposition:
    kind: str
    components: list[np.ndarray]
    articulation_vertices: frozenset[int] = frozenset()


def biconnected_components(g: Graph) -> ComponentDecomposition:
    """Blocks and cut vertices via iterative lowpoint DFS.

    Components are sorted vertex arrays, ordered by smallest vertex (ties by
    the remaining members).
    """
    n = g.n
    indptr = g.indptr.tolist()
    indices = g.indices.tolist()
    disc = [-1] * n
    low = [0] * n
    cut = set()
    blocks: list[list[int]] = []
    edge_stack: list[tuple[int, int]] = []
    timer = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        # frames: (vertex, parent, next neighbor slot)
        stack = [[root, -1, indptr[root]]]
        while stack:
            frame = stack[-1]
            v, parent, k = frame
            if k < indptr[v + 1]:
                frame[2] = k + 1
                w = indices[k]
                if disc[w] < 0:
                    edge_stack.append((v, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    stack.append([w, v, indptr[w]])
                elif w != parent and disc[w] < disc[v]:
                    edge_stack.append((v, w))
                    if disc[w] < low[v]:
                        low[v] = disc[w]
                continue
            stack.pop()
            if parent < 0:
                continue
            if low[v] < low[parent]:
                low[parent] = low[v]
            if low[v] >= disc[parent]:
                if parent != root:
                    cut.add(parent)
                block = set()
                while True:
                    a, b = edge_stack.pop()
                    block.add(a)
                    block.add(b)
                    if (a, b) == (parent, v):
                        break
                blocks.append(sorted(block))
        if root_children > 1:
            cut.add(root)
    blocks.sort()
    return ComponentDecomposition(
        "biconnected", [np.asarray(b, dtype=np.int32) for b in blocks], frozenset(cut)
    )


def connected_component_list(g: Graph) -> ComponentDecomposition:
    adj = csr_matrix((np.ones(len(g.indices), dtype=np.int8), g.indices, g.indptr), shape=(g.n, g.n))
    _, comp = connected_components(adj, directed=False)
    groups = [np.flatnonzero(comp == c).astype(np.int32) for c in range(comp.max() + 1)]
    return ComponentDecomposition("connected", groups)


def pair_sampler(g: Graph, mode: str = "all", k: int | None = None, seed: int | None = None,
                 batch: int = 65536) -> Iterator[np.ndarray]:
    """Yield batches of vertex pairs as (b, 2) int arrays with u < v.

    ``mode="all"`` enumerates every unordered pair once in lexicographic
    order; ``mode="uniform"`` draws ``k`` pairs i.i.d. uniformly over
    distinct unordered pairs from ``numpy.random.default_rng(seed)``.
    """
    n = g.n
    if n < 2:
        raise ValueError("pair sampling needs at least two vertices")
    if mode == "all":
        for u in range(n - 1):
            vs = np.arange(u + 1, n, dtype=np.int32)
            yield np.column_stack([np.full(len(vs), u, dtype=np.int32), vs])
    elif mode == "uniform":
        if k is None or k < 1:
            raise ValueError("uniform sampling needs k >= 1")
        rng = np.random.default_rng(seed)
        left = k
        while left:
            b = min(batch, left)
            u = rng.integers(0, n, size=b)
            # second endpoint uniform over the other n-1 vertices
            v = rng.integers(0, n - 1, size=b)
            v = v + (v >= u)
            yield np.column_stack([np.minimum(u, v), np.maximum(u, v)]).astype(np.int32)
            left -= b
    else:
        raise ValueError(f"unknown sampling mode {mode!r}")


def iter_pairs(g: Graph, mode: str = "all", k: int | None = None, seed: int | None = None):
    """Pair-at-a-time view over :func:`pair_sampler`."""
    for chunk in pair_sampler(g, mode, k, seed):
        for u, v in chunk.tolist():
            yield u, v
