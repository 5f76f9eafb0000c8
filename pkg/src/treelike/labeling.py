"""Distance labels for embedding trees via recursive centroid decomposition.

Each node stores, for every centroid above it in the decomposition, the
triple (level, centroid, distance). Two labels share a prefix of centroids;
the tree distance is the smallest sum of distances over that prefix.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .trees import EmbeddingTree

_HEADER = struct.Struct("<4sII")
_ENTRY = struct.Struct("<BII")
_MAGIC = b"TLDL"


@dataclass(frozen=True)
class Label:
    node: int
    levels: tuple[int, ...]
    centroids: tuple[int, ...]
    distances: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.levels)


@dataclass(eq=False)
class DistanceLabeling:
    """Dense label table: ``centroid[v, l]`` and ``dist[v, l]`` per level.

    Unused trailing levels hold centroid -1. Distances are half-units.
    """

    centroid: np.ndarray
    dist: np.ndarray
    length: np.ndarray

    @property
    def node_count(self) -> int:
        return self.centroid.shape[0]

    @property
    def max_length(self) -> int:
        return int(self.length.max())

    def label(self, v: int) -> Label:
        k = int(self.length[v])
        return Label(v, tuple(range(k)), tuple(self.centroid[v, :k].tolist()), tuple(self.dist[v, :k].tolist()))

    def query(self, us, vs) -> np.ndarray:
        """Vectorized label queries (half-units)."""
        u = np.asarray(us, dtype=np.int64)
        v = np.asarray(vs, dtype=np.int64)
        cu, cv = self.centroid[u], self.centroid[v]
        shared = (cu == cv) & (cu >= 0)
        total = np.where(shared, self.dist[u] + self.dist[v], np.iinfo(np.int64).max)
        return total.min(axis=-1)


def label_query(a: Label, b: Label) -> int:
    """Tree distance recovered from two labels alone."""
    best = None
    for ca, cb, da, db in zip(a.centroids, b.centroids, a.distances, b.distances):
        if ca != cb:
            break
        if best is None or da + db < best:
            best = da + db
    if best is None:
        raise ValueError("labels share no centroid; were they built on the same tree?")
    return best


def build_distance_labels(t: EmbeddingTree) -> DistanceLabeling:
    """Centroid decomposition of ``t``; O(N log N) label entries."""
    indptr, indices = t.adjacency
    indptr = indptr.tolist()
    indices = indices.tolist()
    n = t.node_count
    max_levels = max(1, n.bit_length())
    centroid = np.full((n, max_levels), -1, dtype=np.int64)
    dist = np.zeros((n, max_levels), dtype=np.int64)
    length = np.zeros(n, dtype=np.int32)
    removed = [False] * n
    size = [0] * n
    w2 = t.weight_times_two

    pending = [(0 if n else -1, 0)]
    while pending:
        start, level = pending.pop()
        if start < 0:
            continue
        # collect the component containing start, in BFS order
        comp = [start]
        par = {start: -1}
        i = 0
        while i < len(comp):
            x = comp[i]
            i += 1
            for k in range(indptr[x], indptr[x + 1]):
                y = indices[k]
                if not removed[y] and y != par[x]:
                    par[y] = x
                    comp.append(y)
        for x in reversed(comp):
            size[x] = 1
        for x in reversed(comp):
            if par[x] >= 0:
                size[par[x]] += size[x]
        total = len(comp)
        c = start
        while True:
            heavier = -1
            for k in range(indptr[c], indptr[c + 1]):
                y = indices[k]
                if not removed[y] and y != par[c] and size[y] > total // 2:
                    heavier = y
                    break
            if heavier < 0:
                break
            c = heavier
        # distances from the centroid within the component
        frontier = [c]
        seen = {c: 0}
        j = 0
        while j < len(frontier):
            x = frontier[j]
            j += 1
            centroid[x, level] = c
            dist[x, level] = seen[x] * w2
            length[x] = level + 1
            for k in range(indptr[x], indptr[x + 1]):
                y = indices[k]
                if not removed[y] and y not in seen:
                    seen[y] = seen[x] + 1
                    frontier.append(y)
        removed[c] = True
        for k in range(indptr[c], indptr[c + 1]):
            y = indices[k]
            if not removed[y]:
                pending.append((y, level + 1))
    used = int(length.max()) if n else 0
    return DistanceLabeling(centroid[:, :used].copy(), dist[:, :used].copy(), length)


def write_labels(labeling: DistanceLabeling, path) -> None:
    """Binary file: header, then per node a length byte and its entries.

    Entry layout is little-endian (level u8, centroid u32, distance u32).
    """
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, labeling.node_count, labeling.max_length))
        for v in range(labeling.node_count):
            k = int(labeling.length[v])
            fh.write(bytes([k]))
            for lev in range(k):
                fh.write(_ENTRY.pack(lev, int(labeling.centroid[v, lev]), int(labeling.dist[v, lev])))


def read_labels(path) -> DistanceLabeling:
    with open(path, "rb") as fh:
        data = fh.read()
    magic, n, width = _HEADER.unpack_from(data, 0)
    if magic != _MAGIC:
        raise ValueError("not a treelike label file")
    centroid = np.full((n, width), -1, dtype=np.int64)
    dist = np.zeros((n, width), dtype=np.int64)
    length = np.zeros(n, dtype=np.int32)
    off = _HEADER.size
    for v in range(n):
        k = data[off]
        off += 1
        length[v] = k
        for _ in range(k):
            lev, c, d = _ENTRY.unpack_from(data, off)
            off += _ENTRY.size
            centroid[v, lev] = c
            dist[v, lev] = d
    return DistanceLabeling(centroid, dist, length)
