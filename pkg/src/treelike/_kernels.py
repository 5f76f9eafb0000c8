"""Compiled inner loops shared by the analysis modules.

Everything here works on a CSR adjacency (``indptr``, ``indices``) with
neighbor lists sorted ascending, so traversal order is deterministic.
"""
from __future__ import annotations

import warnings

import numpy as np
from numba import njit, prange

# an old system TBB only means numba falls back to another threading layer
warnings.filterwarnings("ignore", message="The TBB threading layer")

UNREACHED = -1


@njit(cache=True)
def bfs_row(indptr, indices, source, dist, queue):
    """Fill ``dist`` with hop distances from ``source``; return the visit count.

    ``dist`` must be pre-filled with -1. ``queue`` receives the visit order.
    """
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = du
                queue[tail] = w
                tail += 1
    return tail


@njit(cache=True)
def bfs_row_parents(indptr, indices, source, dist, parent, queue):
    dist[source] = 0
    parent[source] = -1
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = du
                parent[w] = u
                queue[tail] = w
                tail += 1
    return tail


@njit(cache=True)
def bfs_until_targets(indptr, indices, source, is_target, n_targets, dist, queue):
    """BFS that stops once every marked target has been reached.

    Returns the largest distance to a target. Entries of ``dist`` touched by
    the search are reset to -1 before returning so the buffer can be reused.
    """
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    found = 0
    far = 0
    if is_target[source]:
        found = 1
    while head < tail and found < n_targets:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = du
                queue[tail] = w
                tail += 1
                if is_target[w]:
                    found += 1
                    if du > far:
                        far = du
    for i in range(tail):
        dist[queue[i]] = -1
    return far


@njit(cache=True, parallel=True)
def all_eccentricities(indptr, indices):
    n = indptr.shape[0] - 1
    ecc = np.empty(n, dtype=np.int32)
    for s in prange(n):
        dist = np.full(n, -1, dtype=np.int32)
        queue = np.empty(n, dtype=np.int32)
        tail = bfs_row(indptr, indices, s, dist, queue)
        ecc[s] = dist[queue[tail - 1]]
    return ecc


@njit(cache=True, parallel=True)
def distance_matrix(indptr, indices):
    """All-pairs hop distances in 16-bit cells (-1 where unreachable)."""
    n = indptr.shape[0] - 1
    out = np.empty((n, n), dtype=np.int16)
    for s in prange(n):
        dist = np.full(n, -1, dtype=np.int32)
        queue = np.empty(n, dtype=np.int32)
        bfs_row(indptr, indices, s, dist, queue)
        for v in range(n):
            out[s, v] = dist[v]
    return out


@njit(cache=True)
def layering_clusters(indptr, indices, layer, order):
    """Union-find sweep adding vertices in order of decreasing layer.

    ``order`` lists vertices sorted by layer descending. Returns the
    union-find root of each vertex taken right after its own layer was
    merged, which identifies its cluster within that layer.
    """
    n = layer.shape[0]
    uf = np.arange(n, dtype=np.int32)
    added = np.zeros(n, dtype=np.bool_)
    tag = np.empty(n, dtype=np.int32)
    i = 0
    while i < n:
        lev = layer[order[i]]
        j = i
        while j < n and layer[order[j]] == lev:
            v = order[j]
            added[v] = True
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if added[w]:
                    a = v
                    while uf[a] != a:
                        uf[a] = uf[uf[a]]
                        a = uf[a]
                    b = w
                    while uf[b] != b:
                        uf[b] = uf[uf[b]]
                        b = uf[b]
                    if a != b:
                        if a < b:
                            uf[b] = a
                        else:
                            uf[a] = b
            j += 1
        for t in range(i, j):
            v = order[t]
            a = v
            while uf[a] != a:
                uf[a] = uf[uf[a]]
                a = uf[a]
            tag[v] = a
        i = j
    return tag


@njit(cache=True)
def set_cover_radius(indptr, indices, members, dist, queue, running):
    """Eccentricity data of a vertex set ``members`` in the whole graph.

    Returns (diameter of the set, covering radius, smallest-id center) where
    the covering radius is min over all vertices v of max over members u of
    d(u, v). ``running`` is scratch of length n.
    """
    n = indptr.shape[0] - 1
    for v in range(n):
        running[v] = 0
    diam = 0
    for t in range(members.shape[0]):
        for v in range(n):
            dist[v] = -1
        bfs_row(indptr, indices, members[t], dist, queue)
        for q in range(members.shape[0]):
            d = dist[members[q]]
            if d > diam:
                diam = d
        for v in range(n):
            if dist[v] > running[v]:
                running[v] = dist[v]
    best = running[0]
    center = 0
    for v in range(1, n):
        if running[v] < best:
            best = running[v]
            center = v
    return diam, best, center


@njit(cache=True)
def quadruplet_delta_half(d_ab, d_cd, d_ac, d_bd, d_ad, d_bc):
    s1 = d_ab + d_cd
    s2 = d_ac + d_bd
    s3 = d_ad + d_bc
    if s1 < s2:
        s1, s2 = s2, s1
    if s2 < s3:
        s2, s3 = s3, s2
    if s1 < s2:
        s1, s2 = s2, s1
    return s1 - s2
