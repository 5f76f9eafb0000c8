"""Gromov hyperbolicity via the four-point condition.

Values are kept in half-units: ``delta_half = S3 - S2`` for a quadruplet,
so delta = delta_half / 2 stays an exact integer.

The exact search runs per biconnected component (hyperbolicity is always
realized inside one) and only over far-apart pairs, visited in decreasing
distance order. A pair (a, b) is far-apart when no neighbor of b is farther
from a and no neighbor of a is farther from b; some maximizing quadruplet
always has both pairs of its largest distance sum far-apart, since pushing
an endpoint outward raises the largest sum by one and every other sum by at
most one. Two cut-offs keep the search short:

* if the pair being processed has distance <= the best value found, no
  quadruplet using it (or any later pair) as its largest-sum pair can do
  better, because delta_half <= min(d(a, b), d(c, d));
* a vertex v joins a quadruplet with pair (x, y) only if
  2 ecc(v) - (d(x, v) + d(y, v) - d(x, y)) > 2 best.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ._kernels import quadruplet_delta_half
from .graph import Graph, biconnected_components, distance_matrix


def delta_quadruplet(d_uv, d_uw, d_ux, d_vw, d_vx, d_wx) -> float:
    """Hyperbolicity (S3 - S2) / 2 of one quadruplet from its six distances."""
    s = sorted((d_uv + d_wx, d_uw + d_vx, d_ux + d_vw))
    return (s[2] - s[1]) / 2


@njit(cache=True)
def _far_apart_pairs(D, indptr, indices):
    n = D.shape[0]
    # local[a, b]: no neighbor of b is farther from a than b is
    local = np.ones((n, n), dtype=np.bool_)
    for a in range(n):
        for b in range(n):
            dab = D[a, b]
            for k in range(indptr[b], indptr[b + 1]):
                if D[a, indices[k]] > dab:
                    local[a, b] = False
                    break
    count = 0
    for a in range(n):
        for b in range(a + 1, n):
            if local[a, b] and local[b, a]:
                count += 1
    pa = np.empty(count, dtype=np.int32)
    pb = np.empty(count, dtype=np.int32)
    t = 0
    for a in range(n):
        for b in range(a + 1, n):
            if local[a, b] and local[b, a]:
                pa[t] = a
                pb[t] = b
                t += 1
    return pa, pb


@njit(cache=True)
def _pruned_chunk(D, ecc, pa, pb, start, stop, mate_ptr, mate_fill, mates, state, witness):
    """Process pairs[start:stop]; state = [best_half, done]. Returns next index."""
    n = D.shape[0]
    valuable = np.zeros(n, dtype=np.bool_)
    cand = np.empty(n, dtype=np.int32)
    best = state[0]
    i = start
    while i < stop:
        x = pa[i]
        y = pb[i]
        l = D[x, y]
        if l <= best:
            state[1] = 1
            break
        nc = 0
        for v in range(n):
            detour = D[x, v] + D[y, v] - l
            if 2 * ecc[v] - detour > 2 * best:
                valuable[v] = True
                cand[nc] = v
                nc += 1
        for t in range(nc):
            a = cand[t]
            for q in range(mate_ptr[a], mate_fill[a]):
                b = mates[q]
                if b > a and valuable[b]:
                    h = quadruplet_delta_half(D[x, y], D[a, b], D[x, a], D[y, b], D[x, b], D[y, a])
                    if h > best:
                        best = h
                        witness[0] = x
                        witness[1] = y
                        witness[2] = a
                        witness[3] = b
        for t in range(nc):
            valuable[cand[t]] = False
        mates[mate_fill[x]] = y
        mate_fill[x] += 1
        mates[mate_fill[y]] = x
        mate_fill[y] += 1
        i += 1
    state[0] = best
    return i


@njit(cache=True)
def _exhaustive_max(D, witness):
    n = D.shape[0]
    best = 0
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                for d in range(c + 1, n):
                    h = quadruplet_delta_half(D[a, b], D[c, d], D[a, c], D[b, d], D[a, d], D[b, c])
                    if h > best:
                        best = h
                        witness[0] = a
                        witness[1] = b
                        witness[2] = c
                        witness[3] = d
    return best


@njit(cache=True)
def _exhaustive_hist(D, counts):
    n = D.shape[0]
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                for d in range(c + 1, n):
                    counts[quadruplet_delta_half(D[a, b], D[c, d], D[a, c], D[b, d], D[a, d], D[b, c])] += 1


@njit(cache=True)
def _sampled_hist(D, quads, counts):
    for r in range(quads.shape[0]):
        a = quads[r, 0]
        b = quads[r, 1]
        c = quads[r, 2]
        d = quads[r, 3]
        counts[quadruplet_delta_half(D[a, b], D[c, d], D[a, c], D[b, d], D[a, d], D[b, c])] += 1


@dataclass(frozen=True)
class Budget:
    seconds: float | None = None
    max_component_size: int = 20000


@dataclass
class HyperbolicityResult:
    delta_half: int
    witness_quadruplet: tuple[int, int, int, int] | None
    component_deltas: list[int] = field(default_factory=list)
    evaluation: str = "pruned-exact"
    exact: bool = True
    histogram: dict[float, float] | None = None
    elapsed: float = 0.0

    @property
    def delta(self) -> float:
        return self.delta_half / 2


def _component_search(D, indptr, indices, deadline):
    """Pruned exact search on one distance matrix; returns (best, witness, finished)."""
    n = D.shape[0]
    witness = np.array([0, 1, 2, 3], dtype=np.int32)
    if n < 4:
        return 0, None, True
    pa, pb = _far_apart_pairs(D, indptr, indices)
    dist = D[pa, pb]
    order = np.lexsort((pb, pa, -dist.astype(np.int32)))
    pa, pb = pa[order], pb[order]
    ecc = D.max(axis=1).astype(np.int32)
    deg = np.bincount(np.concatenate([pa, pb]), minlength=n)
    mate_ptr = np.zeros(n, dtype=np.int64)
    mate_ptr[1:] = np.cumsum(deg)[:-1]
    mate_fill = mate_ptr.copy()
    mates = np.empty(int(deg.sum()), dtype=np.int32)
    state = np.zeros(2, dtype=np.int64)
    i = 0
    chunk = 256
    while i < len(pa) and not state[1]:
        i = _pruned_chunk(D, ecc, pa, pb, i, min(len(pa), i + chunk), mate_ptr, mate_fill, mates, state, witness)
        if deadline is not None and time.monotonic() > deadline and i < len(pa) and not state[1]:
            return int(state[0]), witness.copy(), False
    return int(state[0]), witness.copy(), True


def exact_hyperbolicity(g: Graph, budget: Budget | None = None, method: str = "pruned") -> HyperbolicityResult:
    """Exact hyperbolicity, one biconnected component at a time.

    ``method="exhaustive"`` enumerates every quadruplet of each component
    instead of pruning. When the time budget runs out or a component exceeds
    ``budget.max_component_size``, the result is the best value found so far,
    flagged ``exact=False``: a valid lower bound.
    """
    budget = budget or Budget()
    t0 = time.monotonic()
    deadline = None if budget.seconds is None else t0 + budget.seconds
    best = 0
    best_witness = None
    per_comp: list[int] = []
    exact = True
    blocks = biconnected_components(g).components
    # larger blocks first: they tend to hold the maximum, raising later cut-offs
    for block in sorted(blocks, key=len, reverse=True):
        if len(block) < 4:
            per_comp.append(0)
            continue
        if len(block) > budget.max_component_size or (deadline is not None and time.monotonic() > deadline):
            exact = False
            per_comp.append(-1)
            continue
        sub = g.subgraph(block)
        D = distance_matrix(sub)
        if method == "exhaustive":
            w = np.array([0, 1, 2, 3], dtype=np.int32)
            h = int(_exhaustive_max(D, w))
            done = True
        elif method == "pruned":
            h, w, done = _component_search(D, sub.indptr, sub.indices, deadline)
        else:
            raise ValueError(f"unknown method {method!r}")
        exact &= done
        per_comp.append(h)
        if h > best or (best_witness is None and h == best):
            best = h
            best_witness = tuple(int(block[x]) for x in w)
    # report component values in the decomposition's own order
    order = sorted(range(len(blocks)), key=lambda i: len(blocks[i]), reverse=True)
    component_deltas = [0] * len(blocks)
    for pos, i in enumerate(order):
        component_deltas[i] = per_comp[pos]
    if best_witness is None and g.n >= 4:
        best_witness = (0, 1, 2, 3)
    evaluation = ("exhaustive" if method == "exhaustive" else "pruned-exact") if exact else "lower-bound"
    return HyperbolicityResult(best, best_witness, component_deltas, evaluation, exact,
                               elapsed=time.monotonic() - t0)


def quadruplet_delta_of(g: Graph, quad) -> float:
    """Recompute delta for four vertices of ``g`` (witness checks)."""
    from .graph import bfs_distances

    u, v, w, x = quad
    du, dv, dw = bfs_distances(g, u), bfs_distances(g, v), bfs_distances(g, w)
    return delta_quadruplet(du[v], du[w], du[x], dv[w], dv[x], dw[x])


def _sample_quadruplets(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    out = np.empty((k, 4), dtype=np.int32)
    filled = 0
    while filled < k:
        want = k - filled
        q = rng.integers(0, n, size=(want + want // 4 + 16, 4))
        s = np.sort(q, axis=1)
        ok = (s[:, 0] != s[:, 1]) & (s[:, 1] != s[:, 2]) & (s[:, 2] != s[:, 3])
        q = q[ok][:want]
        out[filled:filled + len(q)] = q
        filled += len(q)
    return out


def delta_histogram(g: Graph, mode: str = "exhaustive", k: int | None = None, seed: int | None = None,
                    chunk: int = 1_000_000) -> dict[float, float]:
    """Relative frequency of quadruplet hyperbolicity over the whole graph.

    Quadruplets are 4-sets of distinct vertices, enumerated exhaustively or
    drawn uniformly ``k`` times.
    """
    if g.n < 4:
        raise ValueError("need at least four vertices")
    D = distance_matrix(g)
    counts = np.zeros(int(D.max()) + 2, dtype=np.int64)
    if mode == "exhaustive":
        _exhaustive_hist(D, counts)
    elif mode == "sampled":
        if not k or k < 1:
            raise ValueError("sampled mode needs k >= 1")
        rng = np.random.default_rng(seed)
        left = k
        while left:
            b = min(chunk, left)
            _sampled_hist(D, _sample_quadruplets(g.n, b, rng), counts)
            left -= b
    else:
        raise ValueError(f"unknown mode {mode!r}")
    total = counts.sum()
    return {h / 2: counts[h] / total for h in range(len(counts)) if counts[h]}


def histogram_counts_exhaustive(g: Graph) -> np.ndarray:
    """Raw quadruplet counts per delta_half, for exact comparisons."""
    D = distance_matrix(g)
    counts = np.zeros(int(D.max()) + 2, dtype=np.int64)
    _exhaustive_hist(D, counts)
    return counts
