"""Distortion of a graph metric embedded into an H-family tree."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _kernels
from .graph import Graph
from .trees import EmbeddingTree, tree_distances

DEFAULT_THRESHOLDS = (Fraction(6, 5), Fraction(13, 10), Fraction(3, 2), Fraction(2), Fraction(11, 5))


def _frac_max(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


@dataclass
class _Accumulator:
    thresholds: tuple[Fraction, ...]
    pairs: int = 0
    left: int = 0
    right: int = 0
    equal: int = 0
    sum_left: float = 0.0
    sum_right: float = 0.0
    sum_rel: float = 0.0
    sum_tree_half: int = 0
    sum_graph: int = 0
    max_left: Fraction | None = None
    max_right: Fraction | None = None
    below: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.below:
            self.below = [0] * len(self.thresholds)

    def add(self, dg: np.ndarray, dt2: np.ndarray) -> None:
        """Fold one batch of graph distances and half-unit tree distances."""
        dg = dg.astype(np.int64)
        dt2 = dt2.astype(np.int64)
        if np.any(dg <= 0):
            raise ValueError("pairs must be distinct vertices of a connected graph")
        g2 = 2 * dg
        right = dt2 > g2
        left = dt2 < g2
        self.pairs += len(dg)
        nr, nl = int(right.sum()), int(left.sum())
        self.right += nr
        self.left += nl
        self.equal += len(dg) - nr - nl
        if nr:
            r = dt2[right] / g2[right]
            self.sum_right += float(r.sum())
            i = int(np.argmax(r))
            self.max_right = _frac_max(self.max_right, Fraction(int(dt2[right][i]), int(g2[right][i])))
        if nl:
            r = g2[left] / dt2[left]
            self.sum_left += float(r.sum())
            i = int(np.argmax(r))
            self.max_left = _frac_max(self.max_left, Fraction(int(g2[left][i]), int(dt2[left][i])))
        self.sum_rel += float((np.abs(dt2 - g2) / g2).sum())
        self.sum_tree_half += int(dt2.sum())
        self.sum_graph += int(dg.sum())
        hi = np.maximum(dt2, g2)
        lo = np.minimum(dt2, g2)
        for j, eps in enumerate(self.thresholds):
            self.below[j] += int(np.count_nonzero(hi * eps.denominator < lo * eps.numerator))

    def merge(self, other: _Accumulator) -> _Accumulator:
        out = _Accumulator(self.thresholds)
        for name in ("pairs", "left", "right", "equal", "sum_left", "sum_right", "sum_rel",
                     "sum_tree_half", "sum_graph"):
            setattr(out, name, getattr(self, name) + getattr(other, name))
        out.max_left = _frac_max(self.max_left, other.max_left)
        out.max_right = _frac_max(self.max_right, other.max_right)
        out.below = [a + b for a, b in zip(self.below, other.below)]
        return out


@dataclass(frozen=True)
class DistortionReport:
    """The six distortion measures over one pair set.

    Maximum ratios are exact fractions. Averages over an empty class are
    ``None``.
    """

    tree_kind: str
    sampling: str
    pair_count: int
    left_count: int
    right_count: int
    equal_count: int
    max_distortion_left: Fraction | None
    max_distortion_right: Fraction | None
    avg_distortion_left: float | None
    avg_distortion_right: float | None
    avg_relative_distortion: float
    distance_weighted_avg_distortion: float
    sum_tree_distance: Fraction
    sum_graph_distance: int

    @property
    def exhaustive(self) -> bool:
        return self.sampling == "exhaustive"

    @property
    def left_pair_fraction(self) -> float:
        return self.left_count / self.pair_count

    @property
    def right_pair_fraction(self) -> float:
        return self.right_count / self.pair_count

    @property
    def equal_pair_fraction(self) -> float:
        return self.equal_count / self.pair_count

    def blended_average(self) -> float:
        """Average distortion mixing both classes, undistorted pairs counting 1."""
        total = self.equal_count
        if self.right_count:
            total += self.avg_distortion_right * self.right_count
        if self.left_count:
            total += self.avg_distortion_left * self.left_count
        return total / self.pair_count

    H_HEADER = ("graph", "avg_distortion_left", "max_distortion_left", "left_pairs_percent",
                "avg_distortion_right", "max_distortion_right", "right_pairs_percent",
                "equal_pairs_percent", "avg_relative_distortion", "distance_weighted_avg_distortion")
    WEIGHTED_HEADER = ("graph", "tree", "avg_distortion", "max_distortion",
                       "avg_relative_distortion", "distance_weighted_avg_distortion")

    def h_row(self, name: str) -> list:
        return [name, _fmt(self.avg_distortion_left), _fmt(self.max_distortion_left),
                f"{100 * self.left_pair_fraction:.2f}", _fmt(self.avg_distortion_right),
                _fmt(self.max_distortion_right), f"{100 * self.right_pair_fraction:.2f}",
                f"{100 * self.equal_pair_fraction:.2f}", _fmt(self.avg_relative_distortion),
                _fmt(self.distance_weighted_avg_distortion)]

    def weighted_row(self, name: str) -> list:
        # non-contractive trees have no left pairs; undistorted pairs count 1
        return [name, self.tree_kind, _fmt(self.blended_average()), _fmt(self.max_distortion_right or 1),
                _fmt(self.avg_relative_distortion), _fmt(self.distance_weighted_avg_distortion)]


def _fmt(x) -> str:
    if x is None:
        return "--"
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{float(x):.6g}"
    return f"{x:.6g}"


@dataclass(frozen=True)
class DistortionCDF:
    thresholds: tuple[Fraction, ...]
    exact_fraction: float
    fraction_below: tuple[float, ...]

    def row(self, name: str) -> list:
        return [name, f"{100 * self.exact_fraction:.2f}"] + [f"{100 * f:.2f}" for f in self.fraction_below]

    def header(self) -> list:
        return ["graph", "=1"] + [f"<{float(t):g}" for t in self.thresholds]


def _graph_rows_for(g: Graph, pairs: np.ndarray) -> np.ndarray:
    """Graph distances for a batch of pairs, one BFS per distinct first vertex."""
    order = np.argsort(pairs[:, 0], kind="stable")
    p = pairs[order]
    out = np.empty(len(p), dtype=np.int64)
    dist = np.empty(g.n, dtype=np.int32)
    queue = np.empty(g.n, dtype=np.int32)
    starts = np.flatnonzero(np.r_[True, p[1:, 0] != p[:-1, 0]])
    ends = np.r_[starts[1:], len(p)]
    for a, b in zip(starts, ends):
        dist.fill(-1)
        _kernels.bfs_row(g.indptr, g.indices, int(p[a, 0]), dist, queue)
        out[a:b] = dist[p[a:b, 1]]
    result = np.empty_like(out)
    result[order] = out
    return result


def _accumulate(g: Graph, t: EmbeddingTree, pairs, thresholds) -> tuple[_Accumulator, str]:
    if t.n_vertices != g.n:
        raise ValueError("tree does not span the graph's vertices")
    acc = _Accumulator(tuple(thresholds))
    if isinstance(pairs, str):
        if pairs != "all":
            raise ValueError("pairs must be 'all' or an iterable of pair batches")
        dist = np.empty(g.n, dtype=np.int32)
        queue = np.empty(g.n, dtype=np.int32)
        for u in range(g.n - 1):
            dist.fill(-1)
            _kernels.bfs_row(g.indptr, g.indices, u, dist, queue)
            trow = t.distance_row(u)
            acc.add(dist[u + 1:], trow[u + 1:g.n])
        return acc, "exhaustive"
    for batch in pairs:
        batch = np.asarray(batch, dtype=np.int64).reshape(-1, 2)
        if len(batch) == 0:
            continue
        if np.any(batch >= g.n):
            raise ValueError("pairs must range over graph vertices only")
        acc.add(_graph_rows_for(g, batch), tree_distances(t, batch[:, 0], batch[:, 1]))
    return acc, "sampled"


def _report(acc: _Accumulator, kind: str, sampling: str) -> DistortionReport:
    if acc.pairs == 0:
        raise ValueError("empty pair set")
    return DistortionReport(
        tree_kind=kind,
        sampling=sampling,
        pair_count=acc.pairs,
        left_count=acc.left,
        right_count=acc.right,
        equal_count=acc.equal,
        max_distortion_left=acc.max_left,
        max_distortion_right=acc.max_right,
        avg_distortion_left=acc.sum_left / acc.left if acc.left else None,
        avg_distortion_right=acc.sum_right / acc.right if acc.right else None,
        avg_relative_distortion=acc.sum_rel / acc.pairs,
        distance_weighted_avg_distortion=acc.sum_tree_half / (2 * acc.sum_graph),
        sum_tree_distance=Fraction(acc.sum_tree_half, 2),
        sum_graph_distance=acc.sum_graph,
    )


def distortion_report(g: Graph, t: EmbeddingTree, pairs: str | Iterable = "all",
                      sampling: str | None = None) -> DistortionReport:
    """Classify every pair as left, right or equal and fold the measures.

    ``pairs`` is ``"all"`` (exhaustive, one BFS per vertex) or an iterable of
    (b, 2) pair batches such as :func:`treelike.graph.pair_sampler` yields.
    ``sampling`` overrides the label recorded in the report.
    """
    acc, how = _accumulate(g, t, pairs, DEFAULT_THRESHOLDS)
    return _report(acc, t.kind, sampling or how)


def distortion_cdf(g: Graph, t: EmbeddingTree, pairs: str | Iterable = "all",
                   thresholds: Iterable = DEFAULT_THRESHOLDS) -> DistortionCDF:
    """Fraction of pairs whose distortion max(dT/dG, dG/dT) is below each threshold."""
    ths = tuple(sorted(Fraction(str(x)) if isinstance(x, float) else Fraction(x) for x in thresholds))
    acc, _ = _accumulate(g, t, pairs, ths)
    return DistortionCDF(ths, acc.equal / acc.pairs, tuple(b / acc.pairs for b in acc.below))


def report_and_cdf(g: Graph, t: EmbeddingTree, pairs: str | Iterable = "all",
                   sampling: str | None = None) -> tuple[DistortionReport, DistortionCDF]:
    """Both summaries from a single pass over the pairs."""
    acc, how = _accumulate(g, t, pairs, DEFAULT_THRESHOLDS)
    cdf = DistortionCDF(DEFAULT_THRESHOLDS, acc.equal / acc.pairs, tuple(b / acc.pairs for b in acc.below))
    return _report(acc, t.kind, sampling or how), cdf


def td_lower_bound(report: DistortionReport) -> Fraction:
    """Lower bound on tree-distortion from the max distortion into H'_ell.

    H'_ell is a 6-approximation, so max distortion / 6 bounds td(G) from
    below; td(G) >= 1 always.
    """
    if report.tree_kind != "H_prime_ell":
        raise ValueError("td lower bound needs a report against H'_ell")
    if not report.exhaustive:
        warnings.warn("sampled distortion gives a weaker td lower bound", stacklevel=2)
    top = report.max_distortion_right or Fraction(1)
    return max(Fraction(1), top / 6)

