"""Diameter and radius estimates from a few BFS scans."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph


@dataclass(frozen=True)
class EstimationResult:
    """Iterated-BFS estimate.

    ``scan_endpoints[i]`` is where scan i+1 starts; ``scan_distances[i]`` is
    the eccentricity found by that scan. ``scans_needed`` is the number of
    scans after which the final diameter estimate was first reached (never
    below 2, the double sweep); ``scans_used`` counts every scan run.
    """

    start_vertex: int
    scan_endpoints: tuple[int, ...]
    scan_distances: tuple[int, ...]
    estimated_diameter: int
    scans_used: int
    scans_needed: int
    diameter_pair: tuple[int, int]
    middle_vertex: int
    estimated_radius: int
    exact_diameter: int | None = None
    exact_radius: int | None = None

    CSV_HEADER = ("graph", "diam", "rad", "scans", "middle_vertex_ecc")

    def csv_row(self, name: str) -> list:
        fmt = lambda x: "--" if x is None else x  # noqa: E731
        return [name, fmt(self.exact_diameter), fmt(self.exact_radius), self.scans_needed, self.estimated_radius]


def _scan(g: Graph, v: int, dist, parent, queue):
    dist.fill(-1)
    _kernels.bfs_row_parents(g.indptr, g.indices, v, dist, parent, queue)
    if np.any(dist < 0):
        raise ValueError("graph is not connected")
    ecc = int(dist.max())
    return ecc, int(np.flatnonzero(dist == ecc)[0])


def iterated_bfs_estimate(g: Graph, start: int = 0, max_scans: int = 8,
                          exact: tuple[int, int] | None = None) -> EstimationResult:
    """BFS from ``start``, then repeatedly from the smallest-id farthest vertex.

    Stops once a scan fails to increase the distance, or after ``max_scans``.
    ``exact`` optionally attaches the true (diam, rad) for comparison.
    """
    if max_scans < 2:
        raise ValueError("max_scans must be at least 2")
    if not 0 <= start < g.n:
        raise IndexError(f"start vertex {start} out of range")
    dist = np.empty(g.n, dtype=np.int32)
    parent = np.empty(g.n, dtype=np.int32)
    queue = np.empty(g.n, dtype=np.int32)
    endpoints = [start]
    dists: list[int] = []
    while len(dists) < max_scans:
        ecc, far = _scan(g, endpoints[-1], dist, parent, queue)
        if dists and ecc <= dists[-1]:
            dists.append(ecc)
            endpoints.append(far)
            break
        dists.append(ecc)
        endpoints.append(far)
    best = max(dists)
    i = dists.index(best)
    a, b = endpoints[i], endpoints[i + 1]
    # rebuild the parent links of the best scan and walk back from b
    _scan(g, a, dist, parent, queue)
    path = [b]
    while path[-1] != a:
        path.append(int(parent[path[-1]]))
    path.reverse()
    mid = path[(len(path) - 1) // 2]  # floor(len/2)-th vertex counted from a
    mid_ecc, _ = _scan(g, mid, dist, parent, queue)
    return EstimationResult(
        start_vertex=start,
        scan_endpoints=tuple(endpoints),
        scan_distances=tuple(dists),
        estimated_diameter=best,
        scans_used=len(dists),
        scans_needed=max(2, i + 1),
        diameter_pair=(a, b),
        middle_vertex=mid,
        estimated_radius=mid_ecc,
        exact_diameter=None if exact is None else int(exact[0]),
        exact_radius=None if exact is None else int(exact[1]),
    )


@dataclass(frozen=True)
class GuaranteeCheck:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def estimation_guarantee_check(res: EstimationResult, delta_half: int, diam: int, rad: int) -> GuaranteeCheck:
    """Check the two-scan estimate against the hyperbolicity envelopes.

    With d = d(v, w) after two scans: d >= diam - 2 delta and
    rad <= floor((d + 1) / 2) + 3 delta. Works in half-units.
    """
    if len(res.scan_distances) < 2:
        raise ValueError("need at least two scans")
    d = max(res.scan_distances[:2])
    bad = []
    if 2 * d < 2 * diam - 2 * delta_half:
        bad.append(f"two-scan distance {d} < diam {diam} - 2*delta")
    if 2 * rad > 2 * ((d + 1) // 2) + 3 * delta_half:
        bad.append(f"rad {rad} > floor(({d}+1)/2) + 3*delta")
    if res.estimated_diameter > diam:
        bad.append("estimated diameter exceeds diam")
    if res.estimated_radius < rad:
        bad.append("estimated radius below rad")
    return GuaranteeCheck(not bad, tuple(bad))
