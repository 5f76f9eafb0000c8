import itertools
import math
import random
from collections import Counter

import networkx as nx
import numpy as np
import pytest

from treelike.graph import from_edges
from treelike.hyperbolicity import (Budget, delta_histogram, delta_quadruplet, exact_hyperbolicity,
                                    histogram_counts_exhaustive, quadruplet_delta_of)
from treelike.layering import build_layering_partition, cluster_diameter

from conftest import all_pairs_nx, cycle, random_connected, random_tree, to_graph


def brute_delta_half(G):
    d = all_pairs_nx(G)
    best = 0
    for a, b, c, e in itertools.combinations(G.nodes, 4):
        s = sorted((d[a][b] + d[c][e], d[a][c] + d[b][e], d[a][e] + d[b][c]))
        best = max(best, s[2] - s[1])
    return best


def test_quadruplet_examples():
    assert delta_quadruplet(1, 1, 1, 1, 1, 1) == 0
    # C4 with u,w opposite: sums 1+1, 2+2, 1+1
    assert delta_quadruplet(1, 2, 1, 1, 2, 1) == 1
    # path 0-1-2-3 is a tree metric
    assert delta_quadruplet(1, 2, 3, 1, 2, 1) == 0


def test_c4_and_small_cases():
    assert exact_hyperbolicity(cycle(4)).delta == 1
    assert exact_hyperbolicity(cycle(6)).delta == 1
    assert exact_hyperbolicity(from_edges(3, [(0, 1), (1, 2)])).delta == 0


def test_tree_is_zero():
    for seed in range(10):
        g = to_graph(random_tree(200, seed))
        r = exact_hyperbolicity(g)
        assert r.delta == 0 and r.exact
        assert quadruplet_delta_of(g, r.witness_quadruplet) == 0


def test_pruned_equals_brute_force(rng):
    for _ in range(60):
        G = random_connected(rng, 4, 30)
        g = to_graph(G)
        r = exact_hyperbolicity(g)
        assert r.delta_half == brute_delta_half(G)
        assert r.delta_half == max(r.component_deltas)
        assert quadruplet_delta_of(g, r.witness_quadruplet) == r.delta
        assert exact_hyperbolicity(g, method="exhaustive").delta_half == r.delta_half


def test_blocks_vs_whole_graph(rng):
    for _ in range(30):
        G = random_connected(rng, 4, 30, kind="tree_plus")
        g = to_graph(G)
        from treelike.hyperbolicity import _exhaustive_max
        from treelike.graph import distance_matrix
        whole = int(_exhaustive_max(distance_matrix(g), np.zeros(4, dtype=np.int32)))
        assert exact_hyperbolicity(g).delta_half == whole


def test_grid():
    g = to_graph(nx.grid_2d_graph(6, 6))
    assert exact_hyperbolicity(g).delta == 5


def test_budget_gives_lower_bound():
    G = nx.random_geometric_graph(1500, 0.06, seed=2)
    G = G.subgraph(max(nx.connected_components(G), key=len))
    g = to_graph(G)
    full = exact_hyperbolicity(g)
    part = exact_hyperbolicity(g, Budget(seconds=1e-9))
    assert not part.exact and part.evaluation == "lower-bound"
    assert part.delta_half <= full.delta_half
    capped = exact_hyperbolicity(g, Budget(max_component_size=10))
    assert not capped.exact and capped.delta_half <= full.delta_half


def test_unknown_method(c6):
    with pytest.raises(ValueError):
        exact_hyperbolicity(c6, method="magic")


def test_delta_bounded_by_cluster_diameter(rng):
    for _ in range(30):
        G = random_connected(rng, 4, 40)
        g = to_graph(G)
        dh = exact_hyperbolicity(g).delta_half
        for s in rng.sample(range(g.n), 3):
            ds = cluster_diameter(g, build_layering_partition(g, s))[0]
            assert dh <= 2 * ds
            assert ds <= 4 + 12 * dh / 2 + 8 * (dh / 2) * math.log2(g.n)


def test_histogram_exhaustive_vs_brute(rng):
    G = random_connected(rng, 15, 25)
    g = to_graph(G)
    d = all_pairs_nx(G)
    ref = Counter()
    for a, b, c, e in itertools.combinations(range(g.n), 4):
        s = sorted((d[a][b] + d[c][e], d[a][c] + d[b][e], d[a][e] + d[b][c]))
        ref[s[2] - s[1]] += 1
    counts = histogram_counts_exhaustive(g)
    assert {h: int(c) for h, c in enumerate(counts) if c} == dict(ref)
    hist = delta_histogram(g)
    total = sum(ref.values())
    assert hist == pytest.approx({h / 2: c / total for h, c in ref.items()})


def test_histogram_tree_and_errors():
    g = to_graph(random_tree(30, 2))
    assert delta_histogram(g) == {0.0: 1.0}
    with pytest.raises(ValueError):
        delta_histogram(from_edges(3, [(0, 1), (1, 2)]))
    with pytest.raises(ValueError):
        delta_histogram(g, "sampled")


def test_sampled_histogram_within_binomial_bounds():
    r = random.Random(5)
    for _ in range(5):
        g = to_graph(random_connected(r, 40, 60))
        exact = delta_histogram(g)
        k = 200000
        seed = r.randrange(1000)
        samp = delta_histogram(g, "sampled", k=k, seed=seed)
        for key in set(exact) | set(samp):
            p, q = exact.get(key, 0), samp.get(key, 0)
            assert abs(p - q) <= 3 * math.sqrt(max(p * (1 - p), 1e-12) / k) + 1e-9
        assert samp == delta_histogram(g, "sampled", k=k, seed=seed)
