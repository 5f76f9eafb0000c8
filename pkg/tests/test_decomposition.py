import random

import networkx as nx
import numpy as np
import pytest

from treelike.decomposition import (TreeDecomposition, build_gamma_prime, decomposition_breadth_length,
                                    layering_tree_decomposition, tree_breadth_bounds, verify_tree_decomposition)
from treelike.graph import exact_diameter_radius
from treelike.layering import build_layering_partition, cluster_diameter, cluster_radius

from conftest import all_pairs_nx, path, random_chordal, random_connected, to_graph


def test_c6_gamma_prime(c6):
    lp = build_layering_partition(c6, 0)
    td = build_gamma_prime(c6, lp)
    assert [b.tolist() for b in td.bags] == [[0], [0, 1, 5], [1, 2, 4, 5], [2, 3, 4]]
    assert verify_tree_decomposition(c6, td).ok
    bl = decomposition_breadth_length(c6, td)
    assert (bl.breadth, bl.length) == (2, 3)
    assert bl.bag_radius.tolist() == [0, 1, 2, 1]
    rep = tree_breadth_bounds(c6, lp)
    assert (rep.lower_bound, rep.upper_bound, rep.r_s) == (1, 2, 1)


def test_c6_unexpanded_misses_edge(c6):
    v = verify_tree_decomposition(c6, layering_tree_decomposition(build_layering_partition(c6, 0)))
    assert not v.ok and v.condition == 2 and v.witness == (0, 1)


def test_path_gives_width_one_path_decomposition():
    g = path(5)
    td = build_gamma_prime(g, build_layering_partition(g, 0))
    assert [b.tolist() for b in td.bags] == [[0], [0, 1], [1, 2], [2, 3], [3, 4]]


def test_trivial_decomposition(rng):
    for _ in range(10):
        g = to_graph(random_connected(rng, 3, 40))
        td = TreeDecomposition([np.arange(g.n)], [])
        assert verify_tree_decomposition(g, td).ok
        bl = decomposition_breadth_length(g, td)
        diam, rad, _ = exact_diameter_radius(g)
        assert (bl.breadth, bl.length) == (rad, diam)


def test_violations_are_reported(c6):
    bags = [np.array([0, 1, 2]), np.array([2, 3, 4]), np.array([4, 5, 0])]
    assert verify_tree_decomposition(c6, TreeDecomposition(bags, [(0, 1)])).condition == "tree"
    assert verify_tree_decomposition(c6, TreeDecomposition(bags, [(0, 1), (1, 2), (2, 0)])).condition == "tree"
    v = verify_tree_decomposition(c6, TreeDecomposition(bags[:2], [(0, 1)]))
    assert v.condition == 1 and v.witness == (5,)
    # 0 sits in the two end bags of a path but not the middle one
    v = verify_tree_decomposition(c6, TreeDecomposition(bags, [(0, 1), (1, 2)]))
    assert v.condition == 3 and v.witness == (0,)
    with pytest.raises(ValueError):
        decomposition_breadth_length(c6, TreeDecomposition(bags, [(0, 1), (1, 2)]))


def test_gamma_prime_on_random_graphs(rng):
    for _ in range(60):
        G = random_connected(rng, 2, 200 if rng.random() < 0.2 else 60)
        g = to_graph(G)
        lp = build_layering_partition(g, rng.randrange(g.n))
        td = build_gamma_prime(g, lp)
        assert verify_tree_decomposition(g, td).ok
        rep = tree_breadth_bounds(g, lp)
        r_s = cluster_radius(g, lp)[0]
        assert rep.lower_bound == -(-r_s // 3) <= rep.upper_bound <= r_s + 1
        assert rep.length <= cluster_diameter(g, lp)[0] + 2
        if g.n <= 60:
            d = all_pairs_nx(G)
            bl = decomposition_breadth_length(g, td)
            for i, bag in enumerate(td.bags):
                bag = bag.tolist()
                assert bl.bag_radius[i] == min(max(d[v][u] for u in bag) for v in G)
                assert bl.bag_diameter[i] == max(d[u][v] for u in bag for v in bag)


def test_chordal_length():
    r = random.Random(4)
    for _ in range(30):
        g = to_graph(random_chordal(r, r.randint(5, 80)))
        lp = build_layering_partition(g, 0)
        bl = decomposition_breadth_length(g, build_gamma_prime(g, lp))
        assert bl.length <= cluster_diameter(g, lp)[0] + 1


def test_networkx_cross_check(rng):
    # every gamma-prime decomposition must also satisfy an independent checker
    for _ in range(20):
        G = random_connected(rng, 3, 50)
        g = to_graph(G)
        td = build_gamma_prime(g, build_layering_partition(g, 0))
        T = nx.Graph(td.tree_edges)
        T.add_nodes_from(range(len(td.bags)))
        assert nx.is_tree(T)
        bags = [set(b.tolist()) for b in td.bags]
        assert set().union(*bags) == set(G)
        assert all(any({u, v} <= b for b in bags) for u, v in G.edges)
        for v in G:
            assert nx.is_connected(T.subgraph([i for i, b in enumerate(bags) if v in b]))
