import random

import networkx as nx
import pytest

from treelike.estimation import estimation_guarantee_check, iterated_bfs_estimate
from treelike.graph import exact_diameter_radius
from treelike.hyperbolicity import exact_hyperbolicity

from conftest import random_connected, random_tree, to_graph


def test_c6(c6):
    r = iterated_bfs_estimate(c6, 0)
    assert r.estimated_diameter == 3 and r.scans_needed == 2
    assert r.scan_endpoints[:2] == (0, 3)
    assert r.estimated_radius == 3


def test_trees_two_scans_exact():
    rng = random.Random(8)
    for _ in range(100):
        n = rng.randint(2, 1000)
        g = to_graph(random_tree(n, rng.randrange(10**6)))
        diam, rad, _ = exact_diameter_radius(g)
        r = iterated_bfs_estimate(g, rng.randrange(n))
        assert r.scans_needed == 2 and max(r.scan_distances[:2]) == diam
        assert r.estimated_diameter == diam
        assert r.estimated_radius == rad == (diam + 1) // 2


def test_certified_bounds_and_monotone(rng):
    for _ in range(80):
        G = random_connected(rng, 2, 80)
        g = to_graph(G)
        diam, rad, _ = exact_diameter_radius(g)
        r = iterated_bfs_estimate(g, rng.randrange(g.n), max_scans=rng.randint(2, 8))
        assert r.estimated_diameter <= diam and r.estimated_radius >= rad
        assert list(r.scan_distances[:-1]) == sorted(r.scan_distances[:-1])
        assert r.scans_used >= 2
        a, b = r.diameter_pair
        assert nx.shortest_path_length(G, a, b) == r.estimated_diameter
        assert r.estimated_radius == nx.eccentricity(G, r.middle_vertex)
        assert nx.shortest_path_length(G, a, r.middle_vertex) == r.estimated_diameter // 2


def test_guarantee_envelopes(rng):
    for _ in range(60):
        G = random_connected(rng, 4, 60)
        g = to_graph(G)
        diam, rad, _ = exact_diameter_radius(g)
        dh = exact_hyperbolicity(g).delta_half
        for start in rng.sample(range(g.n), 3):
            check = estimation_guarantee_check(iterated_bfs_estimate(g, start), dh, diam, rad)
            assert check.ok, check.violations


def test_guarantee_flags_inconsistent_inputs(c6):
    r = iterated_bfs_estimate(c6, 0)
    bad = estimation_guarantee_check(r, 0, 10, 5)
    assert not bad.ok and len(bad.violations) >= 2


def test_errors(c6):
    with pytest.raises(ValueError):
        iterated_bfs_estimate(c6, 0, max_scans=1)
    with pytest.raises(IndexError):
        iterated_bfs_estimate(c6, 9)


def test_csv_row(c6):
    r = iterated_bfs_estimate(c6, 0, exact=(3, 3))
    assert r.csv_row("c6") == ["c6", 3, 3, 2, 3]
