import math
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from treelike.distortion import (DEFAULT_THRESHOLDS, distortion_cdf, distortion_report, report_and_cdf,
                                 td_lower_bound)
from treelike.graph import pair_sampler
from treelike.layering import build_layering_partition, cluster_diameter
from treelike.trees import EmbeddingTree, build_canonic_tree, build_H_ell, build_H_prime_ell, compute_ell

from conftest import all_pairs_nx, random_connected, random_tree, to_graph


def trees_for(g, s=0):
    lp = build_layering_partition(g, s)
    h = build_canonic_tree(g, lp)
    ell = compute_ell(g, h)
    ds = cluster_diameter(g, lp)[0]
    return {"H": h, "H_ell": build_H_ell(h, ell), "H_prime_ell": build_H_prime_ell(g, lp, h, ds, ell)}


def brute(G, t):
    """All six measures with exact rationals, from networkx distances."""
    T = nx.Graph(t.edges().tolist())
    dt = dict(nx.all_pairs_shortest_path_length(T))
    dg = all_pairs_nx(G)
    w = Fraction(t.weight_times_two, 2)
    left, right, rel, st, sg = [], [], Fraction(0), Fraction(0), 0
    n = G.number_of_nodes()
    for u in range(n):
        for v in range(u + 1, n):
            a, b = dg[u][v], dt[u][v] * w
            if b > a:
                right.append(b / a)
            elif b < a:
                left.append(a / b)
            rel += abs(b - a) / a
            st += b
            sg += a
    pairs = n * (n - 1) // 2
    return dict(left=len(left), right=len(right), equal=pairs - len(left) - len(right),
                max_left=max(left, default=None), max_right=max(right, default=None),
                avg_left=sum(left) / len(left) if left else None,
                avg_right=sum(right) / len(right) if right else None,
                rel=rel / pairs, dw=st / sg, pairs=pairs)


def test_c6_against_h(c6):
    r = distortion_report(c6, trees_for(c6)["H"])
    assert (r.left_count, r.right_count, r.equal_count) == (1, 3, 11)
    assert r.max_distortion_left == 3 and r.max_distortion_right == 3
    assert r.sum_tree_distance == 31 and r.sum_graph_distance == 27
    assert r.distance_weighted_avg_distortion == pytest.approx(31 / 27)


def test_matches_brute_force(rng):
    for _ in range(25):
        G = random_connected(rng, 3, 35)
        g = to_graph(G)
        for kind, t in trees_for(g, rng.randrange(g.n)).items():
            r = distortion_report(g, t)
            b = brute(G, t)
            assert (r.left_count, r.right_count, r.equal_count, r.pair_count) == (
                b["left"], b["right"], b["equal"], b["pairs"])
            assert r.max_distortion_left == b["max_left"] and r.max_distortion_right == b["max_right"]
            for ours, ref in ((r.avg_distortion_left, b["avg_left"]), (r.avg_distortion_right, b["avg_right"])):
                assert (ours is None) == (ref is None)
                if ref is not None:
                    assert ours == pytest.approx(float(ref), rel=1e-12)
            assert r.avg_relative_distortion == pytest.approx(float(b["rel"]), rel=1e-12)
            assert r.distance_weighted_avg_distortion == pytest.approx(float(b["dw"]), rel=1e-12)
            expected = (b["equal"] + (b["avg_right"] or 0) * b["right"] + (b["avg_left"] or 0) * b["left"]) / b["pairs"]
            assert r.blended_average() == pytest.approx(float(expected), rel=1e-12)
            if kind != "H":
                assert r.left_count == 0
            else:
                assert r.max_distortion_right is None or r.max_distortion_right <= 3


def test_identity_embedding():
    G = random_tree(40, 3)
    g = to_graph(G)
    t = trees_for(g, 0)["H"]
    r, cdf = report_and_cdf(g, t)
    assert r.equal_pair_fraction == 1 and r.avg_relative_distortion == 0
    assert r.distance_weighted_avg_distortion == 1 and r.blended_average() == 1
    assert cdf.exact_fraction == 1 and all(f == 1 for f in cdf.fraction_below)


def test_cdf_against_brute_force(rng):
    G = random_connected(rng, 30, 50)
    g = to_graph(G)
    for t in trees_for(g).values():
        cdf = distortion_cdf(g, t)
        T = nx.Graph(t.edges().tolist())
        dt = dict(nx.all_pairs_shortest_path_length(T))
        dg = all_pairs_nx(G)
        ratios = [max(Fraction(dt[u][v] * t.weight_times_two, 2 * dg[u][v]),
                      Fraction(2 * dg[u][v], dt[u][v] * t.weight_times_two))
                  for u in range(g.n) for v in range(u + 1, g.n)]
        for eps, frac in zip(DEFAULT_THRESHOLDS, cdf.fraction_below):
            assert frac == sum(x < eps for x in ratios) / len(ratios)
        assert list(cdf.fraction_below) == sorted(cdf.fraction_below)
        assert cdf.exact_fraction == sum(x == 1 for x in ratios) / len(ratios)


def test_sampled_within_binomial_bounds(rng):
    G = random_connected(rng, 300, 400, kind="ba")
    g = to_graph(G)
    k = 40000
    for t in trees_for(g).values():
        full = distortion_cdf(g, t)
        samp = distortion_cdf(g, t, pair_sampler(g, "uniform", k=k, seed=11))
        for p, q in zip((full.exact_fraction, *full.fraction_below), (samp.exact_fraction, *samp.fraction_below)):
            sigma = math.sqrt(max(p * (1 - p), 1e-12) / k)
            assert abs(p - q) <= 3 * sigma + 1e-9


def test_td_lower_bound():
    g = to_graph(random_tree(30, 1))
    hp = trees_for(g)["H_prime_ell"]
    assert td_lower_bound(distortion_report(g, hp)) == 1
    with pytest.raises(ValueError):
        td_lower_bound(distortion_report(g, trees_for(g)["H"]))
    sampled = distortion_report(g, hp, pair_sampler(g, "uniform", k=100, seed=1))
    assert sampled.sampling == "sampled"
    with pytest.warns(UserWarning):
        td_lower_bound(sampled)


def test_pairs_must_be_graph_vertices(c6):
    hp = trees_for(c6)["H_prime_ell"]
    with pytest.raises(ValueError):
        distortion_report(c6, hp, [np.array([[0, 7]])])
    with pytest.raises(ValueError):
        distortion_report(c6, EmbeddingTree("H", np.array([-1, 0], dtype=np.int32), 0, 2))
