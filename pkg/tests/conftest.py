import os
import random
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

from treelike.graph import Graph, from_edges, largest_connected_component, read_edge_list

DATA_DIR = Path(os.environ.get("TREELIKE_DATA", Path(__file__).parent / "data"))


def to_graph(G: nx.Graph) -> Graph:
    G = nx.convert_node_labels_to_integers(G, ordering="sorted")
    return from_edges(G.number_of_nodes(), list(G.edges()))


def to_nx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges().tolist())
    return G


def random_connected(rng: random.Random, n_lo=4, n_hi=40, kind=None) -> nx.Graph:
    """Random connected graph drawn from a small mix of families."""
    while True:
        n = rng.randint(n_lo, n_hi)
        k = kind or rng.choice(["gnp", "gnp", "ba", "tree_plus", "geo"])
        seed = rng.randrange(2**31)
        if k == "gnp":
            G = nx.gnp_random_graph(n, rng.uniform(1.2 / n, 0.4), seed=seed)
        elif k == "ba":
            G = nx.barabasi_albert_graph(n, rng.randint(1, min(3, n - 1)), seed=seed)
        elif k == "tree_plus":
            G = nx.random_labeled_tree(n, seed=seed) if hasattr(nx, "random_labeled_tree") else nx.random_tree(n, seed=seed)
            for _ in range(rng.randint(0, n // 3)):
                G.add_edge(rng.randrange(n), rng.randrange(n))
            G.remove_edges_from(nx.selfloop_edges(G))
        else:
            G = nx.random_geometric_graph(n, rng.uniform(0.2, 0.5), seed=seed)
        G = G.subgraph(max(nx.connected_components(G), key=len)).copy()
        if G.number_of_nodes() >= n_lo:
            return nx.convert_node_labels_to_integers(G, ordering="sorted")


def random_tree(n: int, seed: int) -> nx.Graph:
    if hasattr(nx, "random_labeled_tree"):
        return nx.random_labeled_tree(n, seed=seed)
    return nx.random_tree(n, seed=seed)


def random_chordal(rng: random.Random, n: int) -> nx.Graph:
    """Chordal graph by adding vertices whose neighborhoods are cliques."""
    G = nx.Graph()
    G.add_node(0)
    for v in range(1, n):
        u = rng.randrange(v)
        clique = [u] + [w for w in G.neighbors(u) if rng.random() < 0.5]
        clique = [w for w in clique if all(G.has_edge(w, x) for x in clique if x != w)]
        G.add_edges_from((v, w) for w in clique)
    return G


def cycle(n: int) -> Graph:
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def dataset(name: str) -> Graph | None:
    """Largest component of a locally provided dataset, or None."""
    for ext in (".txt", ".edges", ".edgelist", ".tsv", ".csv"):
        p = DATA_DIR / f"{name}{ext}"
        if p.exists():
            return largest_connected_component(read_edge_list(p))
    return None


@pytest.fixture
def c6():
    return cycle(6)


@pytest.fixture
def rng():
    return random.Random(12345)


def all_pairs_nx(G):
    return dict(nx.all_pairs_shortest_path_length(G))


__all__ = ["to_graph", "to_nx", "random_connected", "random_tree", "random_chordal", "cycle", "path",
           "dataset", "all_pairs_nx", "np"]
