import random

import pytest

from gradmorph.graph import Graph, Matching


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def path_graph(n: int, weights=None) -> Graph:
    g = Graph()
    for v in range(n):
        g.ensure_vertex(v)
    for v in range(n - 1):
        w = 1.0 if weights is None else weights[v]
        g.add_edge(v, v + 1, w)
    return g


def cycle_graph(n: int, weights=None) -> Graph:
    g = Graph()
    for v in range(n):
        g.ensure_vertex(v)
    for v in range(n):
        w = 1.0 if weights is None else weights[v]
        g.add_edge(v, (v + 1) % n, w)
    return g


def alternating_cycle_fixture(k: int, blue_w: float, red_w: float):
    """2k-cycle with alternating source/target matchings."""
    g = cycle_graph(2 * k, [blue_w if i % 2 == 0 else red_w for i in range(2 * k)])
    blues = [g.edge_id(2 * i, 2 * i + 1) for i in range(k)]
    reds = [g.edge_id(2 * i + 1, (2 * i + 2) % (2 * k)) for i in range(k)]
    return g, Matching(g, blues), Matching(g, reds)
