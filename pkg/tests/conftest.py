import json
import os
import random

import pytest
from hypothesis import strategies as st

from loopwalk import from_edges, vertex_pair

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(scope="session")
def fixture_manifest():
    with open(os.path.join(FIXTURE_DIR, "fixtures.json")) as fh:
        return json.load(fh)


def load_fixture(manifest, key):
    meta = manifest[key]
    with open(os.path.join(FIXTURE_DIR, meta["file"])) as fh:
        edges = [tuple(map(int, line.split())) for line in fh if line.strip()]
    g = from_edges(edges, n=meta["n"])
    return g, vertex_pair(g, meta["u"], meta["v"]), meta


@st.composite
def connected_graphs(draw, min_n=2, max_n=8):
    """Small connected graph: random spanning tree plus random extra edges."""
    n = draw(st.integers(min_n, max_n))
    edges = set()
    for i in range(1, n):
        parent = draw(st.integers(0, i - 1))
        edges.add((parent, i))
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges]
    extras = draw(st.sets(st.sampled_from(all_pairs)) if all_pairs else st.just(set()))
    edges |= extras
    return from_edges(sorted(edges), n=n)


@st.composite
def graphs_with_pairs(draw, min_n=2, max_n=8):
    g = draw(connected_graphs(min_n=min_n, max_n=max_n))
    u = draw(st.integers(0, g.n - 1))
    v = draw(st.integers(0, g.n - 1).filter(lambda x: x != u))
    return g, vertex_pair(g, u, v)


def random_involution_graph(rng: random.Random, half: int):
    """Connected graph on 2*half vertices symmetric under i <-> n-1-i, with
    u = 0 and v = n-1 swapped by the involution (so co(u, v) is infinite)."""
    n = 2 * half
    sigma = lambda x: n - 1 - x
    while True:
        edges = set()

        def add(a, b):
            if a != b:
                edges.add((min(a, b), max(a, b)))

        # symmetric spanning structure: a path through one half, mirrored,
        # joined in the middle
        for i in range(half - 1):
            add(i, i + 1)
            add(sigma(i), sigma(i + 1))
        add(half - 1, half)
        # random symmetric extra edges
        for a in range(n):
            for b in range(a + 1, n):
                if rng.random() < 0.25:
                    add(a, b)
                    add(sigma(a), sigma(b))
        try:
            g = from_edges(sorted(edges), n=n)
        except Exception:
            continue
        return g, vertex_pair(g, 0, n - 1)
