#!/usr/bin/env python3
"""Locate small-graph fixtures for the tunneling trichotomy test suite.

Enumerates all connected graphs on up to 7 vertices (networkx atlas) and, for
every vertex pair, computes distance d and cospectrality c. Emits one fixture
per regime:

  - finite c with c >= d   (asymptotic tunneling, non-trivial ratio bound)
  - c == d - 1             (partial tunneling)
  - c <  d - 1             (no tunneling)

Preference goes to small d (keeps fidelity scans cheap) and small n. The
chosen fixtures are written as edge-list files plus a fixtures.json manifest.
Deterministic: the atlas order is fixed, no randomness involved; --seed is
accepted for interface uniformity with the other tooling and ignored here.
"""

import argparse
import json
import os
import sys

import networkx as nx

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from loopwalk import (  # noqa: E402
    INFINITY,
    canonical_edge_list,
    cospectrality,
    from_edges,
    max_degree,
    vertex_pair,
)


def candidates():
    for atlas_idx, ga in enumerate(nx.graph_atlas_g()):
        n = ga.number_of_nodes()
        if n < 3 or not nx.is_connected(ga):
            continue
        g = from_edges(ga.edges(), n=n)
        for u in range(n):
            for v in range(u + 1, n):
                pair = vertex_pair(g, u, v)
                c = cospectrality(g, pair).c
                yield atlas_idx, g, pair, c


def score(g, pair):
    # prefer small distance, then small graphs, then small degree
    return (pair.d, g.n, max_degree(g))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..",
                                                  "tests", "fixtures"))
    ap.add_argument("--seed", type=int, default=0, help="unused; deterministic search")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    best = {"finite_asymptotic": None, "partial": None, "none": None}
    for atlas_idx, g, pair, c in candidates():
        if c == INFINITY:
            continue
        if c >= pair.d:
            key = "finite_asymptotic"
        elif c == pair.d - 1:
            key = "partial"
        else:
            key = "none"
        entry = (score(g, pair), atlas_idx, g, pair, c)
        if best[key] is None or entry[:2] < best[key][:2]:
            best[key] = entry

    manifest = {}
    for key, entry in best.items():
        if entry is None:
            print(f"WARNING: no fixture found for {key}")
            continue
        _, atlas_idx, g, pair, c = entry
        fname = f"{key}.txt"
        with open(os.path.join(args.out, fname), "w") as fh:
            fh.write(canonical_edge_list(g))
        manifest[key] = {
            "file": fname,
            "atlas_index": atlas_idx,
            "n": g.n,
            "u": pair.u,
            "v": pair.v,
            "d": pair.d,
            "c": "infinity" if c == INFINITY else int(c),
            "m": max_degree(g),
        }
        print(f"{key}: atlas #{atlas_idx} n={g.n} u={pair.u} v={pair.v} "
              f"d={pair.d} c={c} m={max_degree(g)}")
    with open(os.path.join(args.out, "fixtures.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main()
