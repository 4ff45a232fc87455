#!/usr/bin/env python3
"""Desk-scale reproduction run: certify endpoint transfer on P3, P5, P7.

For each path and target error eps, sets Q just above the loop-weight
threshold and prints the readout time, the transfer strength at readout, the
floor 1 - 8*eps', and the readout-window minimum.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from loopwalk import (  # noqa: E402
    INFINITY,
    build_hamiltonian,
    epsilon_prime,
    max_degree,
    path_graph,
    q_threshold,
    readout_mp,
    vertex_pair,
    window_min_mp,
)


def main():
    delta = 0.05
    print(f"{'graph':>6} {'eps':>6} {'Q':>10} {'t0':>12} {'p(t0)':>10} "
          f"{'floor':>10} {'win_min':>10}")
    for n in (3, 5, 7):
        g = path_graph(n)
        pair = vertex_pair(g, 0, n - 1)
        m = max_degree(g)
        for eps in (0.04, 0.01):
            q = q_threshold(eps, m, INFINITY, pair.d) * (1 + 1e-6)
            h = build_hamiltonian(g, pair, q)
            gap, t0, p_t0 = readout_mp(h)
            floor = 1 - 8 * epsilon_prime(q, m, INFINITY, pair.d)
            wmin = window_min_mp(h, delta)
            print(f"{'P' + str(n):>6} {eps:>6} {q:>10.2f} {t0:>12.4e} "
                  f"{p_t0:>10.6f} {floor:>10.6f} {wmin:>10.6f}")


if __name__ == "__main__":
    main()
