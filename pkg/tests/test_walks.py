import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopwalk import (
    INFINITY,
    Tunneling,
    brute_force_walks,
    classify_tunneling,
    cospectrality,
    cycle_graph,
    complete_graph,
    from_edges,
    max_degree,
    path_graph,
    star_graph,
    vertex_pair,
    walk_counts,
    walk_table,
    z_value,
)
from loopwalk.errors import DivergenceError, UsageError, WorkCapExceededError
from loopwalk.walks import closed_walk_crosscheck

from conftest import graphs_with_pairs


class TestWalkCounts:
    def test_p3_uu(self):
        g = path_graph(3)
        pair = vertex_pair(g, 0, 2)
        assert walk_counts(g, pair, 0, 0, 4) == [0, 1, 0, 0]

    def test_p3_uv(self):
        g = path_graph(3)
        pair = vertex_pair(g, 0, 2)
        assert walk_counts(g, pair, 0, 2, 3) == [0, 1, 0]

    def test_k2_pair_is_whole_graph(self):
        g = path_graph(2)
        pair = vertex_pair(g, 0, 1)
        assert walk_counts(g, pair, 0, 1, 5) == [1, 0, 0, 0, 0]

    def test_zero_length_rejected(self):
        g = path_graph(3)
        with pytest.raises(UsageError):
            walk_counts(g, vertex_pair(g, 0, 2), 0, 0, 0)


class TestBruteForce:
    def test_matches_p3(self):
        g = path_graph(3)
        pair = vertex_pair(g, 0, 2)
        assert [brute_force_walks(g, pair, 0, 2, k) for k in (1, 2, 3)] == [0, 1, 0]

    def test_c4_adjacent_long_way(self):
        g = cycle_graph(4)
        pair = vertex_pair(g, 0, 1)
        assert brute_force_walks(g, pair, 0, 1, 3) == 1

    def test_k4_two_interior_routes(self):
        g = complete_graph(4)
        pair = vertex_pair(g, 0, 1)
        assert brute_force_walks(g, pair, 0, 1, 2) == 2

    def test_work_cap(self):
        g = complete_graph(8)
        pair = vertex_pair(g, 0, 1)
        with pytest.raises(WorkCapExceededError):
            brute_force_walks(g, pair, 0, 1, 14, work_cap=1000)


@settings(max_examples=60, deadline=None)
@given(graphs_with_pairs(max_n=7), st.data())
def test_dp_equals_brute_force(gp, data):
    g, pair = gp
    x = data.draw(st.sampled_from([pair.u, pair.v] + list(range(g.n))))
    y = data.draw(st.sampled_from([pair.u, pair.v] + list(range(g.n))))
    kmax = 6
    counts = walk_counts(g, pair, x, y, kmax)
    for k in range(1, kmax + 1):
        assert counts[k - 1] == brute_force_walks(g, pair, x, y, k)


@settings(max_examples=60, deadline=None)
@given(graphs_with_pairs(max_n=8))
def test_count_bounds_and_reversal(gp):
    g, pair = gp
    m = max_degree(g)
    kmax = 8
    uv = walk_counts(g, pair, pair.u, pair.v, kmax)
    vu = walk_counts(g, pair, pair.v, pair.u, kmax)
    assert uv == vu
    for k, c in enumerate(uv, start=1):
        assert 0 <= c <= m ** k
    for k in range(1, pair.d):
        assert uv[k - 1] == 0


class TestZValue:
    def test_p3_exact(self):
        g = path_graph(3)
        pair = vertex_pair(g, 0, 2)
        z = z_value(g, pair, 0, 2, 5.0)
        assert z.value == pytest.approx(5.0 ** -2, abs=1e-15)
        assert z.tail_bound >= 0

    def test_divergence_at_m(self):
        g = path_graph(3)
        pair = vertex_pair(g, 0, 2)
        with pytest.raises(DivergenceError):
            z_value(g, pair, 0, 2, 2.0)

    def test_k2_values(self):
        g = path_graph(2)
        pair = vertex_pair(g, 0, 1)
        assert z_value(g, pair, 0, 1, 3.0).value == pytest.approx(1 / 3, abs=1e-14)
        assert z_value(g, pair, 0, 0, 3.0).value == 0.0

    def test_tail_encloses_truth_and_monotone(self):
        # Z is term-by-term decreasing in lambda
        g = cycle_graph(6)
        pair = vertex_pair(g, 0, 3)
        z_lo = z_value(g, pair, 0, 3, 2.5)
        z_hi = z_value(g, pair, 0, 3, 4.0)
        assert z_hi.value <= z_lo.value + z_lo.tail_bound


class TestCospectrality:
    def test_p3_symmetric_pair_infinite(self):
        g = path_graph(3)
        assert cospectrality(g, vertex_pair(g, 0, 2)).is_infinite

    def test_p4_endpoint_neighbor(self):
        g = path_graph(4)
        res = cospectrality(g, vertex_pair(g, 0, 1))
        assert res.c == 1
        assert res.first_mismatch[0] == 2

    def test_star_center_vs_leaf(self):
        g = star_graph(3)
        res = cospectrality(g, vertex_pair(g, 0, 1))
        assert res.c == 1
        t, nu, nv = res.first_mismatch
        assert t == 2 and nu != nv

    def test_symmetric_in_u_v(self):
        g = path_graph(4)
        a = cospectrality(g, vertex_pair(g, 0, 1))
        b = cospectrality(g, vertex_pair(g, 1, 0))
        assert a.c == b.c

    def test_vertex_transitive_cycle(self):
        g = cycle_graph(6)
        assert cospectrality(g, vertex_pair(g, 1, 4)).is_infinite

    def test_crosscheck_agrees_on_small_graphs(self):
        for g, u, v in [
            (path_graph(4), 0, 1),
            (path_graph(5), 0, 4),
            (star_graph(3), 0, 1),
            (cycle_graph(5), 0, 2),
        ]:
            assert closed_walk_crosscheck(g, vertex_pair(g, u, v)) == []


class TestClassify:
    def test_infinite_is_asymptotic(self):
        assert classify_tunneling(INFINITY, 3) is Tunneling.ASYMPTOTIC

    def test_partial(self):
        assert classify_tunneling(2, 3) is Tunneling.PARTIAL

    def test_none(self):
        assert classify_tunneling(0, 3) is Tunneling.NONE

    def test_finite_at_least_d(self):
        assert classify_tunneling(3, 3) is Tunneling.ASYMPTOTIC


def test_walk_table_json():
    g = path_graph(3)
    pair = vertex_pair(g, 0, 2)
    table = walk_table(g, pair, 4)
    payload = json.loads(table.to_json())
    assert payload["pair"] == [0, 2]
    assert payload["counts"]["uu"] == ["0", "1", "0", "0"]
    assert payload["counts"]["uv"] == ["0", "1", "0", "0"]
