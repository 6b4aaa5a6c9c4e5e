import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _samples import built_samples
from edgeiso.catalog import catalog_build
from edgeiso.errors import CapacityError, InputError
from edgeiso.exact import (
    complement_duality_check,
    delta_from_graph,
    delta_of_order,
    eip_profile,
    find_nested_order,
    is_optimal_order,
    max_inner_edges,
    subset_edge_counts,
)
from edgeiso.graph import Graph, cartesian_product, inner_edge_count


def _naive_max(g: Graph, m: int) -> int:
    return max(inner_edge_count(g, c) for c in combinations(range(g.n), m))


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


class TestMaxInnerEdges:
    def test_examples(self):
        for p in range(1, 8):
            for m in range(p + 1):
                assert max_inner_edges(catalog_build("K", p), m) == m * (m - 1) // 2
        assert max_inner_edges(catalog_build("Q", 3), 4) == 4
        assert max_inner_edges(catalog_build("C", 5), 3) == 2

    @settings(max_examples=80, deadline=None)
    @given(graphs())
    def test_both_routes_agree_with_naive(self, g):
        prof = eip_profile(g)
        for m in range(g.n + 1):
            want = _naive_max(g, m)
            assert prof.I[m] == want
            assert max_inner_edges(g, m) == want

    def test_bad_size(self):
        with pytest.raises(InputError):
            max_inner_edges(catalog_build("K", 3), 4)

    def test_capacity(self):
        with pytest.raises(CapacityError, match="downset engine"):
            max_inner_edges(catalog_build("K", 25), 3)
        with pytest.raises(CapacityError):
            eip_profile(catalog_build("C", 25))


class TestProfile:
    def test_examples(self):
        assert eip_profile(catalog_build("Q", 3)).I == (0, 0, 1, 2, 4, 5, 7, 9, 12)
        assert eip_profile(catalog_build("petersen")).I == (0, 0, 1, 2, 3, 5, 6, 8, 10, 12, 15)
        assert eip_profile(catalog_build("K", 4)).I == (0, 0, 1, 3, 6)

    def test_delta_examples(self):
        assert delta_from_graph(catalog_build("Q", 3)) == (0, 1, 1, 2, 1, 2, 2, 3)
        prism = cartesian_product(catalog_build("C", 5), catalog_build("K", 2))
        assert delta_from_graph(prism) == (0, 1, 1, 2, 1, 2, 1, 2, 2, 3)
        assert delta_from_graph(catalog_build("K", 9)) == tuple(range(9))

    @settings(max_examples=40, deadline=None)
    @given(graphs())
    def test_profile_invariants(self, g):
        I = eip_profile(g).I
        assert I[0] == 0 and I[-1] == g.edge_count
        assert all(0 <= b - a <= g.n - 1 for a, b in zip(I, I[1:]))

    def test_subset_counts_read_only(self):
        e = subset_edge_counts(catalog_build("C", 5))
        assert e[0b11111] == 5
        with pytest.raises(ValueError):
            e[0] = 1

    def test_deterministic(self):
        g = catalog_build("petersen")
        assert eip_profile(g) == eip_profile(Graph(g.n, g.adjacency))


class TestNestedOrder:
    def test_clique_identity(self):
        res = find_nested_order(catalog_build("K", 5))
        assert res.found and res.order == (0, 1, 2, 3, 4)

    def test_petersen_found(self):
        g = catalog_build("petersen")
        res = find_nested_order(g)
        assert res.found and is_optimal_order(g, res.order)

    def test_clique_minus_edge_square_has_none(self):
        k4e = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
        res = find_nested_order(cartesian_product(k4e, k4e))
        assert not res.found and res.order is None

    @settings(max_examples=40, deadline=None)
    @given(graphs(8))
    def test_found_orders_are_optimal_and_obey_unit_steps(self, g):
        res = find_nested_order(g)
        if res.found:
            d = delta_of_order(g, res.order)
            assert d == delta_from_graph(g)
            assert all(d[j + 1] <= d[j] + 1 for j in range(len(d) - 1))

    def test_capacity(self):
        with pytest.raises(CapacityError):
            find_nested_order(catalog_build("C", 21))


class TestTheoremChecks:
    def test_duality_examples(self):
        pet = eip_profile(catalog_build("petersen")).I
        assert pet[6] == pet[4] + 15 - 3 * 4
        assert complement_duality_check(catalog_build("K", 4))
        q3 = eip_profile(catalog_build("Q", 3)).I
        assert q3[5] == q3[3] + 12 - 9

    def test_duality_needs_regular(self):
        with pytest.raises(InputError):
            complement_duality_check(catalog_build("path", 4))

    def test_regular_catalog_graphs(self):
        for fam, params, g in built_samples(16):
            if g.is_regular():
                assert complement_duality_check(g), (fam, params)

    def test_symmetric_implies_regular_random(self):
        from edgeiso.delta import is_symmetric

        rng = random.Random(11)
        hits = 0
        for _ in range(1000):
            n = rng.randint(1, 8)
            prob = rng.random()
            g = Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < prob])
            if is_symmetric(delta_from_graph(g)):
                hits += 1
                assert g.is_regular(), g.to_json()
        assert hits > 50
